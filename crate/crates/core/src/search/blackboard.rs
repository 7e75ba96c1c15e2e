use rand::Rng;

use crate::hints::{HintCatalog, HintId, HintSet, HINT_COUNT};

use crate::draw::{below, pick};

const EMPTY_SLOT: u16 = u16::MAX;

/// Shared, duplicate-free store of at most `capacity` hints.
#[derive(Clone, Debug)]
pub struct Blackboard {
    hints: Vec<HintId>,
    /// Position of each catalog hint on the board, or `EMPTY_SLOT`.
    slot: Vec<u16>,
    capacity: usize,
}

/// What a call to [`Blackboard::post_hint`] did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostOutcome {
    /// The agent had no hint that is not already on the board.
    NothingNovel,
    Appended(HintId),
    Replaced {
        removed: HintId,
        added: HintId,
    },
    /// Board full and every hint on it is one the agent exhibits.
    NoRoom,
}

impl Blackboard {
    pub fn new(capacity: usize) -> Blackboard {
        Blackboard {
            hints: Vec::with_capacity(capacity.min(HINT_COUNT)),
            slot: vec![EMPTY_SLOT; HINT_COUNT],
            capacity,
        }
    }

    /// A board holding `hints` in the given order. Duplicates are dropped.
    pub fn with_hints(capacity: usize, hints: impl IntoIterator<Item = HintId>) -> Blackboard {
        let mut board = Blackboard::new(capacity);
        for id in hints {
            if !board.contains(id) && !board.is_full() {
                board.push(id);
            }
        }
        board
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.hints.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.hints.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.hints.len() >= self.capacity
    }

    #[inline]
    pub fn contains(&self, id: HintId) -> bool {
        self.slot[id.index()] != EMPTY_SLOT
    }

    #[inline]
    pub fn get(&self, position: usize) -> HintId {
        self.hints[position]
    }

    pub fn hints(&self) -> &[HintId] {
        &self.hints
    }

    fn push(&mut self, id: HintId) {
        self.slot[id.index()] = self.hints.len() as u16;
        self.hints.push(id);
    }

    fn replace(&mut self, position: usize, id: HintId) -> HintId {
        let old = std::mem::replace(&mut self.hints[position], id);
        self.slot[old.index()] = EMPTY_SLOT;
        self.slot[id.index()] = position as u16;
        old
    }

    /// Pick-and-replace: post one of the agent's hints that is not yet on
    /// the board, chosen uniformly. A full board gives up a uniformly chosen
    /// hint that the agent does not exhibit.
    pub fn post_hint<R: Rng + ?Sized>(
        &mut self,
        agent_hints: &HintSet,
        rng: &mut R,
    ) -> PostOutcome {
        let mut novel = [HintId(0); 6];
        let mut n_novel = 0;
        for id in agent_hints.iter() {
            if !self.contains(id) {
                novel[n_novel] = id;
                n_novel += 1;
            }
        }
        if n_novel == 0 {
            return PostOutcome::NothingNovel;
        }
        let added = novel[pick(rng, n_novel)];

        if !self.is_full() {
            self.push(added);
            return PostOutcome::Appended(added);
        }

        let shared = agent_hints.len() - n_novel;
        if self.hints.len() == shared {
            return PostOutcome::NoRoom;
        }
        // rejection sampling is uniform over the hints the agent lacks
        let position = loop {
            let p = below(rng, self.hints.len());
            if !agent_hints.contains(self.hints[p]) {
                break p;
            }
        };
        let removed = self.replace(position, added);
        PostOutcome::Replaced { removed, added }
    }

    /// Size within capacity, no duplicates, every entry a catalog hint.
    pub fn check_invariants(&self, catalog: &HintCatalog) -> Result<(), String> {
        if self.hints.len() > self.capacity {
            return Err(format!(
                "board holds {} hints, capacity {}",
                self.hints.len(),
                self.capacity
            ));
        }
        let mut seen = vec![false; HINT_COUNT];
        for (pos, id) in self.hints.iter().enumerate() {
            if id.index() >= catalog.len() {
                return Err(format!("hint id {} not in catalog", id.0));
            }
            if std::mem::replace(&mut seen[id.index()], true) {
                return Err(format!("hint id {} appears twice", id.0));
            }
            if self.slot[id.index()] as usize != pos {
                return Err(format!("slot table out of sync for hint {}", id.0));
            }
        }
        let listed = self.slot.iter().filter(|&&s| s != EMPTY_SLOT).count();
        if listed != self.hints.len() {
            return Err("slot table lists hints that are not on the board".into());
        }
        Ok(())
    }
}
