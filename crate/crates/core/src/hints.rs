//! Column hints: partial assignments that make one column of the sum add up
//! modulo 10 for some incoming carry.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::puzzle::{Assignment, Letter};

/// Number of hints in the catalog.
pub const HINT_COUNT: usize = 351;

/// One column of the sum, counted from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ColumnId(u8);

#[derive(Clone, Copy, Debug)]
struct ColumnShape {
    addends: [Letter; 2],
    result: Letter,
    /// Distinct letters in addend-then-result reading order.
    letters: &'static [Letter],
}

use Letter::*;

const COLUMNS: [ColumnShape; 6] = [
    ColumnShape {
        addends: [D, D],
        result: T,
        letters: &[D, T],
    },
    ColumnShape {
        addends: [L, L],
        result: R,
        letters: &[L, R],
    },
    ColumnShape {
        addends: [A, A],
        result: E,
        letters: &[A, E],
    },
    ColumnShape {
        addends: [N, R],
        result: B,
        letters: &[N, R, B],
    },
    ColumnShape {
        addends: [O, E],
        result: O,
        letters: &[O, E],
    },
    ColumnShape {
        addends: [D, G],
        result: R,
        letters: &[D, G, R],
    },
];

impl ColumnId {
    pub const ALL: [ColumnId; 6] = [
        ColumnId(0),
        ColumnId(1),
        ColumnId(2),
        ColumnId(3),
        ColumnId(4),
        ColumnId(5),
    ];

    pub fn new(index: usize) -> Option<ColumnId> {
        (index < 6).then_some(ColumnId(index as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn addends(self) -> [Letter; 2] {
        COLUMNS[self.index()].addends
    }

    pub fn result(self) -> Letter {
        COLUMNS[self.index()].result
    }

    /// Distinct letters of the column in assimilation order.
    #[inline]
    pub fn letters(self) -> &'static [Letter] {
        COLUMNS[self.index()].letters
    }

    /// Carries that can enter the column. The rightmost column has none.
    pub fn carries(self) -> &'static [u8] {
        if self.0 == 0 {
            &[0]
        } else {
            &[0, 1]
        }
    }

    /// The column sum modulo 10 holds for these letter digits and carry.
    fn holds(self, digit: impl Fn(Letter) -> u8, carry: u8) -> bool {
        let [x, y] = self.addends();
        (digit(x) + digit(y) + carry) % 10 == digit(self.result())
    }
}

impl fmt::Display for ColumnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.addends();
        write!(f, "{x}+{y}={}", self.result())
    }
}

/// Dense index of a hint in the catalog.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HintId(pub u16);

impl HintId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hint {
    column: ColumnId,
    epsilon: u8,
    digits: [u8; 3],
    /// Nibbles of the hint letters, and the digits they must hold.
    mask: u64,
    value: u64,
}

impl Hint {
    pub fn column(&self) -> ColumnId {
        self.column
    }

    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    /// `(letter, digit)` pairs in the order they are assimilated.
    pub fn pairs(&self) -> impl Iterator<Item = (Letter, u8)> + '_ {
        self.column
            .letters()
            .iter()
            .copied()
            .zip(self.digits.iter().copied())
    }

    /// The assignment places every digit of the hint.
    #[inline]
    pub fn is_exhibited_by(&self, a: &Assignment) -> bool {
        a.packed_digits() & self.mask == self.value
    }

    /// Moves the hint's digits into place, one swap per mismatched pair.
    ///
    /// Hint digits are pairwise distinct, so a later swap never displaces a
    /// digit fixed by an earlier one; at most three swaps happen.
    pub fn assimilate(&self, a: &Assignment) -> Assignment {
        let mut out = *a;
        self.assimilate_in_place(&mut out);
        out
    }

    #[inline]
    pub(crate) fn assimilate_in_place(&self, a: &mut Assignment) {
        for (l, d) in self.pairs() {
            if a.digit(l) != d {
                let holder = a.holder(d);
                a.swap_in_place(l, holder);
            }
        }
        debug_assert!(self.is_exhibited_by(a));
    }
}

impl fmt::Display for Hint {
    /// `col=<0..5> eps=<0|1> <LETTER>=<digit>,...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "col={} eps={} ", self.column.0, self.epsilon)?;
        for (i, (l, d)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}={d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Catalog hints exhibited by one assignment; at most one per column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HintSet {
    ids: [HintId; 6],
    len: u8,
}

impl HintSet {
    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_slice(&self) -> &[HintId] {
        &self.ids[..self.len as usize]
    }

    #[inline]
    pub fn contains(&self, id: HintId) -> bool {
        self.as_slice().contains(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = HintId> + '_ {
        self.as_slice().iter().copied()
    }

    #[inline]
    fn push(&mut self, id: HintId) {
        self.ids[self.len as usize] = id;
        self.len += 1;
    }
}

const NO_HINT: u16 = u16::MAX;

/// All 351 column hints with their correctness flags.
///
/// Ordered by column, then carry, then lexicographic digit tuple.
pub struct HintCatalog {
    hints: Vec<Hint>,
    correct: Vec<bool>,
    /// Per column, digits of the column letters (base-10 key) to hint id.
    lookup: Vec<u16>,
}

/// Column letters and base-10 place weights of their digits in the lookup
/// key; two-letter columns repeat their first letter with weight 0.
const KEY_LAYOUT: [([usize; 3], [usize; 3]); 6] = {
    let mut out = [([0; 3], [0; 3]); 6];
    let mut c = 0;
    while c < 6 {
        let letters = COLUMNS[c].letters;
        let n = letters.len();
        let mut i = 0;
        while i < 3 {
            let j = (i + n).saturating_sub(3);
            out[c].0[i] = letters[j].index();
            out[c].1[i] = if i + n < 3 { 0 } else { [1, 10, 100][2 - i] };
            i += 1;
        }
        c += 1;
    }
    out
};

/// Lookup-table index of column `C` under packed digits `w`.
#[inline(always)]
fn column_key<const C: usize>(w: u64) -> usize {
    let (letters, weights) = KEY_LAYOUT[C];
    let mut k = C * 1000;
    for i in 0..3 {
        k += weights[i] * ((w >> (4 * letters[i])) & 0xf) as usize;
    }
    k
}

#[inline]
fn key(digits: impl Iterator<Item = u8>) -> usize {
    digits.fold(0usize, |k, d| k * 10 + d as usize)
}

/// Carries entering each column when the solution is added up.
fn solution_carries() -> [u8; 6] {
    let s = Assignment::solution();
    let mut carries = [0u8; 6];
    let mut carry = 0;
    for col in ColumnId::ALL {
        carries[col.index()] = carry;
        let [x, y] = col.addends();
        carry = (s.digit(x) + s.digit(y) + carry) / 10;
    }
    carries
}

impl HintCatalog {
    pub fn build() -> HintCatalog {
        let mut hints = Vec::with_capacity(HINT_COUNT);
        for col in ColumnId::ALL {
            let letters = col.letters();
            for &epsilon in col.carries() {
                let combos = 10usize.pow(letters.len() as u32);
                for code in 0..combos {
                    let mut digits = [0u8; 3];
                    let mut rest = code;
                    for slot in (0..letters.len()).rev() {
                        digits[slot] = (rest % 10) as u8;
                        rest /= 10;
                    }
                    let tuple = &digits[..letters.len()];
                    let distinct = tuple
                        .iter()
                        .enumerate()
                        .all(|(i, d)| !tuple[..i].contains(d));
                    let digit_of = |l: Letter| {
                        let pos = letters.iter().position(|&x| x == l).unwrap();
                        digits[pos]
                    };
                    if distinct && col.holds(digit_of, epsilon) {
                        let (mut mask, mut value) = (0u64, 0u64);
                        for (&l, &d) in letters.iter().zip(&digits) {
                            mask |= 0xf << (4 * l.index());
                            value |= u64::from(d) << (4 * l.index());
                        }
                        hints.push(Hint {
                            column: col,
                            epsilon,
                            digits,
                            mask,
                            value,
                        });
                    }
                }
            }
        }

        let carries = solution_carries();
        let solution = Assignment::solution();
        let correct = hints
            .iter()
            .map(|h| h.epsilon == carries[h.column.index()] && h.is_exhibited_by(&solution))
            .collect();

        let mut lookup = vec![NO_HINT; 6 * 1000];
        for (i, h) in hints.iter().enumerate() {
            let k = h.column.index() * 1000 + key(h.pairs().map(|(_, d)| d));
            debug_assert_eq!(lookup[k], NO_HINT, "two carries share one digit tuple");
            lookup[k] = i as u16;
        }

        HintCatalog {
            hints,
            correct,
            lookup,
        }
    }

    /// Process-wide catalog, built on first use.
    pub fn shared() -> &'static HintCatalog {
        static CATALOG: OnceLock<HintCatalog> = OnceLock::new();
        CATALOG.get_or_init(HintCatalog::build)
    }

    pub fn len(&self) -> usize {
        self.hints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hints.is_empty()
    }

    #[inline]
    pub fn hint(&self, id: HintId) -> &Hint {
        &self.hints[id.index()]
    }

    #[inline]
    pub fn is_correct(&self, id: HintId) -> bool {
        self.correct[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = HintId> {
        (0..self.hints.len() as u16).map(HintId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (HintId, &Hint)> {
        self.ids().zip(self.hints.iter())
    }

    /// Id of a hint with these contents, if it is in the catalog.
    pub fn find(&self, hint: &Hint) -> Option<HintId> {
        self.iter().find(|(_, h)| *h == hint).map(|(id, _)| id)
    }

    /// Looks up the hint for a column, carry and digits (in the column's letter order).
    pub fn lookup(&self, column: ColumnId, epsilon: u8, digits: &[u8]) -> Option<HintId> {
        if digits.len() != column.letters().len() || digits.iter().any(|&d| d > 9) {
            return None;
        }
        let id = self.lookup[column.index() * 1000 + key(digits.iter().copied())];
        (id != NO_HINT && self.hints[id as usize].epsilon == epsilon).then_some(HintId(id))
    }

    /// Every catalog hint whose pairs agree with the assignment.
    ///
    /// Matching is on digit placement only; the carry the assignment would
    /// actually produce into the column is not consulted.
    #[inline]
    pub fn extract(&self, a: &Assignment) -> HintSet {
        let w = a.packed_digits();
        let keys = [
            column_key::<0>(w),
            column_key::<1>(w),
            column_key::<2>(w),
            column_key::<3>(w),
            column_key::<4>(w),
            column_key::<5>(w),
        ];
        let mut set = HintSet::default();
        for k in keys {
            let id = self.lookup[k];
            if id != NO_HINT {
                set.push(HintId(id));
            }
        }
        set
    }

    pub fn correct_ids(&self) -> impl Iterator<Item = HintId> + '_ {
        self.ids().filter(|&id| self.is_correct(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn cat() -> &'static HintCatalog {
        HintCatalog::shared()
    }

    fn worked_example() -> Assignment {
        "0294817635".parse().unwrap()
    }

    #[test]
    fn catalog_counts() {
        let c = cat();
        assert_eq!(c.len(), 351);
        assert_eq!(c.correct_ids().count(), 6);
        let mut per_column = [0usize; 6];
        let mut per_carry = [[0usize; 2]; 6];
        for (_, h) in c.iter() {
            per_column[h.column().index()] += 1;
            per_carry[h.column().index()][h.epsilon() as usize] += 1;
        }
        assert_eq!(per_column, [9, 18, 18, 144, 18, 144]);
        assert_eq!(per_carry[3], [72, 72]);
        assert_eq!(per_carry[5], [72, 72]);
        assert_eq!(per_carry[0], [9, 0]);
        let unique: std::collections::HashSet<_> = c.iter().map(|(_, h)| *h).collect();
        assert_eq!(unique.len(), 351);
    }

    #[test]
    fn rightmost_column_listing() {
        let c = cat();
        let col0: Vec<String> = c
            .iter()
            .filter(|(_, h)| h.column().index() == 0)
            .map(|(_, h)| h.to_string())
            .collect();
        assert_eq!(col0[0], "col=0 eps=0 D=1,T=2");
        assert_eq!(col0[1], "col=0 eps=0 D=2,T=4");
        assert_eq!(col0[2], "col=0 eps=0 D=3,T=6");
        assert!(col0.contains(&"col=0 eps=0 D=5,T=0".to_string()));
    }

    #[test]
    fn doubled_addend_column_by_brute_force() {
        // A + A + eps = E (mod 10), A != E
        let mut expected = 0;
        for eps in 0..2u8 {
            for a in 0..10u8 {
                let e = (2 * a + eps) % 10;
                if a != e {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 18);
        let got = cat()
            .iter()
            .filter(|(_, h)| h.column().index() == 2)
            .count();
        assert_eq!(got, expected);
    }

    #[test]
    fn correct_hints_one_per_column() {
        let c = cat();
        let correct: Vec<String> = c.correct_ids().map(|id| c.hint(id).to_string()).collect();
        assert_eq!(
            correct,
            vec![
                "col=0 eps=0 D=5,T=0",
                "col=1 eps=1 L=8,R=7",
                "col=2 eps=1 A=4,E=9",
                "col=3 eps=0 N=6,R=7,B=3",
                "col=4 eps=1 O=2,E=9",
                "col=5 eps=1 D=5,G=1,R=7",
            ]
        );
        let wrong = c.lookup(ColumnId(0), 0, &[1, 2]).unwrap();
        assert!(!c.is_correct(wrong));
    }

    #[test]
    fn extract_examples() {
        let c = cat();
        let got: Vec<String> = c
            .extract(&worked_example())
            .iter()
            .map(|id| c.hint(id).to_string())
            .collect();
        assert_eq!(got, vec!["col=1 eps=1 L=1,R=3"]);

        let sol = c.extract(&Assignment::solution());
        let mut ids: Vec<_> = sol.iter().collect();
        ids.sort();
        assert_eq!(ids, c.correct_ids().collect::<Vec<_>>());
    }

    #[test]
    fn extract_agrees_with_full_scan() {
        let c = cat();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(21);
        for _ in 0..20_000 {
            let a = Assignment::random(&mut rng);
            let fast = c.extract(&a);
            let slow: Vec<HintId> = c
                .iter()
                .filter(|(_, h)| h.is_exhibited_by(&a))
                .map(|(id, _)| id)
                .collect();
            assert_eq!(fast.as_slice(), slow.as_slice());
            let mut cols: Vec<_> = fast.iter().map(|id| c.hint(id).column()).collect();
            cols.dedup();
            assert_eq!(cols.len(), fast.len());
        }
    }

    #[test]
    fn assimilation_worked_example() {
        let c = cat();
        let id = c.lookup(ColumnId(3), 0, &[1, 4, 5]).unwrap();
        let h = c.hint(id);
        assert_eq!(h.to_string(), "col=3 eps=0 N=1,R=4,B=5");
        let out = h.assimilate(&worked_example());
        assert_eq!(
            format!("{out:?}"),
            "A=0,B=5,D=9,E=3,G=8,L=7,N=1,O=6,R=4,T=2"
        );
        assert!(c.extract(&out).contains(id));
    }

    #[test]
    fn assimilating_an_exhibited_hint_is_identity() {
        let c = cat();
        let a = worked_example();
        for id in c.extract(&a).iter() {
            assert_eq!(c.hint(id).assimilate(&a), a);
        }
    }

    #[test]
    fn hint_letter_outcome_is_order_independent() {
        let c = cat();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(8);
        let orders: [&[usize]; 6] = [
            &[0, 1, 2],
            &[0, 2, 1],
            &[1, 0, 2],
            &[1, 2, 0],
            &[2, 0, 1],
            &[2, 1, 0],
        ];
        for _ in 0..2_000 {
            let a = Assignment::random(&mut rng);
            for (_, h) in c.iter() {
                let pairs: Vec<_> = h.pairs().collect();
                let reference = h.assimilate(&a);
                for order in orders {
                    let mut b = a;
                    for &i in order.iter().filter(|&&i| i < pairs.len()) {
                        let (l, d) = pairs[i];
                        if b.digit(l) != d {
                            let holder = b.holder(d);
                            b.swap_in_place(l, holder);
                        }
                    }
                    for (l, _) in &pairs {
                        assert_eq!(b.digit(*l), reference.digit(*l));
                    }
                    assert!(b.agreement(&a) >= 10 - 2 * pairs.len());
                }
            }
        }
    }
}
