//! State space of the DONALD + GERALD = ROBERT cryptarithm.
//!
//! An [`Assignment`] is a bijection between the ten letters of the puzzle and
//! the digits 0-9. The search dynamics move through this space of 10! states
//! with the elementary move: exchanging the digits of two distinct letters.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::draw::below;
use crate::error::{Error, Result};

/// Number of states, 10!.
pub const STATE_COUNT: u64 = 3_628_800;

/// Cost given to every assignment that puts a zero in front of a word.
pub const SENTINEL_COST: u32 = 100_000_000;

/// The ten puzzle letters in canonical (alphabetical) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    A,
    B,
    D,
    E,
    G,
    L,
    N,
    O,
    R,
    T,
}

impl Letter {
    pub const ALL: [Letter; 10] = [
        Letter::A,
        Letter::B,
        Letter::D,
        Letter::E,
        Letter::G,
        Letter::L,
        Letter::N,
        Letter::O,
        Letter::R,
        Letter::T,
    ];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Letter> {
        Letter::ALL.get(index).copied()
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Letter::ALL.iter().copied().find(|l| l.as_char() == c)
    }

    pub const fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::D => 'D',
            Letter::E => 'E',
            Letter::G => 'G',
            Letter::L => 'L',
            Letter::N => 'N',
            Letter::O => 'O',
            Letter::R => 'R',
            Letter::T => 'T',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

use Letter::*;

pub const DONALD: [Letter; 6] = [D, O, N, A, L, D];
pub const GERALD: [Letter; 6] = [G, E, R, A, L, D];
pub const ROBERT: [Letter; 6] = [R, O, B, E, R, T];

/// Letters that lead a word and therefore may not be zero.
pub const LEADING: [Letter; 3] = [D, G, R];

/// The 45 unordered letter pairs, lexicographic by canonical index.
pub const PAIRS: [(Letter, Letter); 45] = {
    let mut out = [(A, A); 45];
    let mut k = 0;
    let mut i = 0;
    while i < 10 {
        let mut j = i + 1;
        while j < 10 {
            out[k] = (Letter::ALL[i], Letter::ALL[j]);
            k += 1;
            j += 1;
        }
        i += 1;
    }
    out
};

/// Per-letter weight of `ROBERT - DONALD - GERALD` as a linear form in the digits.
pub(crate) const IMBALANCE_WEIGHTS: [i64; 10] = {
    let mut w = [0i64; 10];
    let mut place = 1i64;
    let mut pos = 6;
    while pos > 0 {
        pos -= 1;
        w[ROBERT[pos].index()] += place;
        w[DONALD[pos].index()] -= place;
        w[GERALD[pos].index()] -= place;
        place *= 10;
    }
    w
};

/// A bijective map from letters to digits.
///
/// Both directions are stored, packed four bits per entry: `digits` holds
/// the digit of letter `i` in nibble `i`, `holders` the letter of digit `d`
/// in nibble `d`. Every mutation updates the two words together.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    digits: u64,
    holders: u64,
}

#[inline]
const fn nibble(word: u64, i: usize) -> u8 {
    ((word >> (4 * i)) & 0xf) as u8
}

#[inline]
const fn pack(values: &[u8; 10]) -> u64 {
    let mut w = 0u64;
    let mut i = 0;
    while i < 10 {
        w |= (values[i] as u64) << (4 * i);
        i += 1;
    }
    w
}

impl Assignment {
    /// Builds an assignment from digits listed in canonical letter order.
    pub fn from_digits(digits: &[u8]) -> Result<Assignment> {
        if digits.len() != 10 {
            return Err(Error::InvalidAssignment(format!(
                "expected 10 digits, got {}",
                digits.len()
            )));
        }
        let mut letter_of = [u8::MAX; 10];
        for (letter, &d) in digits.iter().enumerate() {
            if d > 9 {
                return Err(Error::InvalidAssignment(format!("digit {d} out of range")));
            }
            if letter_of[d as usize] != u8::MAX {
                return Err(Error::InvalidAssignment(format!(
                    "digit {d} used more than once"
                )));
            }
            letter_of[d as usize] = letter as u8;
        }
        let mut digit_of = [0u8; 10];
        digit_of.copy_from_slice(digits);
        Ok(Assignment {
            digits: pack(&digit_of),
            holders: pack(&letter_of),
        })
    }

    /// Builds an assignment from `(letter, digit)` pairs covering all ten letters.
    pub fn from_pairs(pairs: &[(Letter, u8)]) -> Result<Assignment> {
        let mut digits = [u8::MAX; 10];
        for &(l, d) in pairs {
            if digits[l.index()] != u8::MAX {
                return Err(Error::InvalidAssignment(format!("letter {l} given twice")));
            }
            digits[l.index()] = d;
        }
        if let Some(missing) = Letter::ALL.iter().find(|l| digits[l.index()] == u8::MAX) {
            return Err(Error::InvalidAssignment(format!(
                "letter {missing} missing"
            )));
        }
        Assignment::from_digits(&digits)
    }

    /// A=0, B=1, ..., T=9.
    pub fn identity() -> Assignment {
        let id = pack(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        Assignment {
            digits: id,
            holders: id,
        }
    }

    /// The unique solution, 526485 + 197485 = 723970.
    pub fn solution() -> Assignment {
        Assignment::from_digits(&[4, 3, 5, 9, 1, 8, 6, 2, 7, 0]).expect("solution is a permutation")
    }

    /// Uniform draw from all 10! assignments.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Assignment {
        let mut digits = [0u8, 1, 2, 3, 4, 5, 6, 7, 8, 9];
        for i in (1..10).rev() {
            let j = rng.random_range(0..=i);
            digits.swap(i, j);
        }
        let mut letter_of = [0u8; 10];
        for (l, &d) in digits.iter().enumerate() {
            letter_of[d as usize] = l as u8;
        }
        Assignment {
            digits: pack(&digits),
            holders: pack(&letter_of),
        }
    }

    #[inline]
    pub fn digit(&self, letter: Letter) -> u8 {
        nibble(self.digits, letter.index())
    }

    /// The letter currently holding `digit`.
    #[inline]
    pub fn holder(&self, digit: u8) -> Letter {
        Letter::ALL[nibble(self.holders, digit as usize) as usize]
    }

    /// Digit of letter `i` in bits `4i..4i+4`.
    #[inline]
    pub(crate) fn packed_digits(&self) -> u64 {
        self.digits
    }

    /// Digits in canonical letter order.
    #[inline]
    pub fn digits(&self) -> [u8; 10] {
        std::array::from_fn(|i| nibble(self.digits, i))
    }

    pub fn word_value(&self, word: &[Letter]) -> u64 {
        word.iter()
            .fold(0u64, |acc, &l| acc * 10 + u64::from(self.digit(l)))
    }

    #[inline]
    pub fn has_leading_zero(&self) -> bool {
        // letter holding 0 is D, G or R
        matches!(nibble(self.holders, 0), 2 | 4 | 8)
    }

    /// `ROBERT - (DONALD + GERALD)` evaluated as a signed linear form.
    #[inline]
    pub fn imbalance(&self) -> i64 {
        let mut s = 0i64;
        for (i, w) in IMBALANCE_WEIGHTS.iter().enumerate() {
            s += w * i64::from(nibble(self.digits, i));
        }
        s
    }

    /// `|ROBERT - (DONALD + GERALD)|`, or [`SENTINEL_COST`] when D, G or R is zero.
    #[inline]
    pub fn cost(&self) -> u32 {
        if self.has_leading_zero() {
            SENTINEL_COST
        } else {
            self.imbalance().unsigned_abs() as u32
        }
    }

    #[inline]
    pub fn is_solution(&self) -> bool {
        // the units column alone forces T = 2D mod 10
        let (d, t) = (self.digit(D), self.digit(T));
        if (2 * d) % 10 != t {
            return false;
        }
        !self.has_leading_zero() && self.imbalance() == 0
    }

    /// Exchanges the digits of `x` and `y` in place. `x == y` is a no-op.
    #[inline]
    pub(crate) fn swap_in_place(&mut self, x: Letter, y: Letter) {
        let (xi, yi) = (x.index(), y.index());
        let (dx, dy) = (nibble(self.digits, xi), nibble(self.digits, yi));
        let dd = u64::from(dx ^ dy);
        self.digits ^= (dd << (4 * xi)) | (dd << (4 * yi));
        let dl = (xi ^ yi) as u64;
        self.holders ^= (dl << (4 * dx as usize)) | (dl << (4 * dy as usize));
        debug_assert!(self.is_consistent());
    }

    /// Returns a copy with the digits of `x` and `y` exchanged.
    pub fn apply_swap(&self, x: Letter, y: Letter) -> Result<Assignment> {
        if x == y {
            return Err(Error::InvalidSwap(x));
        }
        let mut out = *self;
        out.swap_in_place(x, y);
        Ok(out)
    }

    /// Swaps a uniformly chosen pair of distinct letters.
    #[inline]
    pub fn random_elementary_move<R: Rng + ?Sized>(&self, rng: &mut R) -> Assignment {
        let mut out = *self;
        out.elementary_move_in_place(rng);
        out
    }

    #[inline]
    pub(crate) fn elementary_move_in_place<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let (x, y) = PAIRS[below(rng, PAIRS.len())];
        self.swap_in_place(x, y);
    }

    /// All 45 neighbors in canonical pair order.
    pub fn neighbors(&self) -> Vec<Assignment> {
        PAIRS
            .iter()
            .map(|&(x, y)| {
                let mut n = *self;
                n.swap_in_place(x, y);
                n
            })
            .collect()
    }

    /// Number of letters on which the two assignments agree.
    pub fn agreement(&self, other: &Assignment) -> usize {
        (0..10)
            .filter(|&i| nibble(self.digits, i) == nibble(other.digits, i))
            .count()
    }

    /// Both direction tables describe the same bijection.
    pub fn is_consistent(&self) -> bool {
        if self.digits >> 40 != 0 || self.holders >> 40 != 0 {
            return false;
        }
        let mut seen = 0u16;
        for l in 0..10 {
            let d = nibble(self.digits, l);
            if d > 9 || nibble(self.holders, d as usize) as usize != l {
                return false;
            }
            seen |= 1 << d;
        }
        seen == 0x3ff
    }
}

impl fmt::Display for Assignment {
    /// Ten digits in canonical letter order, e.g. `4359186270`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in Letter::ALL.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}={}", self.digit(*l))?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Assignment> {
        let digits = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidAssignment(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Assignment::from_digits(&digits)
    }
}

impl serde::Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
