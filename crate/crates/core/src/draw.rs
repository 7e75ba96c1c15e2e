//! Bounded uniform integers for the simulation hot loops.

use rand::Rng;

/// Uniform index in `0..n` by Lemire's multiply-and-reject method on a
/// 32-bit draw. Exact for every `n` in `1..=u32::MAX`.
#[inline]
pub(crate) fn below<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n >= 1 && n <= u32::MAX as usize);
    let n = n as u64;
    let mut m = u64::from(rng.next_u32()) * n;
    if (m as u32 as u64) < n {
        let threshold = (n as u32).wrapping_neg() as u64 % n;
        while (m as u32 as u64) < threshold {
            m = u64::from(rng.next_u32()) * n;
        }
    }
    (m >> 32) as usize
}

/// Like [`below`], but draws nothing when there is a single choice.
#[inline]
pub(crate) fn pick<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    if n == 1 {
        0
    } else {
        below(rng, n)
    }
}
