use rand::Rng;

use crate::error::{Error, Result};
use crate::puzzle::{Assignment, Letter};

use crate::draw::pick;

/// Letters on which the two assignments differ, in canonical order.
pub fn disagreement(target: &Assignment, model: &Assignment) -> Vec<Letter> {
    Letter::ALL
        .iter()
        .copied()
        .filter(|&l| target.digit(l) != model.digit(l))
        .collect()
}

/// Copies one uniformly chosen letter-digit pair on which `target` differs
/// from `model`, making room with a single swap.
pub fn imitate<R: Rng + ?Sized>(
    target: &Assignment,
    model: &Assignment,
    rng: &mut R,
) -> Result<Assignment> {
    if target == model {
        return Err(Error::IdenticalAgents);
    }
    let mut out = *target;
    imitate_in_place(&mut out, model, rng);
    Ok(out)
}

#[inline]
pub(crate) fn imitate_in_place<R: Rng + ?Sized>(
    target: &mut Assignment,
    model: &Assignment,
    rng: &mut R,
) {
    // one flag bit per differing letter, at the bottom of its nibble
    let diff = target.packed_digits() ^ model.packed_digits();
    let mut flags = (diff | diff >> 1 | diff >> 2 | diff >> 3) & 0x11_1111_1111;
    let n = flags.count_ones() as usize;
    debug_assert!(n >= 2);
    for _ in 0..pick(rng, n) {
        flags &= flags - 1;
    }
    let letter = Letter::ALL[flags.trailing_zeros() as usize / 4];
    let holder = target.holder(model.digit(letter));
    target.swap_in_place(letter, holder);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;
    use Letter::*;

    #[test]
    fn worked_example() {
        let target: Assignment = "0294817635".parse().unwrap();
        let model: Assignment = "5394816270".parse().unwrap();
        assert_eq!(disagreement(&target, &model), vec![A, B, N, O, R, T]);

        // copying B=3 swaps B with R, the holder of 3
        let copied = target.apply_swap(B, target.holder(model.digit(B))).unwrap();
        assert_eq!(
            format!("{copied:?}"),
            "A=0,B=3,D=9,E=4,G=8,L=1,N=7,O=6,R=2,T=5"
        );
        assert_eq!(copied.cost(), 1545613);

        let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2_000 {
            seen.insert(imitate(&target, &model, &mut rng).unwrap());
        }
        assert!(seen.contains(&copied));
        assert!(seen.len() <= 6);
    }

    #[test]
    fn identical_agents_are_rejected() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
        let a = Assignment::solution();
        assert!(matches!(
            imitate(&a, &a, &mut rng),
            Err(Error::IdenticalAgents)
        ));
    }

    #[test]
    fn imitation_raises_agreement() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(17);
        for _ in 0..100_000 {
            let t = Assignment::random(&mut rng);
            let m = Assignment::random(&mut rng);
            if t == m {
                continue;
            }
            let before = t.agreement(&m);
            let after = imitate(&t, &m, &mut rng).unwrap().agreement(&m);
            assert!(after > before);
        }
    }
}
