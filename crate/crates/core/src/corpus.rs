//! Seeded pseudorandom instances for round-trip verification.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::ComposeSpec;
use crate::linalg::Field;
use crate::sheaves::{P1Point, TorsionBlock, TorsionSheaf};
use crate::structure::Decomposition;

pub const WINDOW_TOP: i64 = 4;

/// Up to three torsion blocks of multiplicity at most three at the first six
/// enumerated points, and up to three distinct twists in `[-3, 1]` with
/// multiplicity at most two. The window is `[-(8 + depth), 4]` with
/// `depth = max(0, i_max + 2)`.
pub fn random_spec(rng: &mut ChaCha8Rng) -> ComposeSpec {
    let field = Field::Rational;
    let blocks = (0..rng.gen_range(0..=3))
        .map(|_| TorsionBlock {
            point: P1Point::enumerate(field, rng.gen_range(0..6)).expect("rationals are infinite"),
            mult: rng.gen_range(1..=3),
        })
        .collect();
    let count = rng.gen_range(0..=3);
    let twists = sample(rng, 5, count);
    let h1_mults: BTreeMap<i64, usize> = twists.iter().map(|k| (k as i64 - 3, rng.gen_range(1..=2))).collect();
    let depth = h1_mults.keys().next_back().map_or(0, |&i| (i + 2).max(0));
    ComposeSpec {
        field,
        lo: -(8 + depth),
        hi: WINDOW_TOP,
        decomposition: Decomposition {
            torsion: TorsionSheaf::new(blocks),
            h1_mults,
        },
        gauge_seed: Some(rng.gen()),
    }
}

/// `count` specs from one seed; the `k`-th spec does not depend on `count`.
pub fn corpus(seed: u64, count: usize) -> Vec<ComposeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_respect_bounds() {
        for spec in corpus(7, 100) {
            spec.check().unwrap();
            let d = &spec.decomposition;
            assert!(d.torsion.blocks().len() <= 3);
            assert!(d.torsion.blocks().iter().all(|b| (1..=3).contains(&b.mult)));
            assert!(d.h1_mults.len() <= 3);
            assert!(d.h1_mults.iter().all(|(i, l)| (-3..=1).contains(i) && (1..=2).contains(l)));
            assert_eq!(spec.hi, 4);
        }
        assert_eq!(corpus(7, 3), corpus(7, 10)[..3].to_vec());
    }
}
