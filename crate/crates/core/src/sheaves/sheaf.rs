use std::fmt;

use super::point::P1Point;

/// `O_{p,m}`: the structure sheaf modulo the `m`-th power of the ideal of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionBlock {
    pub point: P1Point,
    pub mult: usize,
}

/// A finite direct sum of torsion blocks, kept sorted by point then multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TorsionSheaf {
    blocks: Vec<TorsionBlock>,
}

impl TorsionSheaf {
    /// Drops zero multiplicities and sorts.
    pub fn new(blocks: Vec<TorsionBlock>) -> TorsionSheaf {
        let mut blocks: Vec<TorsionBlock> = blocks.into_iter().filter(|b| b.mult > 0).collect();
        blocks.sort();
        TorsionSheaf { blocks }
    }

    pub fn zero() -> TorsionSheaf {
        TorsionSheaf::default()
    }

    pub fn block(point: P1Point, mult: usize) -> TorsionSheaf {
        TorsionSheaf::new(vec![TorsionBlock { point, mult }])
    }

    pub fn blocks(&self) -> &[TorsionBlock] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn length(&self) -> usize {
        self.blocks.iter().map(|b| b.mult).sum()
    }

    /// Distinct points of the support, in canonical order.
    pub fn support(&self) -> Vec<P1Point> {
        let mut pts: Vec<P1Point> = self.blocks.iter().map(|b| b.point.clone()).collect();
        pts.dedup();
        pts
    }

    pub fn direct_sum(&self, other: &TorsionSheaf) -> TorsionSheaf {
        TorsionSheaf::new(self.blocks.iter().chain(&other.blocks).cloned().collect())
    }
}

impl fmt::Display for TorsionSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("({}, {})", b.point, b.mult))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `O(a_1) + ... + O(a_r) + T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoherentSheaf {
    bundle: Vec<i64>,
    torsion: TorsionSheaf,
}

impl CoherentSheaf {
    pub fn new(mut bundle: Vec<i64>, torsion: TorsionSheaf) -> CoherentSheaf {
        bundle.sort_unstable();
        CoherentSheaf { bundle, torsion }
    }

    pub fn zero() -> CoherentSheaf {
        CoherentSheaf::default()
    }

    pub fn line_bundle(a: i64) -> CoherentSheaf {
        CoherentSheaf::new(vec![a], TorsionSheaf::zero())
    }

    pub fn torsion_only(t: TorsionSheaf) -> CoherentSheaf {
        CoherentSheaf::new(Vec::new(), t)
    }

    pub fn bundle(&self) -> &[i64] {
        &self.bundle
    }

    pub fn torsion(&self) -> &TorsionSheaf {
        &self.torsion
    }

    /// Tensor with `O(i)`; torsion is unchanged up to isomorphism.
    pub fn twist(&self, i: i64) -> CoherentSheaf {
        CoherentSheaf::new(self.bundle.iter().map(|a| a + i).collect(), self.torsion.clone())
    }

    pub fn direct_sum(&self, other: &CoherentSheaf) -> CoherentSheaf {
        CoherentSheaf::new(
            self.bundle.iter().chain(&other.bundle).copied().collect(),
            self.torsion.direct_sum(&other.torsion),
        )
    }
}

pub fn h0_dim(s: &CoherentSheaf) -> usize {
    let bundle: i64 = s.bundle.iter().map(|a| (a + 1).max(0)).sum();
    bundle as usize + s.torsion.length()
}

pub fn h1_dim(s: &CoherentSheaf) -> usize {
    s.bundle.iter().map(|a| (-a - 1).max(0)).sum::<i64>() as usize
}

/// `s (x) t` for a torsion sheaf `t`: every line bundle summand contributes a
/// copy of `t`, and blocks at a common point meet in the smaller multiplicity.
pub fn tensor_torsion(s: &CoherentSheaf, t: &TorsionSheaf) -> TorsionSheaf {
    let mut blocks = Vec::new();
    for _ in &s.bundle {
        blocks.extend(t.blocks.iter().cloned());
    }
    for a in &s.torsion.blocks {
        for b in &t.blocks {
            if a.point == b.point {
                blocks.push(TorsionBlock {
                    point: a.point.clone(),
                    mult: a.mult.min(b.mult),
                });
            }
        }
    }
    TorsionSheaf::new(blocks)
}

/// `Ext^1(O_{p,n}, O)`, again a block of length `n` at `p`.
pub fn ext1_skyscraper(n: usize, p: &P1Point) -> TorsionSheaf {
    assert!(n >= 1, "multiplicity must be positive");
    TorsionSheaf::block(p.clone(), n)
}
