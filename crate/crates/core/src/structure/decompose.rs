use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::functor::{generator_h0_torsion, generator_h1, h1_dim_at, FunctorData};
use crate::linalg::{Field, Matrix, Subspace};
use crate::sheaves::{vanishing_form, TorsionSheaf};
use crate::watts::{avoiding_points, gamma_window, kernel_of_gamma, GammaData, KernelData, NatTransWindow};

/// `F = (+)_i H^1(-(i))^{l_i} (+) H^0(- (x) T)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub torsion: TorsionSheaf,
    pub h1_mults: BTreeMap<i64, usize>,
}

impl Decomposition {
    /// The `H^1` part alone, summands ordered by `i` then copy.
    pub fn h1_model(&self, field: Field, lo: i64, hi: i64) -> FunctorData {
        let mut out = FunctorData::zero(field, lo, hi);
        for (&i, &l) in &self.h1_mults {
            for _ in 0..l {
                out = out.direct_sum(&generator_h1(field, i, lo, hi)).expect("same window");
            }
        }
        out
    }

    /// The `H^1` part followed by the torsion part.
    pub fn compose(&self, field: Field, lo: i64, hi: i64) -> FunctorData {
        self.h1_model(field, lo, hi)
            .direct_sum(&generator_h0_torsion(field, &self.torsion, lo, hi))
            .expect("same window")
    }

    /// `dim F(O(n))` predicted by the decomposition.
    pub fn dim_at(&self, n: i64) -> usize {
        self.torsion.length() + self.h1_mults.iter().map(|(&i, &l)| l * h1_dim_at(i, n)).sum::<usize>()
    }
}

/// `l_i = e(-i-1) - e(-i)` with `e(n) = d(n-1) - d(n)`, where `kdims[k]` is
/// the dimension in degree `lo + k`.
pub fn h1_multiplicities_from_dims(lo: i64, kdims: &[usize]) -> Result<BTreeMap<i64, usize>> {
    if kdims.len() < 3 {
        return Err(Error::WindowTooSmall("need at least three degrees".into()));
    }
    let hi = lo + kdims.len() as i64 - 1;
    let d = |n: i64| kdims[(n - lo) as usize] as i64;
    if d(hi) != 0 {
        return Err(Error::WindowTooSmall(format!("dimension {} at the top degree", d(hi))));
    }
    let e = |n: i64| if n > hi { 0 } else { d(n - 1) - d(n) };
    if e(lo + 1) != e(lo + 2) {
        return Err(Error::WindowTooSmall("slope at the bottom of the window has not settled".into()));
    }
    let mut mults = BTreeMap::new();
    for i in -hi - 1..=-lo - 2 {
        let l = e(-i - 1) - e(-i);
        if l < 0 {
            return Err(Error::NotAdmissible(format!("negative multiplicity {l} for twist {i}")));
        }
        if l > 0 {
            mults.insert(i, l as usize);
        }
    }
    for n in lo..=hi {
        let rebuilt: usize = mults.iter().map(|(&i, &l)| l * h1_dim_at(i, n)).sum();
        if rebuilt as i64 != d(n) {
            return Err(Error::NotAdmissible(format!("multiplicities do not reproduce degree {n}")));
        }
    }
    Ok(mults)
}

/// Retraction `Lambda : F -> Ker` with `Lambda o Theta = id`, built downward
/// from the degree where the kernel vanishes. The complement `B_{n-1}` is the
/// image of a section `sigma_{n-1}` of `Gamma` that lies in the common preimage
/// of `B_n` under the two forms; it is `sigma0 + Theta X` for any right inverse
/// `sigma0`, and the condition on `X` is a linear system over the kernel functor.
pub fn build_splitting(f: &FunctorData, kd: &KernelData, g: &GammaData) -> Result<NatTransWindow> {
    let ker = &kd.kernel;
    let (lo, hi) = (f.lo(), f.hi());
    let field = f.field();
    if ker.dim(hi) != 0 {
        return Err(Error::WindowTooSmall("kernel does not vanish at the top degree".into()));
    }
    let mut n0 = hi;
    while n0 > lo && ker.dim(n0 - 1) == 0 {
        n0 -= 1;
    }
    let alpha = vanishing_form(&g.point);
    let beta = match g.torsion.support().first() {
        Some(q) => vanishing_form(q),
        None => vanishing_form(&avoiding_points(field, &g.torsion, 2)?[1]),
    };
    let mut comps: Vec<Matrix> = (n0..=hi).rev().map(|n| Matrix::zeros(field, 0, f.dim(n))).collect();
    let mut sigma = g
        .gamma
        .component(n0)
        .inverse()
        .ok_or_else(|| Error::NotAdmissible(format!("gamma is not invertible in degree {n0}")))?;
    for n in (lo + 1..=n0).rev() {
        let lam = comps.last().unwrap();
        let theta = kd.theta.component(n - 1);
        let sigma0 = right_inverse(g.gamma.component(n - 1))
            .ok_or_else(|| Error::NotAdmissible(format!("gamma is not surjective in degree {}", n - 1)))?;
        let mut lhs = Matrix::zeros(field, 0, ker.dim(n - 1));
        let mut rhs = Matrix::zeros(field, 0, sigma0.cols());
        for form in [&alpha, &beta] {
            let e = sigma
                .mul(&g.model.act_linear(form, n)?)
                .sub(&f.act_linear(form, n)?.mul(&sigma0));
            lhs = lhs.vstack(&ker.act_linear(form, n)?);
            rhs = rhs.vstack(&lam.mul(&e));
        }
        let x = lhs
            .solve_any(&rhs)
            .ok_or_else(|| Error::NotAdmissible(format!("no natural complement in degree {}", n - 1)))?;
        sigma = sigma0.add(&theta.mul(&x));
        let inv = theta
            .hstack(&sigma)
            .inverse()
            .ok_or_else(|| Error::NotAdmissible(format!("complement does not exhaust degree {}", n - 1)))?;
        comps.push(inv.row_range(0, theta.cols()));
    }
    comps.reverse();
    Ok(NatTransWindow { lo, hi, components: comps })
}

/// `S` with `g S = id`, supported on the pivot columns of `g`.
fn right_inverse(g: &Matrix) -> Option<Matrix> {
    let (_, pivots) = g.rref();
    if pivots.len() < g.rows() {
        return None;
    }
    let inv = g.select_cols(&pivots).inverse()?;
    let mut s = Matrix::zeros(g.field(), g.cols(), g.rows());
    for (k, &c) in pivots.iter().enumerate() {
        for j in 0..g.rows() {
            s.set(c, j, inv.get(k, j).clone());
        }
    }
    Some(s)
}

/// Natural isomorphisms between the kernel functor and its `H^1` model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Isomorphism {
    pub to_model: NatTransWindow,
    pub from_model: NatTransWindow,
}

/// Each summand `H^1(-(i))` is pinned by a coordinate functional on the
/// kernel's socle in degree `-i-2`; the coordinate `x0^-a x1^-b` in degree
/// `n` is that functional after `x0^(a-1) x1^(b-1)`.
pub fn build_h1_isomorphism(ker: &FunctorData, mults: &BTreeMap<i64, usize>) -> Result<H1Isomorphism> {
    let (lo, hi) = (ker.lo(), ker.hi());
    let field = ker.field();
    let width = (hi - lo + 1) as usize;
    let mut per_degree: Vec<Vec<Matrix>> = vec![Vec::new(); width];
    for (&i, &l) in mults {
        let d = -i - 2;
        if d < lo || d >= hi {
            return Err(Error::WindowTooSmall(format!("socle degree {d} of twist {i} is not interior")));
        }
        let socle = Subspace::kernel_of(&ker.a(d + 1).vstack(ker.b(d + 1)));
        if socle.dim() != l {
            return Err(Error::NotAdmissible(format!(
                "socle in degree {d} has dimension {}, expected {l}",
                socle.dim()
            )));
        }
        for &pivot in socle.pivot_rows() {
            let mut rows = Matrix::zeros(field, 1, ker.dim(d));
            rows.set(0, pivot, field.one());
            let mut n = d;
            per_degree[(d - lo) as usize].push(rows.clone());
            while n > lo {
                let last = rows.row_range(rows.rows() - 1, rows.rows());
                rows = rows.mul(ker.a(n)).vstack(&last.mul(ker.b(n)));
                n -= 1;
                per_degree[(n - lo) as usize].push(rows.clone());
            }
            for m in d + 1..=hi {
                per_degree[(m - lo) as usize].push(Matrix::zeros(field, 0, ker.dim(m)));
            }
        }
    }
    let mut to_model = Vec::new();
    let mut from_model = Vec::new();
    for (k, blocks) in per_degree.into_iter().enumerate() {
        let n = lo + k as i64;
        let psi = blocks
            .iter()
            .fold(Matrix::zeros(field, 0, ker.dim(n)), |acc, b| acc.vstack(b));
        let inv = psi
            .inverse()
            .ok_or_else(|| Error::NotAdmissible(format!("kernel is not isomorphic to its model in degree {n}")))?;
        to_model.push(psi);
        from_model.push(inv);
    }
    Ok(H1Isomorphism {
        to_model: NatTransWindow { lo, hi, components: to_model },
        from_model: NatTransWindow { lo, hi, components: from_model },
    })
}

/// Explicit maps realizing `0 -> Ker -> F -> H^0(- (x) W) -> 0` and its
/// splitting, together with the identification of `Ker` with its model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub kernel: FunctorData,
    pub torsion_model: FunctorData,
    pub h1_model: FunctorData,
    pub theta: NatTransWindow,
    pub gamma: NatTransWindow,
    pub lambda: NatTransWindow,
    /// `[Lambda; Gamma] : F -> Ker (+) H^0(- (x) W)`.
    pub iso: NatTransWindow,
    pub h1_iso: H1Isomorphism,
    /// `[Psi Lambda; Gamma] : F -> compose(decomposition)`.
    pub model_iso: NatTransWindow,
}

impl SplittingCertificate {
    /// Every failed check, as text. Empty means certified.
    pub fn verify(&self, f: &FunctorData) -> Vec<String> {
        let mut out = Vec::new();
        let (lo, hi) = (f.lo(), f.hi());
        for n in lo..=hi {
            let lt = self.lambda.component(n).mul(self.theta.component(n));
            if !lt.is_identity() {
                out.push(format!("lambda after theta is not the identity in degree {n}"));
            }
            if !self.gamma.component(n).mul(self.theta.component(n)).is_zero() {
                out.push(format!("gamma does not kill the kernel in degree {n}"));
            }
            for (name, t) in [("iso", &self.iso), ("model iso", &self.model_iso)] {
                if !t.component(n).is_invertible() {
                    out.push(format!("{name} is not invertible in degree {n}"));
                }
            }
        }
        let split = self.kernel.direct_sum(&self.torsion_model).expect("same window");
        let model = self.h1_model.direct_sum(&self.torsion_model).expect("same window");
        let checks: [(&str, &NatTransWindow, &FunctorData, &FunctorData); 7] = [
            ("theta", &self.theta, &self.kernel, f),
            ("lambda", &self.lambda, f, &self.kernel),
            ("gamma", &self.gamma, f, &self.torsion_model),
            ("iso", &self.iso, f, &split),
            ("h1 iso", &self.h1_iso.to_model, &self.kernel, &self.h1_model),
            ("h1 iso inverse", &self.h1_iso.from_model, &self.h1_model, &self.kernel),
            ("model iso", &self.model_iso, f, &model),
        ];
        for (name, t, s, tgt) in checks {
            let bad = t.naturality_failures(s, tgt);
            if !bad.is_empty() {
                out.push(format!("{name} is not natural in degrees {bad:?}"));
            }
        }
        out
    }
}

/// Structure theorem data for `F`, with its certificate checked.
pub fn decompose(f: &FunctorData) -> Result<(Decomposition, SplittingCertificate)> {
    f.ensure_valid()?;
    let g = gamma_window(f)?;
    let kd = kernel_of_gamma(f, &g)?;
    let mults = h1_multiplicities_from_dims(f.lo(), kd.kernel.dims())?;
    let lambda = build_splitting(f, &kd, &g)?;
    let h1_iso = build_h1_isomorphism(&kd.kernel, &mults)?;
    let decomposition = Decomposition {
        torsion: g.torsion.clone(),
        h1_mults: mults,
    };
    let h1_model = decomposition.h1_model(f.field(), f.lo(), f.hi());
    let stack = |top: &NatTransWindow| NatTransWindow {
        lo: f.lo(),
        hi: f.hi(),
        components: top
            .components
            .iter()
            .zip(&g.gamma.components)
            .map(|(a, b)| a.vstack(b))
            .collect(),
    };
    let iso = stack(&lambda);
    let model_iso = stack(&h1_iso.to_model.compose(&lambda));
    let cert = SplittingCertificate {
        kernel: kd.kernel,
        torsion_model: g.model,
        h1_model,
        theta: kd.theta,
        gamma: g.gamma,
        lambda,
        iso,
        h1_iso,
        model_iso,
    };
    let failures = cert.verify(f);
    if !failures.is_empty() {
        return Err(Error::NotAdmissible(failures.join("; ")));
    }
    Ok((decomposition, cert))
}
