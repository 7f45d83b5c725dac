//! The torsion sheaf attached to a window functor, the comparison map to its
//! global sections, and the kernel of that map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functor::{generator_h0_torsion, FunctorData};
use crate::linalg::pencil::{invertible_combination, pencil_det_form};
use crate::linalg::{pencil_weierstrass, Field, Matrix, Subspace};
use crate::sheaves::{vanishing_form, LinearForm, P1Point, TorsionBlock, TorsionSheaf};

/// Degreewise maps `components[n - lo]` between two functors on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransWindow {
    pub lo: i64,
    pub hi: i64,
    pub components: Vec<Matrix>,
}

impl NatTransWindow {
    pub fn component(&self, n: i64) -> &Matrix {
        &self.components[(n - self.lo) as usize]
    }

    /// Degrees `n` in `(lo, hi]` where `target.x(n) * c(n-1) != c(n) * source.x(n)`
    /// for `x = x0` or `x1`, or where a component has the wrong shape.
    pub fn naturality_failures(&self, source: &FunctorData, target: &FunctorData) -> Vec<i64> {
        let mut bad = Vec::new();
        for n in self.lo..=self.hi {
            if self.component(n).shape() != (target.dim(n), source.dim(n)) {
                bad.push(n);
            }
        }
        if !bad.is_empty() {
            return bad;
        }
        for n in self.lo + 1..=self.hi {
            let (c, c_prev) = (self.component(n), self.component(n - 1));
            let a_ok = target.a(n).mul(c_prev) == c.mul(source.a(n));
            let b_ok = target.b(n).mul(c_prev) == c.mul(source.b(n));
            if !(a_ok && b_ok) {
                bad.push(n);
            }
        }
        bad
    }

    pub fn is_natural(&self, source: &FunctorData, target: &FunctorData) -> bool {
        self.naturality_failures(source, target).is_empty()
    }

    /// `self o first`.
    pub fn compose(&self, first: &NatTransWindow) -> NatTransWindow {
        NatTransWindow {
            lo: self.lo,
            hi: self.hi,
            components: self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizationInfo {
    pub n_stab: i64,
    pub top_dim: usize,
}

fn pencil_is_regular(a: &Matrix, b: &Matrix) -> bool {
    if !a.is_square() {
        return false;
    }
    match invertible_combination(a, b) {
        Ok(_) => true,
        Err(Error::FieldExhausted) => true,
        Err(_) => !pencil_det_form(a, b).iter().all(|c| c.is_zero()),
    }
}

/// The least `n` from which dims are constant up to `hi` and every pencil
/// above it is regular. At least two confirming steps are required.
pub fn stabilized_top(f: &FunctorData) -> Result<StabilizationInfo> {
    f.ensure_valid()?;
    let top_dim = f.dim(f.hi());
    let mut n = f.hi();
    while n > f.lo() && f.dim(n - 1) == top_dim && pencil_is_regular(f.a(n), f.b(n)) {
        n -= 1;
    }
    if f.hi() - n < 2 {
        return Err(Error::WindowTooSmall(format!(
            "dimensions settle only at degree {n}, window top is {}",
            f.hi()
        )));
    }
    Ok(StabilizationInfo { n_stab: n, top_dim })
}

/// Torsion sheaf read from the Weierstrass form of the pencil into degree `n`.
pub fn compute_w_at(f: &FunctorData, n: i64) -> Result<TorsionSheaf> {
    if n <= f.lo() || n > f.hi() {
        return Err(Error::WindowTooSmall(format!("no pencil into degree {n}")));
    }
    let (a, b) = (f.a(n), f.b(n));
    if !a.is_square() {
        return Err(Error::NotAdmissible(format!("pencil into degree {n} is not square")));
    }
    let dec = pencil_weierstrass(a, b)?;
    let mut blocks = Vec::new();
    for blk in dec.blocks {
        let point = P1Point::new(&blk.point.0, &blk.point.1)?;
        for m in blk.sizes {
            blocks.push(TorsionBlock {
                point: point.clone(),
                mult: m,
            });
        }
    }
    Ok(TorsionSheaf::new(blocks))
}

pub fn compute_w(f: &FunctorData) -> Result<TorsionSheaf> {
    stabilized_top(f)?;
    compute_w_at(f, f.hi())
}

/// The first `count` points of the enumeration `[0:1], [1:0], [1:1], [1:2], ...`
/// outside the support of `t`.
pub fn avoiding_points(field: Field, t: &TorsionSheaf, count: usize) -> Result<Vec<P1Point>> {
    let support = t.support();
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < count {
        let p = P1Point::enumerate(field, k).ok_or(Error::FieldExhausted)?;
        if !support.contains(&p) {
            out.push(p);
        }
        k += 1;
    }
    Ok(out)
}

pub fn choose_avoiding_point(field: Field, t: &TorsionSheaf) -> Result<P1Point> {
    Ok(avoiding_points(field, t, 1)?.remove(0))
}

/// Vectors of `F(O(n))` killed by some power of `l_p`, read off at the top of
/// the window and confirmed one step below.
pub fn eventual_kernel(f: &FunctorData, n: i64, p: &P1Point) -> Result<Subspace> {
    let info = stabilized_top(f)?;
    f.check_span(n, n)?;
    let l = vanishing_form(p);
    if !f.act_linear(&l, f.hi())?.is_invertible() {
        return Err(Error::NotAdmissible(format!("{p} lies in the support")));
    }
    let k = Subspace::kernel_of(&composite_to(f, &l, n, f.hi())?);
    if n < info.n_stab {
        let below = Subspace::kernel_of(&composite_to(f, &l, n, f.hi() - 1)?);
        if below != k {
            return Err(Error::WindowTooSmall(format!("kernel at degree {n} not confirmed")));
        }
    }
    Ok(k)
}

/// `F(l^(top-n)) : F(O(n)) -> F(O(top))`, multiplied from the top so the
/// intermediate products keep the small top dimension.
fn composite_to(f: &FunctorData, l: &LinearForm, n: i64, top: i64) -> Result<Matrix> {
    let mut m = Matrix::identity(f.field(), f.dim(top));
    for j in (n + 1..=top).rev() {
        m = m.mul(&f.act_linear(l, j)?);
    }
    Ok(m)
}

/// The comparison map with the torsion sheaf's sections, with the data used to
/// build it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaData {
    pub torsion: TorsionSheaf,
    pub point: P1Point,
    pub model: FunctorData,
    pub gamma: NatTransWindow,
}

/// `(P, Q)` invertible with `P A = A_T Q`, `P B = B_T Q`.
fn pencil_equivalence(a: &Matrix, b: &Matrix, at: &Matrix, bt: &Matrix) -> Result<(Matrix, Matrix)> {
    let field = a.field();
    let n = a.rows();
    if n == 0 {
        return Ok((Matrix::zeros(field, 0, 0), Matrix::zeros(field, 0, 0)));
    }
    let (c0, c1) = invertible_combination(a, b)?;
    let (d0, d1) = if c0.is_zero() {
        (field.one(), field.zero())
    } else {
        (field.zero(), field.one())
    };
    let c = a.combine(&c0, b, &c1);
    let ct = at.combine(&c0, bt, &c1);
    let c_inv = c.inverse().expect("probed invertible");
    let ct_inv = ct
        .inverse()
        .ok_or_else(|| Error::NotAdmissible("pencil and its model have different eigenpoints".into()))?;
    let x = a.combine(&d0, b, &d1).mul(&c_inv);
    let xt = at.combine(&d0, bt, &d1).mul(&ct_inv);
    // P x = xt P, unknowns P[r][s] at index r*n + s
    let mut sys = Matrix::zeros(field, n * n, n * n);
    for r in 0..n {
        for s in 0..n {
            let row = r * n + s;
            for k in 0..n {
                let v = x.get(k, s);
                if !v.is_zero() {
                    let cur = sys.get(row, r * n + k) + v;
                    sys.set(row, r * n + k, cur);
                }
                let w = xt.get(r, k);
                if !w.is_zero() {
                    let cur = sys.get(row, k * n + s) - w;
                    sys.set(row, k * n + s, cur);
                }
            }
        }
    }
    let sols = Subspace::kernel_of(&sys);
    let basis = sols.basis();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..64 {
        let coeffs: Vec<_> = (0..basis.cols())
            .map(|j| {
                if attempt == 0 {
                    field.from_i64(j as i64 + 1)
                } else {
                    field.from_i64(rng.gen_range(-9..=9))
                }
            })
            .collect();
        let v = basis.mul(&Matrix::column(field, coeffs));
        let p = Matrix::from_vec(field, n, n, v.col(0));
        if p.is_invertible() {
            let q = ct_inv.mul(&p).mul(&c);
            return Ok((p, q));
        }
    }
    Err(Error::NotAdmissible("no invertible pencil equivalence found".into()))
}

/// `Gamma_n = T(l_p)^-(hi-n) P F(l_p^(hi-n))`, with `P` identifying the top
/// pencil with the torsion model and `p` the first point off the support.
pub fn gamma_window(f: &FunctorData) -> Result<GammaData> {
    let torsion = compute_w(f)?;
    let field = f.field();
    let point = choose_avoiding_point(field, &torsion)?;
    let model = generator_h0_torsion(field, &torsion, f.lo(), f.hi());
    let hi = f.hi();
    let (at, bt) = (model.a(hi), model.b(hi));
    let (p_top, _) = pencil_equivalence(f.a(hi), f.b(hi), at, bt)?;
    let l = vanishing_form(&point);
    let t_inv = at
        .combine(&l.c0, bt, &l.c1)
        .inverse()
        .expect("avoiding point acts invertibly on the model");
    let mut comps = vec![p_top];
    for n in (f.lo() + 1..=hi).rev() {
        let next = t_inv.mul(comps.last().unwrap()).mul(&f.act_linear(&l, n)?);
        comps.push(next);
    }
    comps.reverse();
    Ok(GammaData {
        torsion,
        point,
        model,
        gamma: NatTransWindow {
            lo: f.lo(),
            hi,
            components: comps,
        },
    })
}

pub fn cok_vanishes(f: &FunctorData) -> Result<bool> {
    let g = gamma_window(f)?;
    Ok(g.gamma.components.iter().all(|c| c.rank() == c.rows()))
}

/// The kernel functor of `Gamma` and its inclusion `theta` into `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub kernel: FunctorData,
    pub theta: NatTransWindow,
}

/// Degreewise kernels of `Gamma` with the induced actions. Fails unless every
/// kernel has the dimension forced by surjectivity.
pub fn kernel_of_gamma(f: &FunctorData, g: &GammaData) -> Result<KernelData> {
    let length = g.torsion.length();
    let mut spaces = Vec::new();
    for n in f.lo()..=f.hi() {
        let k = Subspace::kernel_of(g.gamma.component(n));
        if k.dim() + length != f.dim(n) {
            return Err(Error::NotAdmissible(format!(
                "comparison map at degree {n} has kernel of dimension {}, expected {}",
                k.dim(),
                f.dim(n) as i64 - length as i64
            )));
        }
        spaces.push(k);
    }
    let mut x0 = Vec::new();
    let mut x1 = Vec::new();
    for n in f.lo() + 1..=f.hi() {
        let (k, k_prev) = (&spaces[(n - f.lo()) as usize], &spaces[(n - f.lo() - 1) as usize]);
        x0.push(f.a(n).mul(k_prev.basis()).select_rows(k.pivot_rows()));
        x1.push(f.b(n).mul(k_prev.basis()).select_rows(k.pivot_rows()));
    }
    let dims = spaces.iter().map(Subspace::dim).collect();
    let kernel = FunctorData::new(f.field(), f.lo(), f.hi(), dims, x0, x1)?;
    let theta = NatTransWindow {
        lo: f.lo(),
        hi: f.hi(),
        components: spaces.iter().map(|s| s.basis().clone()).collect(),
    };
    Ok(KernelData { kernel, theta })
}

pub fn kernel_functor(f: &FunctorData) -> Result<FunctorData> {
    let g = gamma_window(f)?;
    Ok(kernel_of_gamma(f, &g)?.kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{gauge_scramble, gauge_scramble_with_witness, generator_h1, generator_rq};

    const Q: Field = Field::Rational;

    fn pt(a: i64, b: i64) -> P1Point {
        P1Point::from_ints(Q, a, b).unwrap()
    }

    fn torsion(blocks: &[((i64, i64), usize)]) -> TorsionSheaf {
        TorsionSheaf::new(
            blocks
                .iter()
                .map(|&((a, b), m)| TorsionBlock { point: pt(a, b), mult: m })
                .collect(),
        )
    }

    #[test]
    fn stabilization_examples() {
        let t = generator_h0_torsion(Q, &torsion(&[((1, 1), 2)]), -4, 4);
        assert_eq!(stabilized_top(&t).unwrap(), StabilizationInfo { n_stab: -4, top_dim: 2 });
        let mixed = generator_h1(Q, 0, -5, 3)
            .direct_sum(&generator_h0_torsion(Q, &torsion(&[((0, 1), 1)]), -5, 3))
            .unwrap();
        assert_eq!(stabilized_top(&mixed).unwrap(), StabilizationInfo { n_stab: -1, top_dim: 1 });
        let z = FunctorData::zero(Q, -3, 3);
        assert_eq!(stabilized_top(&z).unwrap().top_dim, 0);
        assert!(matches!(stabilized_top(&generator_h1(Q, -3, -5, 1)), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn w_recovers_gauged_torsion() {
        let t = torsion(&[((2, 1), 1), ((0, 1), 2)]);
        let f = gauge_scramble(&generator_h0_torsion(Q, &t, -3, 3), 4);
        assert_eq!(compute_w(&f).unwrap(), t);
        assert_eq!(compute_w_at(&f, 2).unwrap(), t);
        assert!(compute_w(&generator_h1(Q, 0, -5, 3)).unwrap().is_zero());
        let q = pt(1, 2);
        let rq = generator_rq(&q, &pt(0, 1), -3, 3).unwrap();
        assert_eq!(compute_w(&rq).unwrap(), TorsionSheaf::block(q, 1));
    }

    #[test]
    fn avoiding_points_enumerate() {
        assert_eq!(choose_avoiding_point(Q, &TorsionSheaf::zero()).unwrap(), pt(0, 1));
        assert_eq!(choose_avoiding_point(Q, &torsion(&[((0, 1), 1)])).unwrap(), P1Point::infinity(Q));
        let t = TorsionSheaf::new(vec![
            TorsionBlock { point: pt(0, 1), mult: 1 },
            TorsionBlock { point: P1Point::infinity(Q), mult: 2 },
        ]);
        assert_eq!(choose_avoiding_point(Q, &t).unwrap(), pt(1, 1));
        let f2 = Field::Prime(2);
        let all = TorsionSheaf::new(
            (0..3)
                .map(|k| TorsionBlock { point: P1Point::enumerate(f2, k).unwrap(), mult: 1 })
                .collect(),
        );
        assert_eq!(choose_avoiding_point(f2, &all), Err(Error::FieldExhausted));
    }

    #[test]
    fn eventual_kernel_examples() {
        let tf = generator_h0_torsion(Q, &torsion(&[((1, 1), 1)]), -3, 3);
        assert_eq!(eventual_kernel(&tf, 0, &pt(0, 1)).unwrap().dim(), 0);
        let h = generator_h1(Q, 0, -3, 3);
        assert_eq!(eventual_kernel(&h, -3, &pt(0, 1)).unwrap(), Subspace::full(Q, 2));
        let sum = h.direct_sum(&tf).unwrap();
        let (g, u) = gauge_scramble_with_witness(&sum, 11);
        let k = eventual_kernel(&g, -3, &pt(0, 1)).unwrap();
        let oracle = Subspace::span(&u[0].col_range(0, 2));
        assert_eq!(k, oracle);
    }

    #[test]
    fn gamma_on_generators() {
        let t = torsion(&[((1, 1), 2), ((0, 1), 1)]);
        let tf = generator_h0_torsion(Q, &t, -3, 3);
        let g = gamma_window(&tf).unwrap();
        assert!(g.gamma.components.iter().all(Matrix::is_invertible));
        assert!(g.gamma.is_natural(&tf, &g.model));
        let h = generator_h1(Q, 0, -4, 3);
        let gh = gamma_window(&h).unwrap();
        assert!(gh.gamma.components.iter().all(|c| c.rows() == 0));
        assert!(cok_vanishes(&FunctorData::zero(Q, -2, 2)).unwrap());
    }

    #[test]
    fn kernel_of_mixed_gauged_instance() {
        let f = generator_h1(Q, 0, -5, 3)
            .direct_sum(&generator_h0_torsion(Q, &torsion(&[((1, 1), 1)]), -5, 3))
            .unwrap();
        let g = gauge_scramble(&f, 3);
        assert!(cok_vanishes(&g).unwrap());
        let k = kernel_functor(&g).unwrap();
        let want: Vec<usize> = (-5..=3).map(|n: i64| (-n - 1).max(0) as usize).collect();
        assert_eq!(k.dims(), want.as_slice());
        assert!(k.is_valid());
        let gd = gamma_window(&g).unwrap();
        let kd = kernel_of_gamma(&g, &gd).unwrap();
        assert!(kd.theta.is_natural(&kd.kernel, &g));
        assert!(gd.gamma.is_natural(&g, &gd.model));
    }

    #[test]
    fn singular_pencil_stops_early() {
        let z = Matrix::zeros(Q, 1, 1);
        let f = FunctorData::new(Q, 0, 3, vec![1; 4], vec![z.clone(); 3], vec![z; 3]).unwrap();
        assert!(cok_vanishes(&f).is_err());
    }
}
