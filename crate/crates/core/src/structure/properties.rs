//! Named structural claims checked on a single functor.

use std::fmt;

use super::classify::{is_integral_transform, is_pullback, Mode};
use super::decompose::decompose;
use crate::error::{Error, Result};
use crate::functor::{apply_to_torsion_map, generator_rq, FunctorData};
use crate::linalg::pencil::pencil_det_form;
use crate::linalg::{colimit_sequence, MapSequence, Matrix};
use crate::sheaves::{local_cohomology_system, vanishing_form, P1Point};
use crate::watts::{
    avoiding_points, compute_w_at, eventual_kernel, gamma_window, kernel_of_gamma, stabilized_top, GammaData,
    KernelData, StabilizationInfo,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The window was too small to decide.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyEntry {
    pub claim: String,
    pub status: Status,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub entries: Vec<PropertyEntry>,
}

impl PropertyReport {
    /// No entry failed; inconclusive entries are allowed.
    pub fn no_failures(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn status_of(&self, claim: &str) -> Option<Status> {
        self.entries.iter().find(|e| e.claim == claim).map(|e| e.status)
    }

    fn record(&mut self, claim: &str, outcome: Result<bool>) {
        let (status, detail) = match outcome {
            Ok(true) => (Status::Pass, None),
            Ok(false) => (Status::Fail, None),
            Err(e @ (Error::WindowTooSmall(_) | Error::NoStabilization)) => (Status::Inconclusive, Some(e.to_string())),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.entries.push(PropertyEntry {
            claim: claim.to_string(),
            status,
            detail,
        });
    }
}

pub const TORSION_STABLE: &str = "torsion sheaf is the same at the two top degrees";
pub const GAMMA_NATURAL: &str = "comparison map is natural";
pub const COKERNEL_VANISHES: &str = "comparison map is surjective with kernel of complementary dimension";
pub const KERNEL_FORMS_EPIC: &str = "nonzero linear forms act surjectively on the kernel functor";
pub const EPIC_DOWNWARD: &str = "surjectivity of a linear form on the kernel propagates to lower degrees";
pub const KERNEL_VANISHES_HIGH: &str = "kernel functor vanishes from the stabilization degree on";
pub const LOCAL_COLIMIT_ZERO: &str = "values on thickened points have zero direct limit";
pub const STALK_COLIMIT_LENGTH: &str = "localization at an avoiding point has dimension equal to the torsion length";
pub const PENCIL_DET_DEGREE: &str = "top pencil determinant has degree equal to the stable dimension";
pub const KERNEL_PENCIL_EMPTY: &str = "kernel pencil at the top is empty";
pub const EVENTUAL_KERNEL_CANONICAL: &str = "eventual kernel does not depend on the avoiding point";
pub const CERTIFICATE_VALID: &str = "splitting certificate verifies";
pub const INTEGRAL_TRANSFORM_AGREE: &str = "integral transform criteria agree";
pub const PULLBACK_AGREE: &str = "pullback criteria agree";

/// The vanishing forms of the first four enumerated points.
fn test_points(f: &FunctorData) -> Vec<P1Point> {
    (0..4).map_while(|k| P1Point::enumerate(f.field(), k)).collect()
}

fn surjective(m: &Matrix) -> bool {
    m.rank() == m.rows()
}

/// Degrees `n` in `(lo, hi]` at which `F(l) : F(O(n-1)) -> F(O(n))` is onto.
fn epic_degrees(k: &FunctorData, p: &P1Point) -> Result<Vec<bool>> {
    let l = vanishing_form(p);
    (k.lo() + 1..=k.hi()).map(|n| Ok(surjective(&k.act_linear(&l, n)?))).collect()
}

/// Direct limit of `F(O_1) -> F(O_2) -> ...` for the thickenings of `p`,
/// placed at the top of the window where at most `max_terms` fit.
pub fn local_colimit_dim(f: &FunctorData, p: &P1Point, max_terms: usize) -> Result<usize> {
    let n = max_terms.min((f.hi() - f.lo()) as usize);
    let sys = local_cohomology_system(p, n)?.shifted(f.hi() - n as i64);
    let maps = sys
        .maps
        .iter()
        .map(|m| apply_to_torsion_map(f, m))
        .collect::<Result<Vec<_>>>()?;
    let mut dims: Vec<usize> = maps.iter().map(Matrix::cols).collect();
    dims.push(maps.last().map_or(0, Matrix::rows));
    let seq = MapSequence::new(f.field(), dims, maps)?;
    Ok(colimit_sequence(&seq)?.limit_dim)
}

/// Direct limit of `F(O(lo)) -> F(O(lo+1)) -> ...` under `l_p`.
pub fn stalk_colimit_dim(f: &FunctorData, p: &P1Point) -> Result<usize> {
    let l = vanishing_form(p);
    let maps = (f.lo() + 1..=f.hi())
        .map(|n| f.act_linear(&l, n))
        .collect::<Result<Vec<_>>>()?;
    let seq = MapSequence::new(f.field(), f.dims().to_vec(), maps)?;
    Ok(colimit_sequence(&seq)?.limit_dim)
}

/// `R_q(l_p)` is invertible and `R_q(l_q)` is zero into every degree of the window.
pub fn check_rq_lemma(q: &P1Point, p: &P1Point, lo: i64, hi: i64) -> Result<bool> {
    let f = generator_rq(q, p, lo, hi)?;
    let (lp, lq) = (vanishing_form(p), vanishing_form(q));
    for n in lo + 1..=hi {
        if !f.act_linear(&lp, n)?.is_invertible() || !f.act_linear(&lq, n)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Core {
    info: StabilizationInfo,
    gamma: GammaData,
    kernel: KernelData,
}

fn core(f: &FunctorData) -> Result<Core> {
    let info = stabilized_top(f)?;
    let gamma = gamma_window(f)?;
    let kernel = kernel_of_gamma(f, &gamma)?;
    Ok(Core { info, gamma, kernel })
}

/// Every claim checked on `F`; errors become failed or inconclusive entries.
pub fn run_property_suite(f: &FunctorData) -> PropertyReport {
    let mut r = PropertyReport::default();
    if let Err(e) = f.ensure_valid() {
        r.record("functor laws hold on the window", Err(e));
        return r;
    }
    let c = core(f);
    let with_core = |g: &dyn Fn(&Core) -> Result<bool>| match &c {
        Ok(c) => g(c),
        Err(e) => Err(e.clone()),
    };

    r.record(
        TORSION_STABLE,
        with_core(&|c| Ok(compute_w_at(f, f.hi() - 1)? == c.gamma.torsion)),
    );
    r.record(GAMMA_NATURAL, with_core(&|c| Ok(c.gamma.gamma.is_natural(f, &c.gamma.model))));
    r.record(
        COKERNEL_VANISHES,
        with_core(&|c| Ok(c.gamma.gamma.components.iter().all(surjective))),
    );
    let pts = test_points(f);
    r.record(
        KERNEL_FORMS_EPIC,
        with_core(&|c| {
            for p in &pts {
                if !epic_degrees(&c.kernel.kernel, p)?.iter().all(|&b| b) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    );
    r.record(
        EPIC_DOWNWARD,
        with_core(&|c| {
            for p in &pts {
                let e = epic_degrees(&c.kernel.kernel, p)?;
                // once onto at some degree, onto at all lower ones
                if let Some(top) = e.iter().rposition(|&b| b) {
                    if !e[..=top].iter().all(|&b| b) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }),
    );
    r.record(
        KERNEL_VANISHES_HIGH,
        with_core(&|c| Ok((c.info.n_stab..=f.hi()).all(|n| c.kernel.kernel.dim(n) == 0))),
    );
    r.record(
        LOCAL_COLIMIT_ZERO,
        with_core(&|c| {
            let mut points: Vec<P1Point> = c.gamma.torsion.support().into_iter().take(2).collect();
            let needed = 3 - points.len();
            points.extend(avoiding_points(f.field(), &c.gamma.torsion, needed)?);
            for p in &points {
                if local_colimit_dim(f, p, 8)? != 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    );
    r.record(
        STALK_COLIMIT_LENGTH,
        with_core(&|c| Ok(stalk_colimit_dim(f, &c.gamma.point)? == c.gamma.torsion.length())),
    );
    r.record(
        PENCIL_DET_DEGREE,
        with_core(&|c| {
            let coeffs = pencil_det_form(f.a(f.hi()), f.b(f.hi()));
            Ok(coeffs.len() == c.info.top_dim + 1 && coeffs.iter().any(|x| !x.is_zero()))
        }),
    );
    r.record(
        KERNEL_PENCIL_EMPTY,
        with_core(&|c| {
            let k = &c.kernel.kernel;
            let coeffs = pencil_det_form(k.a(k.hi()), k.b(k.hi()));
            Ok(k.dim(k.hi()) == 0 && coeffs.len() == 1 && coeffs[0].is_one())
        }),
    );
    r.record(
        EVENTUAL_KERNEL_CANONICAL,
        with_core(&|c| {
            let two = avoiding_points(f.field(), &c.gamma.torsion, 2)?;
            for n in f.lo()..=f.hi() {
                if eventual_kernel(f, n, &two[0])? != eventual_kernel(f, n, &two[1])? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    );
    r.record(CERTIFICATE_VALID, decompose(f).map(|(_, cert)| cert.verify(f).is_empty()));
    r.record(INTEGRAL_TRANSFORM_AGREE, is_integral_transform(f, Mode::Verify).map(|_| true));
    r.record(PULLBACK_AGREE, is_pullback(f, Mode::Verify).map(|_| true));
    r
}
