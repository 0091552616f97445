//! The isospectral family: every admissible choice of the free parameter ω
//! yields a different matrix with the same two spectra, and the quotient
//! function built from the spectra alone locates them.
//!
//! On the distinguished gap the quotient ∏(s−μ_k)/(s−λ_k) has exactly one
//! interior extremum — a minimum above 1 when the data is θ > 1, a maximum
//! below 1 when θ < 1 — so for a prescribed admissible θ the level set
//! `quotient = θ²` consists of exactly two points (γ and the single zero γ̂
//! of m in the gap), or one point at the degenerate extremum. Root finding
//! splits at the extremum and bisects the two monotone branches.

use num_complex::Complex64;

use crate::interlace::{Regime, TwoSpectraProblem};
use crate::inverse::{solve_disjoint, solve_shared_by_theta, InverseSolution, SolveError};
use crate::numeric::{ratio_product, ratio_product_skipping};
use crate::par;
use crate::perturbation::PerturbationError;
use crate::spectral::{pole_hit, SpectralError};

/// Golden-section abscissa tolerance, relative to the gap width.
const EXTREMUM_ABSCISSA_TOLERANCE: f64 = 1e-12;

/// Bisection budget per monotone branch.
const BISECTION_ITERATIONS: usize = 80;

/// `|θ² − extremum| ≤ EXTREMUM_COLLAPSE_TOLERANCE·θ²` collapses the two
/// roots of `quotient = θ²` into the single extremum point.
const EXTREMUM_COLLAPSE_TOLERANCE: f64 = 1e-8;

const GOLDEN_RATIO: f64 = 0.618_033_988_749_894_9;

/// ∏(z−μ_k)/(z−λ_k) from the spectra alone; in the shared regime the common
/// k₀ factor is dropped. Poles are the (remaining) λ's.
pub fn quotient_from_spectra(p: &TwoSpectraProblem, z: Complex64) -> Result<Complex64, SolveError> {
    let l = p.lambdas();
    let m = p.mus();
    let skip = (p.regime() == Regime::SharedGamma).then_some(p.k0());
    for (k, &lk) in l.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        if pole_hit(z, lk) {
            return Err(SpectralError::PoleEvaluation { eigenvalue: lk }.into());
        }
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..l.len() {
        if Some(k) == skip {
            continue;
        }
        acc *= (z - m[k]) / (z - l[k]);
    }
    Ok(acc)
}

/// Real-axis variant of [`quotient_from_spectra`], evaluated in
/// sign/log-magnitude form.
pub fn quotient_from_spectra_real(p: &TwoSpectraProblem, x: f64) -> Result<f64, SolveError> {
    let l = p.lambdas();
    let m = p.mus();
    let z = Complex64::new(x, 0.0);
    match p.regime() {
        Regime::SharedGamma => {
            let k0 = p.k0();
            for (k, &lk) in l.iter().enumerate() {
                if k != k0 && pole_hit(z, lk) {
                    return Err(SpectralError::PoleEvaluation { eigenvalue: lk }.into());
                }
            }
            Ok(ratio_product_skipping(x, m, l, k0).value())
        }
        _ => {
            for &lk in l {
                if pole_hit(z, lk) {
                    return Err(SpectralError::PoleEvaluation { eigenvalue: lk }.into());
                }
            }
            Ok(ratio_product(x, m, l).value())
        }
    }
}

/// Quotient evaluation for interior search points: strictly inside the
/// distinguished gap there are no poles, so skip the tolerance check that
/// would otherwise refuse points close to the gap endpoints.
fn quotient_unchecked(p: &TwoSpectraProblem, x: f64) -> f64 {
    ratio_product(x, p.mus(), p.lambdas()).value()
}

/// The unique interior extremum of the quotient over the distinguished gap:
/// `(ω*, value)` with value > 1 (a minimum) on θ > 1 data and value < 1
/// (a maximum) on θ < 1 data. Boundary gaps have an infinite endpoint and no
/// search bracket; use [`gap_extremum_in`] with an explicit bracket there.
pub fn gap_extremum(p: &TwoSpectraProblem) -> Result<(f64, f64), SolveError> {
    let (lo, hi) = p.gap_interval()?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(SolveError::UnboundedGap { lo, hi });
    }
    gap_extremum_in(p, lo, hi)
}

/// Golden-section search over a caller-supplied open bracket inside the
/// distinguished gap.
pub fn gap_extremum_in(p: &TwoSpectraProblem, lo: f64, hi: f64) -> Result<(f64, f64), SolveError> {
    if p.regime() == Regime::SharedGamma {
        return Err(crate::interlace::InterlaceError::WrongRegime {
            required: "disjoint",
            actual: p.regime(),
        }
        .into());
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SolveError::UnboundedGap { lo, hi });
    }
    let minimize = p.regime() == Regime::DisjointThetaGt1;
    let signed = |x: f64| {
        let v = quotient_unchecked(p, x);
        if minimize {
            v
        } else {
            -v
        }
    };

    let width = hi - lo;
    let tol = EXTREMUM_ABSCISSA_TOLERANCE * width;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - GOLDEN_RATIO * (b - a);
    let mut d = a + GOLDEN_RATIO * (b - a);
    let mut fc = signed(c);
    let mut fd = signed(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN_RATIO * (b - a);
            fc = signed(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN_RATIO * (b - a);
            fd = signed(d);
        }
        if !(fc.is_finite() && fd.is_finite()) {
            return Err(SolveError::BracketingFailure);
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, quotient_unchecked(p, x)))
}

/// One isospectral family member per ω, errors collected per member. In the
/// disjoint regime ω ranges over the gap; in the shared regime ω is the
/// admissible θ′². Members are computed in parallel when the `parallel`
/// feature is enabled.
pub fn family(p: &TwoSpectraProblem, omegas: &[f64]) -> Vec<FamilyMember> {
    let shared = p.regime() == Regime::SharedGamma;
    par::map_vec(omegas.to_vec(), move |omega| {
        let result = if shared {
            solve_shared_by_theta(p, omega)
        } else {
            solve_disjoint(p, omega)
        };
        FamilyMember { omega, result }
    })
}

/// A family sample point: the parameter and its solve outcome.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub omega: f64,
    pub result: Result<InverseSolution, SolveError>,
}

/// All matrices with both prescribed spectra and the prescribed θ. Away from
/// the degenerate case there are exactly two (the level set of the quotient
/// at θ² is {γ, γ̂}); at the extremum the two merge into one.
pub fn solve_with_known_theta(
    p: &TwoSpectraProblem,
    theta: f64,
) -> Result<Vec<InverseSolution>, SolveError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(PerturbationError::InvalidTheta(theta).into());
    }
    let (lo, hi) = p.gap_interval()?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(SolveError::UnboundedGap { lo, hi });
    }
    let (omega_star, extremum) = gap_extremum_in(p, lo, hi)?;
    let t2 = theta * theta;

    if (t2 - extremum).abs() <= EXTREMUM_COLLAPSE_TOLERANCE * t2 {
        return Ok(vec![solve_disjoint(p, omega_star)?]);
    }
    let gt1 = p.regime() == Regime::DisjointThetaGt1;
    let feasible = if gt1 { t2 > extremum } else { t2 < extremum };
    if !feasible {
        return Err(SolveError::NoSolution {
            theta_squared: t2,
            extremum,
        });
    }

    let left = bisect_branch(p, lo, omega_star, t2, gt1)?;
    let right = bisect_branch(p, hi, omega_star, t2, gt1)?;
    Ok(vec![solve_disjoint(p, left)?, solve_disjoint(p, right)?])
}

/// Bisection for `quotient = target` on the monotone branch between the gap
/// endpoint `outer` (toward which the quotient runs to +∞ for θ > 1 data,
/// to 0 for θ < 1 data) and the extremum abscissa `inner`.
fn bisect_branch(
    p: &TwoSpectraProblem,
    outer: f64,
    inner: f64,
    target: f64,
    gt1: bool,
) -> Result<f64, SolveError> {
    let mut far = outer;
    let mut near = inner;
    for _ in 0..BISECTION_ITERATIONS {
        let mid = 0.5 * (far + near);
        if mid == far || mid == near {
            break;
        }
        let v = quotient_unchecked(p, mid);
        if !v.is_finite() {
            return Err(SolveError::BracketingFailure);
        }
        let outward_of_root = if gt1 { v > target } else { v < target };
        if outward_of_root {
            far = mid;
        } else {
            near = mid;
        }
    }
    let root = 0.5 * (far + near);
    let residual = (quotient_unchecked(p, root) - target).abs();
    if residual > 1e-6 * target.abs().max(1.0) {
        return Err(SolveError::BracketingFailure);
    }
    Ok(root)
}
