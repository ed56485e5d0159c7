//! Turning points and action integrals for the SWKB and proper rules.
//!
//! Every action reduces to `prefactor * integral sqrt((hi-u)(u-lo)) w(u) du`
//! in a canonical variable `u` (`y`, `z = y^2`, `x` or `1/x`), where the
//! weight `w` depends on the family and the map sign. The moments of those
//! weights all have closed forms, derived from
//!
//! `J(c) = integral sqrt((hi-t)(t-lo)) / (t-c) dt
//!       = pi [ (lo+hi)/2 - c - sgn(lo-c) sqrt((lo-c)(hi-c)) ]`, `c` outside `[lo, hi]`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::Serialize;

use crate::catalog::{
    superpotential_coeffs, CanonicalForm, MapSign, PotentialId, PotentialSpec,
    SuperpotentialCoeffs,
};
use crate::error::{Error, Result};
use crate::numerics::{integrate_sqrt_endpoints, QuadratureSpec};

/// Which quantization condition the turning points belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `W^2(x) = E - E0`.
    Swkb,
    /// `V(x) = E`.
    Proper,
}

/// How an action integral was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    CanonicalQuadrature,
    RawQuadrature,
}

/// Classical turning points in `x` and in the canonical variable.
///
/// `u_left < u_right` always; for decreasing maps (Morse, Kepler-Coulomb)
/// `u_left` is the image of `x_right`. An infinite `u` or a zero `x`
/// marks a turning point that has moved onto the domain edge, which only
/// happens for the proper rule with `l = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    pub x_left: f64,
    pub x_right: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub rule: Rule,
}

/// An action integral and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionValue {
    pub value: f64,
    pub method: Method,
    /// Last change between quadrature refinements; zero for closed forms.
    pub error_estimate: f64,
}

/// SWKB energies this close to the ground state count as zero action.
pub const GROUND_ENERGY_WINDOW: f64 = 1e-9;

/// Weight `w(u)` of the reduced integral.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Weight {
    One,
    /// `1/u`
    Inverse,
    /// `1/u^2`
    InverseSquare,
    /// `1/(1 +/- u^2)`
    First(MapSign),
    /// `1/(u (1 +/- u))`
    Second(MapSign),
}

impl Weight {
    fn eval(self, u: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::Inverse => 1.0 / u,
            Weight::InverseSquare => 1.0 / (u * u),
            Weight::First(s) => 1.0 / (1.0 + s.value() * u * u),
            Weight::Second(s) => 1.0 / (u * (1.0 + s.value() * u)),
        }
    }

    /// Closed-form moment over `[lo, hi]`.
    fn moment(self, lo: f64, hi: f64) -> f64 {
        match self {
            Weight::One => PI * (hi - lo) * (hi - lo) / 8.0,
            Weight::Inverse => resolvent_moment(lo, hi, 0.0),
            Weight::InverseSquare => {
                let g = (lo * hi).sqrt();
                PI * (lo + hi - 2.0 * g) / (2.0 * g)
            }
            Weight::First(MapSign::Plus) => plus_first_moment(lo, hi),
            Weight::First(MapSign::Minus) => {
                0.5 * (resolvent_moment(lo, hi, -1.0) - resolvent_moment(lo, hi, 1.0))
            }
            Weight::Second(MapSign::Plus) => {
                resolvent_moment(lo, hi, 0.0) - resolvent_moment(lo, hi, -1.0)
            }
            Weight::Second(MapSign::Minus) => {
                resolvent_moment(lo, hi, 0.0) - resolvent_moment(lo, hi, 1.0)
            }
        }
    }
}

/// An action as `prefactor * moment` with its turning points.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    prefactor: f64,
    weight: Weight,
    points: TurningPoints,
}

/// `integral_{lo}^{hi} sqrt((hi-t)(t-lo)) / (t - c) dt` for `c` outside `[lo, hi]`.
pub fn resolvent_moment(lo: f64, hi: f64, c: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    let root = ((lo - c) * (hi - c)).sqrt();
    let signed = if lo > c { root } else { -root };
    PI * (0.5 * (lo + hi) - c - signed)
}

fn plus_first_moment(lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    let inner = (1.0 + lo * lo).sqrt() * (1.0 + hi * hi).sqrt() - lo * hi + 1.0;
    PI / SQRT_2 * inner.sqrt() - PI
}

/// `integral_{lo}^{hi} sqrt((hi-y)(y-lo)) / (1 +/- y^2) dy`.
///
/// The `Minus` case requires `-1 < lo <= hi < 1`.
pub fn moment_integral_first(lo: f64, hi: f64, sign: MapSign) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::Range(format!("need lo <= hi, got [{lo}, {hi}]")));
    }
    match sign {
        MapSign::Plus => Ok(plus_first_moment(lo, hi)),
        MapSign::Minus => {
            if !(lo > -1.0 && hi < 1.0) {
                return Err(Error::Range(format!("need -1 < lo <= hi < 1, got [{lo}, {hi}]")));
            }
            if lo == hi {
                return Ok(0.0);
            }
            Ok(FRAC_PI_2
                * (2.0 - ((1.0 - lo) * (1.0 - hi)).sqrt() - ((1.0 + lo) * (1.0 + hi)).sqrt()))
        }
    }
}

/// `integral_{lo}^{hi} sqrt((hi-z)(z-lo)) / (z (1 +/- z)) dz`.
///
/// Requires `0 < lo <= hi`, and `hi < 1` in the `Minus` case.
pub fn moment_integral_second(lo: f64, hi: f64, sign: MapSign) -> Result<f64> {
    if !(lo > 0.0 && lo <= hi) {
        return Err(Error::Range(format!("need 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    if sign == MapSign::Minus && !(hi < 1.0) {
        return Err(Error::Range(format!("need hi < 1, got {hi}")));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let s = sign.value();
    Ok(PI * (-s - (lo * hi).sqrt() + s * ((1.0 + s * lo) * (1.0 + s * hi)).sqrt()))
}

/// Real roots of `p t^2 + q t + r` in increasing order, `p > 0`.
fn quadratic_roots(p: f64, q: f64, r: f64, energy: f64) -> Result<(f64, f64)> {
    let disc = q * q - 4.0 * p * r;
    if !(disc > 0.0) {
        return Err(Error::NoBoundRegion(energy));
    }
    let s = -0.5 * (q + q.signum() * disc.sqrt());
    if s == 0.0 {
        return Err(Error::NoBoundRegion(energy));
    }
    let (t1, t2) = (s / p, r / s);
    Ok(if t1 < t2 { (t1, t2) } else { (t2, t1) })
}

fn reduce(spec: &PotentialSpec, energy: f64, rule: Rule) -> Result<Reduced> {
    if !energy.is_finite() {
        return Err(Error::Range(format!("energy {energy}")));
    }
    let form = spec.canonical_form()?;
    let coeffs = superpotential_coeffs(&form)?;
    let e0 = spec.ground_state_energy()?;
    let excess = energy - e0;
    if rule == Rule::Swkb && !(excess > 0.0) {
        return Err(Error::NoBoundRegion(energy));
    }
    let SuperpotentialCoeffs { a, b } = coeffs;
    let root_e = excess.max(0.0).sqrt();
    // second-family SWKB roots in y, from a y^2 -/+ sqrt(e) y - b = 0
    let second_swkb = |a: f64, b: f64| {
        let big = (root_e + (excess + 4.0 * a * b).sqrt()) / (2.0 * a);
        let small = b / (a * big);
        (small * small, big * big)
    };
    let (prefactor, weight, lo, hi) = match (form, rule) {
        (CanonicalForm::First { alpha, sign, .. }, Rule::Swkb) => {
            (a / alpha, Weight::First(sign), (-root_e - b) / a, (root_e - b) / a)
        }
        (CanonicalForm::First { lambda2, lambda1, lambda0, alpha, sign }, Rule::Proper) => {
            let (lo, hi) = quadratic_roots(lambda2, lambda1, lambda0 - energy, energy)?;
            (lambda2.sqrt() / alpha, Weight::First(sign), lo, hi)
        }
        (CanonicalForm::Second { alpha, sign, .. }, Rule::Swkb) => {
            let (lo, hi) = second_swkb(a, b);
            (a / (2.0 * alpha), Weight::Second(sign), lo, hi)
        }
        (CanonicalForm::Second { lambda2, mu2, lambda0, alpha, sign }, Rule::Proper) => {
            if !(energy > lambda0) {
                return Err(Error::NoBoundRegion(energy));
            }
            let (lo, hi) = quadratic_roots(lambda2, lambda0 - energy, mu2, energy)?;
            (lambda2.sqrt() / (2.0 * alpha), Weight::Second(sign), lo, hi)
        }
        (CanonicalForm::Harmonic { .. }, Rule::Swkb) => (a, Weight::One, -root_e / a, root_e / a),
        (CanonicalForm::Harmonic { .. }, Rule::Proper) => {
            if !(energy + a > 0.0) {
                return Err(Error::NoBoundRegion(energy));
            }
            let x = (energy + a).sqrt() / a;
            (a, Weight::One, -x, x)
        }
        (CanonicalForm::Morse { alpha, .. }, Rule::Swkb) => {
            (b / alpha, Weight::Inverse, (a - root_e) / b, (a + root_e) / b)
        }
        (CanonicalForm::Morse { alpha, .. }, Rule::Proper) => {
            let (lo, hi) =
                quadratic_roots(b * b, -b * (2.0 * a + alpha), a * a - energy, energy)?;
            (b / alpha, Weight::Inverse, lo, hi)
        }
        (CanonicalForm::Coulomb { .. }, Rule::Swkb) => {
            (a, Weight::InverseSquare, (b - root_e) / a, (b + root_e) / a)
        }
        (CanonicalForm::Coulomb { .. }, Rule::Proper) => {
            let curvature = a * (a - 1.0);
            let (lo, hi) = if curvature > 0.0 {
                quadratic_roots(curvature, -2.0 * a * b, b * b - energy, energy)?
            } else {
                // l = 0: the centrifugal term vanishes and the inner
                // turning point sits at x = 0
                ((b * b - energy) / (2.0 * a * b), f64::INFINITY)
            };
            (curvature.sqrt(), Weight::InverseSquare, lo, hi)
        }
        (CanonicalForm::Isotonic { .. }, Rule::Swkb) => {
            let (lo, hi) = second_swkb(a, b);
            (a / 2.0, Weight::Inverse, lo, hi)
        }
        (CanonicalForm::Isotonic { .. }, Rule::Proper) => {
            // l = 0 gives a zero root: the inner point reaches the origin
            let (lo, hi) =
                quadratic_roots(a * a, -(energy + 2.0 * a * b + a), b * (b - 1.0), energy)?;
            (a / 2.0, Weight::Inverse, lo, hi)
        }
    };
    let points = locate(spec, &form, rule, energy, lo, hi)?;
    Ok(Reduced { prefactor, weight, points })
}

/// Checks the canonical roots against the map's range and maps them to `x`.
fn locate(
    spec: &PotentialSpec,
    form: &CanonicalForm,
    rule: Rule,
    energy: f64,
    lo: f64,
    hi: f64,
) -> Result<TurningPoints> {
    let (y_min, y_max) = spec.variable_range();
    let squared = matches!(form, CanonicalForm::Second { .. } | CanonicalForm::Isotonic { .. });
    let (u_min, u_max) = if squared {
        (y_min.max(0.0).powi(2), y_max * y_max)
    } else {
        (y_min, y_max)
    };
    // an edge root is only legitimate for the l = 0 proper cases
    let edge_ok = rule == Rule::Proper
        && matches!(spec.id(), PotentialId::KeplerCoulomb | PotentialId::Isotonic);
    let inside_lo = lo > u_min || (edge_ok && lo == u_min);
    let inside_hi = hi < u_max || (edge_ok && hi == u_max);
    if !(lo.is_finite() || edge_ok) || !(inside_lo && inside_hi) || !(lo <= hi) {
        return Err(Error::NoBoundRegion(energy));
    }
    let to_x = |u: f64| -> f64 {
        match form {
            CanonicalForm::Second { .. } => spec.inverse_map(u.sqrt()),
            CanonicalForm::Isotonic { .. } => u.sqrt(),
            CanonicalForm::Coulomb { .. } if u.is_infinite() => 0.0,
            _ => spec.inverse_map(u),
        }
    };
    let (x1, x2) = (to_x(lo), to_x(hi));
    let (x_left, x_right) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    Ok(TurningPoints { x_left, x_right, u_left: lo, u_right: hi, rule })
}

/// Turning points at energy `energy`.
///
/// SWKB requires `energy > E0`; both rules require the points to lie in
/// the range of the change of variable (below the continuum threshold).
pub fn turning_points(spec: &PotentialSpec, energy: f64, rule: Rule) -> Result<TurningPoints> {
    reduce(spec, energy, rule).map(|r| r.points)
}

fn closed_form(spec: &PotentialSpec, reduced: &Reduced, energy: f64, rule: Rule) -> Result<f64> {
    let form = spec.canonical_form()?;
    let SuperpotentialCoeffs { a, b } = superpotential_coeffs(&form)?;
    let excess = energy - spec.ground_state_energy()?;
    Ok(match (form, rule) {
        (CanonicalForm::Harmonic { omega }, Rule::Swkb) => PI * excess / omega,
        (CanonicalForm::Harmonic { omega }, Rule::Proper) => PI * (energy + omega / 2.0) / omega,
        (CanonicalForm::Morse { a, alpha, .. }, Rule::Swkb) => {
            PI / alpha * (a - (a * a - excess).sqrt())
        }
        (CanonicalForm::Morse { a, alpha, .. }, Rule::Proper) => {
            PI / alpha * (a + alpha / 2.0 - (a * a - energy).sqrt())
        }
        (CanonicalForm::Coulomb { .. }, Rule::Swkb) => {
            PI * (a * b / (b * b - excess).sqrt() - a)
        }
        (CanonicalForm::Coulomb { .. }, Rule::Proper) => {
            PI * (a * b / (b * b - energy).sqrt() - (a * (a - 1.0)).sqrt())
        }
        // a = omega/2
        (CanonicalForm::Isotonic { .. }, Rule::Swkb) => PI * excess / (4.0 * a),
        (CanonicalForm::Isotonic { .. }, Rule::Proper) => {
            PI * (energy + 2.0 * a * b + a) / (4.0 * a) - FRAC_PI_2 * (b * (b - 1.0)).sqrt()
        }
        _ => {
            let p = &reduced.points;
            reduced.prefactor * reduced.weight.moment(p.u_left, p.u_right)
        }
    })
}

fn canonical_quadrature(reduced: &Reduced) -> Result<(f64, f64)> {
    let p = &reduced.points;
    if !(p.u_left.is_finite() && p.u_right.is_finite()) {
        return Err(Error::Param(
            "canonical quadrature needs finite canonical turning points (l > 0)".into(),
        ));
    }
    let (lo, hi, w) = (p.u_left, p.u_right, reduced.weight);
    let q = integrate_sqrt_endpoints(
        |u| ((hi - u) * (u - lo)).max(0.0).sqrt() * w.eval(u),
        &QuadratureSpec::new(lo, hi),
    )?;
    Ok((reduced.prefactor * q.value, reduced.prefactor.abs() * q.error_estimate))
}

fn raw_quadrature(spec: &PotentialSpec, reduced: &Reduced, energy: f64, rule: Rule) -> Result<(f64, f64)> {
    let p = &reduced.points;
    let (mut lo, hi) = (p.x_left, p.x_right);
    // isotonic with l = 0 is even in x and regular at the origin: integrate
    // over the symmetric interval and halve, keeping both ends square-root
    let mut scale = 1.0;
    if spec.id() == PotentialId::Isotonic && lo == 0.0 {
        lo = -hi;
        scale = 0.5;
    }
    let q = match rule {
        Rule::Swkb => {
            let coeffs = spec.superpotential_params()?;
            let excess = energy - spec.ground_state_energy()?;
            integrate_sqrt_endpoints(
                |x| {
                    let w = spec.superpotential_unchecked(&coeffs, x);
                    (excess - w * w).max(0.0).sqrt()
                },
                &QuadratureSpec::new(lo, hi),
            )?
        }
        Rule::Proper => integrate_sqrt_endpoints(
            |x| (energy - spec.potential_unchecked(x)).max(0.0).sqrt(),
            &QuadratureSpec::new(lo, hi),
        )?,
    };
    Ok((scale * q.value, scale * q.error_estimate))
}

/// Action integral for either rule by the chosen method.
pub fn action(spec: &PotentialSpec, energy: f64, rule: Rule, method: Method) -> Result<ActionValue> {
    if rule == Rule::Swkb {
        let excess = energy - spec.ground_state_energy()?;
        if excess.abs() <= GROUND_ENERGY_WINDOW {
            return Ok(ActionValue { value: 0.0, method, error_estimate: 0.0 });
        }
    }
    let reduced = reduce(spec, energy, rule)?;
    let (value, error_estimate) = match method {
        Method::ClosedForm => (closed_form(spec, &reduced, energy, rule)?, 0.0),
        Method::CanonicalQuadrature => canonical_quadrature(&reduced)?,
        Method::RawQuadrature => raw_quadrature(spec, &reduced, energy, rule)?,
    };
    Ok(ActionValue { value, method, error_estimate })
}

/// `integral sqrt(E - E0 - W^2) dx` between the SWKB turning points.
pub fn swkb_action(spec: &PotentialSpec, energy: f64, method: Method) -> Result<ActionValue> {
    action(spec, energy, Rule::Swkb, method)
}

/// `integral sqrt(E - V) dx` between the proper turning points.
pub fn pq_action(spec: &PotentialSpec, energy: f64, method: Method) -> Result<ActionValue> {
    action(spec, energy, Rule::Proper, method)
}

/// Closed-form proper action at the ground-state energy (the constant
/// offset of the proper rule).
pub fn pq_ground_closed(spec: &PotentialSpec) -> Result<f64> {
    let form = spec.canonical_form()?;
    let SuperpotentialCoeffs { a, b } = superpotential_coeffs(&form)?;
    Ok(match form {
        CanonicalForm::First { lambda2, alpha, sign: MapSign::Plus, .. } => {
            PI / alpha * (a - lambda2.sqrt())
        }
        CanonicalForm::First { lambda2, alpha, sign: MapSign::Minus, .. } => {
            -PI / alpha * (a - lambda2.sqrt())
        }
        CanonicalForm::Second { lambda2, mu2, alpha, sign, .. } => {
            if sign == MapSign::Minus && !(b < a) {
                return Err(Error::Param(format!("need b < a, got a = {a}, b = {b}")));
            }
            let s = sign.value();
            PI / (2.0 * alpha) * (b + s * a - s * lambda2.sqrt() - mu2.sqrt())
        }
        CanonicalForm::Harmonic { .. } | CanonicalForm::Morse { .. } => FRAC_PI_2,
        CanonicalForm::Coulomb { .. } => PI * (a - (a * (a - 1.0)).sqrt()),
        CanonicalForm::Isotonic { .. } => PI * (0.5 * b + 0.25) - FRAC_PI_2 * (b * (b - 1.0)).sqrt(),
    })
}

/// `I_swkb(E) - I_pq(E) + I_pq(E0)`, all three by raw quadrature.
///
/// Zero for every shape-invariant potential at every energy between the
/// ground state and the threshold, not only at eigenvalues.
pub fn equivalence_residual(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    let e0 = spec.ground_state_energy()?;
    let swkb = swkb_action(spec, energy, Method::RawQuadrature)?.value;
    let pq = pq_action(spec, energy, Method::RawQuadrature)?.value;
    let pq0 = pq_action(spec, e0, Method::RawQuadrature)?.value;
    Ok(swkb - pq + pq0)
}
