//! Reference integrators for the acceptance suite, written without any use
//! of the library's own quadrature or turning-point code.

#![allow(dead_code, clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

use swkb::PotentialSpec;

const KRONROD_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point rule.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let centre = f(mid);
    let mut kronrod = centre * KRONROD_WEIGHTS[7];
    let mut gauss = centre * GAUSS_WEIGHTS[3];
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`: the piece with
/// the largest error estimate is bisected until the summed estimate drops
/// below `tol` or the budget of pieces runs out.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (value, err) = kronrod15(&f, a, b);
    let mut parts = vec![(a, b, value, err)];
    for _ in 0..2000 {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        let total: f64 = parts.iter().map(|p| p.2).sum();
        if total_err <= tol.max(1e-15 * total.abs()) {
            break;
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (left, left_err) = kronrod15(&f, lo, mid);
        let (right, right_err) = kronrod15(&f, mid, hi);
        parts.push((lo, mid, left, left_err));
        parts.push((mid, hi, right, right_err));
    }
    parts.iter().map(|p| p.2).sum()
}

/// `integral_lo^hi f` for integrands with square-root zeros at both ends,
/// smoothed by `x = mid - half cos(theta)` before the adaptive rule.
pub fn endpoint_integral<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    gauss_kronrod(|t: f64| f(mid - half * t.cos()) * half * t.sin(), 0.0, std::f64::consts::PI, tol)
}

/// Crossing of `profile = level` between `inside` (below) and `outside` (above).
fn bisect<F: Fn(f64) -> f64>(profile: &F, level: f64, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..400 {
        let m = 0.5 * (inside + outside);
        if m == inside || m == outside {
            break;
        }
        if profile(m) < level {
            inside = m;
        } else {
            outside = m;
        }
    }
    0.5 * (inside + outside)
}

/// Walks from `start` in direction `dir` until `profile >= level`, staying
/// inside `edge` (possibly infinite). Returns the crossing.
fn crossing<F: Fn(f64) -> f64>(profile: &F, level: f64, start: f64, dir: f64, edge: f64, scale: f64) -> Option<f64> {
    let mut inside = start;
    let mut step = scale * 1e-3;
    for _ in 0..2000 {
        let mut next = inside + dir * step;
        if edge.is_finite() && (next - edge) * dir >= 0.0 {
            next = 0.5 * (inside + edge);
        }
        if next == inside {
            return None;
        }
        let value = profile(next);
        if value.is_nan() {
            return None;
        }
        if value >= level {
            return Some(bisect(profile, level, inside, next));
        }
        inside = next;
        step *= 2.0;
    }
    None
}

/// `integral sqrt(level - profile)` over the classically allowed region
/// containing the minimum of `profile` on a dense sample of the window.
pub fn action_integral<F: Fn(f64) -> f64>(spec: &PotentialSpec, profile: F, level: f64) -> Option<f64> {
    let (w_lo, w_hi) = spec.natural_window();
    let (d_lo, d_hi) = spec.domain();
    let scale = w_hi - w_lo;
    let bottom = spec
        .sample_points(20000)
        .into_iter()
        .filter(|x| profile(*x).is_finite())
        .min_by(|a, b| profile(*a).total_cmp(&profile(*b)))?;
    if !(profile(bottom) < level) {
        return None;
    }
    let left = crossing(&profile, level, bottom, -1.0, d_lo, scale)?;
    let right = crossing(&profile, level, bottom, 1.0, d_hi, scale)?;
    let integrand = |x: f64| (level - profile(x)).max(0.0).sqrt();
    Some(endpoint_integral(integrand, left, right, 1e-13))
}

/// Proper action `integral sqrt(E - V)`.
pub fn proper_action(spec: &PotentialSpec, energy: f64) -> Option<f64> {
    action_integral(spec, |x| spec.potential(x).unwrap_or(f64::NAN), energy)
}

/// SWKB action `integral sqrt(E - E0 - W^2)`.
pub fn swkb_action(spec: &PotentialSpec, energy: f64) -> Option<f64> {
    let shifted = energy - spec.ground_state_energy().ok()?;
    action_integral(spec, |x| spec.superpotential(x).map(|w| w * w).unwrap_or(f64::NAN), shifted)
}
