//! Quadrature and root-finding kernels.
//!
//! Nothing in here knows about potentials. The quadrature rule targets
//! integrands that vanish like a square root at both ends of the interval,
//! which is the shape of every action integral between turning points.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Interval and stopping rule for [`integrate_sqrt_endpoints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lo: f64,
    pub hi: f64,
    pub target_abs_tol: f64,
    pub max_order: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_TOL: f64 = 1e-11;
    pub const DEFAULT_MAX_ORDER: usize = 1 << 14;

    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            target_abs_tol: Self::DEFAULT_TOL,
            max_order: Self::DEFAULT_MAX_ORDER,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_abs_tol = tol;
        self
    }
}

/// Result of a quadrature: the last estimate and the change from the previous order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub order: usize,
}

/// Integrates `f` over `[lo, hi]` through `t = m + h cos(theta)`.
///
/// The substituted integrand `f(t) h sin(theta)` is smooth and even in theta
/// whenever `f` behaves like `sqrt((hi - t)(t - lo))` times a smooth function,
/// so an equal-weight midpoint rule in theta converges geometrically. The
/// order doubles until two successive estimates differ by less than the
/// target tolerance. Midpoint nodes never touch the endpoints.
pub fn integrate_sqrt_endpoints<F>(f: F, q: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(q.lo <= q.hi) || !(q.target_abs_tol > 0.0) {
        return Err(Error::Range(format!(
            "quadrature interval [{}, {}] with tolerance {}",
            q.lo, q.hi, q.target_abs_tol
        )));
    }
    if q.lo == q.hi {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            order: 0,
        });
    }
    let mid = 0.5 * (q.lo + q.hi);
    let half = 0.5 * (q.hi - q.lo);

    let rule = |order: usize| -> Result<f64> {
        let step = PI / order as f64;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in 0..order {
            let theta = (k as f64 + 0.5) * step;
            let (s, c) = theta.sin_cos();
            let t = mid + half * c;
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample(t));
            }
            // Kahan summation keeps high orders from drowning in round-off.
            let y = v * s - comp;
            let next = sum + y;
            comp = (next - sum) - y;
            sum = next;
        }
        Ok(sum * step * half)
    };

    let mut order = 8;
    let mut prev = rule(order)?;
    loop {
        order *= 2;
        if order > q.max_order {
            return Err(Error::QuadratureFailure {
                delta: f64::NAN,
                order: order / 2,
            });
        }
        let next = rule(order)?;
        let delta = (next - prev).abs();
        let tol = q.target_abs_tol.max(64.0 * f64::EPSILON * next.abs());
        if delta < tol {
            return Ok(Quadrature {
                value: next,
                error_estimate: delta,
                order,
            });
        }
        if order * 2 > q.max_order {
            return Err(Error::QuadratureFailure { delta, order });
        }
        prev = next;
    }
}

/// Tanh-sinh quadrature over `[lo, hi]`.
///
/// Used as a second, unrelated rule when closed forms are checked at run
/// time. It tolerates integrable endpoint singularities of any algebraic kind.
pub fn integrate_double_exponential<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(lo <= hi) {
        return Err(Error::Range(format!("interval [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            order: 0,
        });
    }
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    const T_MAX: f64 = 4.5;

    // Node pair at +t and -t; distances to the endpoints are computed from
    // the complement so that points close to lo and hi stay accurate.
    let pair = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        let d = half * 2.0 / (1.0 + (2.0 * u).exp());
        let mut s = 0.0;
        for x in [hi - d, lo + d] {
            if x <= lo || x >= hi {
                continue;
            }
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample(x));
            }
            s += v;
        }
        Ok(w * s)
    };

    let mut step = 0.5;
    let mut sum = {
        let v0 = f(mid);
        if !v0.is_finite() {
            return Err(Error::NonFiniteSample(mid));
        }
        FRAC_PI_2 * v0
    };
    let mut k = 1;
    while k as f64 * step <= T_MAX {
        sum += pair(k as f64 * step)?;
        k += 1;
    }
    let mut prev = sum * step * half;
    for level in 1..=12 {
        step *= 0.5;
        let mut k = 1;
        while k as f64 * step <= T_MAX {
            sum += pair(k as f64 * step)?;
            k += 2;
        }
        let est = sum * step * half;
        let delta = (est - prev).abs();
        if level >= 3 && delta < tol.max(32.0 * f64::EPSILON * est.abs()) {
            return Ok(Quadrature {
                value: est,
                error_estimate: delta,
                order: 1 << (level + 1),
            });
        }
        prev = est;
    }
    Err(Error::QuadratureFailure {
        delta: f64::NAN,
        order: 1 << 13,
    })
}

/// Bracket and stopping rule for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub lo: f64,
    pub hi: f64,
    pub tol_x: f64,
    pub tol_f: f64,
    pub max_iter: usize,
}

impl RootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            tol_x: 1e-12,
            tol_f: 1e-12,
            max_iter: 200,
        }
    }
}

/// Brent's method: inverse quadratic interpolation and secant steps, with
/// bisection whenever the interpolant leaves the bracket or stalls.
pub fn find_root<G>(g: G, r: &RootSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let (mut a, mut b) = (r.lo, r.hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if !fa.is_finite() {
        return Err(Error::NonFiniteSample(a));
    }
    if !fb.is_finite() {
        return Err(Error::NonFiniteSample(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: r.lo, hi: r.hi });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..r.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * r.tol_x;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() < r.tol_f {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let rb = fb / fc;
                p = s * (2.0 * m * qa * (qa - rb) - (b - a) * (rb - 1.0));
                q = (qa - 1.0) * (rb - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = g(b);
        if !fb.is_finite() {
            return Err(Error::NonFiniteSample(b));
        }
    }
    Err(Error::MaxIterations(r.max_iter))
}
