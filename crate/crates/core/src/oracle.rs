//! Independent eigenvalue oracle: Numerov integration of
//! `psi'' + (E - V) psi = 0` with Dirichlet ends, levels located by node
//! counting. Uses nothing but `V(x)` and the shape of its domain.
//!
//! Near a `c/x^2` wall the wavefunction behaves like `x^s` and a uniform
//! grid loses accuracy. Half-line and finite domains are therefore swept
//! in a stretched coordinate `x = g(t)` with `psi = sqrt(g') phi`, which
//! turns the equation into `phi'' + (g'^2 (E - V) - 1/4) phi = 0` for both
//! maps used here; `psi` and `phi` share their nodes.

use serde::Serialize;

use crate::catalog::PotentialSpec;
use crate::error::{Error, Result};

/// Coordinate in which the grid is uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Coordinates {
    /// Uniform in `x`.
    Uniform,
    /// Uniform in `t = ln x`, for `(0, inf)`.
    Logarithmic,
    /// Uniform in `t = ln((x - lo) / (hi - x))`, for finite boxes `(lo, hi)`.
    Logistic { lo: f64, hi: f64 },
}

/// Grid for the Numerov sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    /// Inset from hard walls and coordinate singularities.
    pub boundary_offset: f64,
    pub coordinates: Coordinates,
}

pub const DEFAULT_POINTS: usize = 20001;
pub const DEFAULT_OFFSET: f64 = 1e-6;

/// WKB decay `integral sqrt(V - E) dx` required beyond the outer turning
/// point before the box is closed.
pub const DECAY_ACTION: f64 = 25.0;

impl GridSpec {
    /// Grid uniform in `x`.
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        Self::with_coordinates(x_min, x_max, n_points, Coordinates::Uniform)
    }

    pub fn with_coordinates(
        x_min: f64,
        x_max: f64,
        n_points: usize,
        coordinates: Coordinates,
    ) -> Result<Self> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Range(format!("grid [{x_min}, {x_max}]")));
        }
        if n_points < 1001 || n_points.is_multiple_of(2) {
            return Err(Error::Range(format!("grid needs an odd count >= 1001, got {n_points}")));
        }
        let valid = match coordinates {
            Coordinates::Uniform => true,
            Coordinates::Logarithmic => x_min > 0.0,
            Coordinates::Logistic { lo, hi } => lo < x_min && x_max < hi,
        };
        if !valid {
            return Err(Error::Range(format!("grid [{x_min}, {x_max}] vs {coordinates:?}")));
        }
        Ok(Self { x_min, x_max, n_points, boundary_offset: DEFAULT_OFFSET, coordinates })
    }

    /// Same interval and coordinates with `n_points` points.
    pub fn with_points(&self, n_points: usize) -> Result<Self> {
        Self::with_coordinates(self.x_min, self.x_max, n_points, self.coordinates)
    }

    fn to_t(self, x: f64) -> f64 {
        match self.coordinates {
            Coordinates::Uniform => x,
            Coordinates::Logarithmic => x.ln(),
            Coordinates::Logistic { lo, hi } => ((x - lo) / (hi - x)).ln(),
        }
    }

    /// Step in the uniform coordinate.
    pub fn step(&self) -> f64 {
        (self.to_t(self.x_max) - self.to_t(self.x_min)) / (self.n_points - 1) as f64
    }

    /// `(x, g'(t)^2)` at node `i`.
    fn node(&self, i: usize) -> (f64, f64) {
        let t = self.to_t(self.x_min) + self.step() * i as f64;
        match self.coordinates {
            Coordinates::Uniform => (t, 1.0),
            Coordinates::Logarithmic => {
                let x = t.exp();
                (x, x * x)
            }
            Coordinates::Logistic { lo, hi } => {
                let sigma = 1.0 / (1.0 + (-t).exp());
                let d = (hi - lo) * sigma * (1.0 - sigma);
                (lo + (hi - lo) * sigma, d * d)
            }
        }
    }

    /// Constant term added by the change of variable.
    fn shift(&self) -> f64 {
        match self.coordinates {
            Coordinates::Uniform => 0.0,
            _ => 0.25,
        }
    }
}

/// A located eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenResult {
    pub energy: f64,
    pub node_count: usize,
    /// Normalized log-derivative mismatch at the matching point.
    pub match_residual: f64,
}

/// Walks outward from `start` until the decay integral reaches
/// [`DECAY_ACTION`]; `dir` is +1 or -1.
fn decay_edge(spec: &PotentialSpec, energy: f64, start: f64, dir: f64, scale: f64) -> Result<f64> {
    let (lo, hi) = spec.domain();
    let cap = 1e4 * scale;
    let mut step = scale / 400.0;
    let mut x = start;
    let mut decay = 0.0;
    let excess = |x: f64| (spec.potential_unchecked(x) - energy).max(0.0).sqrt();
    let mut prev = excess(x);
    while decay < DECAY_ACTION {
        let next = x + dir * step;
        if (next - start).abs() > cap || next <= lo || next >= hi {
            return Err(Error::Domain { x: next, lo, hi });
        }
        let cur = excess(next);
        decay += 0.5 * (prev + cur) * step;
        prev = cur;
        x = next;
        step *= 1.01;
    }
    Ok(x)
}

/// Box for the sweep at energies near `energy_hint`.
///
/// Finite intervals are inset by the boundary offset. Infinite edges are
/// placed where the WKB decay beyond the outer turning point reaches
/// [`DECAY_ACTION`], which keeps the box error far below the grid error
/// even when the hint sits close to a finite threshold.
pub fn default_domain(spec: &PotentialSpec, energy_hint: f64) -> Result<GridSpec> {
    let (lo, hi) = spec.domain();
    let (w_lo, w_hi) = spec.natural_window();
    let scale = w_hi - w_lo;
    // start the outward walk from the bottom of the well
    let x_bottom = spec
        .sample_points(2000)
        .into_iter()
        .min_by(|a, b| spec.potential_unchecked(*a).total_cmp(&spec.potential_unchecked(*b)))
        .expect("non-empty sample");
    let x_min = if lo.is_finite() {
        lo + DEFAULT_OFFSET
    } else {
        decay_edge(spec, energy_hint, x_bottom, -1.0, scale)?
    };
    let x_max = if hi.is_finite() {
        hi - DEFAULT_OFFSET
    } else {
        decay_edge(spec, energy_hint, x_bottom, 1.0, scale)?
    };
    let coordinates = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => Coordinates::Logistic { lo, hi },
        (true, false) if lo == 0.0 => Coordinates::Logarithmic,
        _ => Coordinates::Uniform,
    };
    GridSpec::with_coordinates(x_min, x_max, DEFAULT_POINTS, coordinates)
}

/// Potential and metric sampled on the grid.
struct Profile {
    step: f64,
    shift: f64,
    potential: Vec<f64>,
    metric: Vec<f64>,
}

impl Profile {
    fn new(spec: &PotentialSpec, grid: GridSpec) -> Result<Self> {
        let mut potential = Vec::with_capacity(grid.n_points);
        let mut metric = Vec::with_capacity(grid.n_points);
        for i in 0..grid.n_points {
            let (x, g2) = grid.node(i);
            let v = spec.potential_unchecked(x);
            if v.is_nan() {
                return Err(Error::NonFiniteSample(x));
            }
            potential.push(v);
            metric.push(g2);
        }
        Ok(Self { step: grid.step(), shift: grid.shift(), potential, metric })
    }

    /// Numerov factors `h^2 (g'^2 (E - V) - shift) / 12`.
    fn factors(&self, energy: f64) -> Vec<f64> {
        let h2 = self.step * self.step / 12.0;
        self.potential
            .iter()
            .zip(&self.metric)
            .map(|(v, g2)| h2 * (g2 * (energy - v) - self.shift))
            .collect()
    }

    /// First and last indices where the recursion is well conditioned;
    /// closer to a singular wall the wavefunction is treated as zero.
    fn window(f: &[f64]) -> Result<(usize, usize)> {
        let ok = |t: &f64| t.abs() < 0.5;
        let first = f.iter().position(ok);
        let last = f.iter().rposition(ok);
        match (first, last) {
            (Some(s), Some(r)) if r > s + 4 => Ok((s, r)),
            _ => Err(Error::NoConvergence("grid too coarse for the potential".into())),
        }
    }
}

/// Numerov recursion over `indices`, starting from zero and a tiny value.
/// Returns the values (renormalized as needed) and the sign changes seen.
fn integrate(f: &[f64], indices: impl Iterator<Item = usize> + Clone) -> (Vec<(usize, f64)>, usize) {
    let idx: Vec<usize> = indices.collect();
    let mut out = Vec::with_capacity(idx.len());
    let mut prev = 0.0;
    let mut cur = 1e-20;
    out.push((idx[0], prev));
    out.push((idx[1], cur));
    let mut nodes = 0;
    for w in idx.windows(3) {
        let (i0, i1, i2) = (w[0], w[1], w[2]);
        let mut next = (2.0 * (1.0 - 5.0 * f[i1]) * cur - (1.0 + f[i0]) * prev) / (1.0 + f[i2]);
        if next.abs() > 1e100 {
            let s = 1e-100;
            next *= s;
            cur *= s;
            for (_, v) in out.iter_mut() {
                *v *= s;
            }
        }
        if (cur > 0.0 && next < 0.0) || (cur < 0.0 && next > 0.0) {
            nodes += 1;
        }
        prev = cur;
        cur = next;
        out.push((i2, next));
    }
    (out, nodes)
}

/// Number of eigenvalues of the boxed problem below `energy`.
fn sturm_count(profile: &Profile, energy: f64) -> Result<usize> {
    let f = profile.factors(energy);
    let (s, r) = Profile::window(&f)?;
    let (_, nodes) = integrate(&f, s..=r);
    Ok(nodes)
}

fn sweep(profile: &Profile, energy: f64) -> Result<(usize, f64)> {
    let f = profile.factors(energy);
    let (s, r) = Profile::window(&f)?;
    // match at the outermost classically allowed point
    let m = (s..=r)
        .rev()
        .find(|&i| f[i] >= 0.0)
        .unwrap_or_else(|| (s..=r).max_by(|a, b| f[*a].total_cmp(&f[*b])).unwrap())
        .clamp(s + 2, r - 2);
    let (left, _) = integrate(&f, s..=m + 1);
    let (right, _) = integrate(&f, (m - 1..=r).rev());
    let at = |vals: &[(usize, f64)], i: usize| vals.iter().find(|(j, _)| *j == i).unwrap().1;
    let h = profile.step;
    let (l_prev, l_mid, l_next) = (at(&left, m - 1), at(&left, m), at(&left, m + 1));
    let (r_prev, r_mid, r_next) = (at(&right, m - 1), at(&right, m), at(&right, m + 1));
    let d_left = (l_next - l_prev) / (2.0 * h * l_mid);
    let d_right = (r_next - r_prev) / (2.0 * h * r_mid);
    let residual = (d_left - d_right).abs() / (1.0 + d_left.abs() + d_right.abs());

    // nodes of the stitched solution, right branch scaled to agree at m
    let scale = l_mid / r_mid;
    let mut nodes = 0;
    let mut last = 0.0;
    let stitched = left
        .iter()
        .filter(|(i, _)| *i <= m)
        .map(|(_, v)| *v)
        .chain(right.iter().rev().filter(|(i, _)| *i > m).map(|(_, v)| v * scale));
    for v in stitched {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                nodes += 1;
            }
            last = v;
        }
    }
    Ok((nodes, residual))
}

/// Integrates inward from both ends at fixed `energy`, matching at the
/// outermost classical turning point.
///
/// Returns the node count of the stitched solution and the normalized
/// log-derivative mismatch, which vanishes at an eigenvalue.
pub fn numerov_sweep(spec: &PotentialSpec, energy: f64, grid: &GridSpec) -> Result<(usize, f64)> {
    sweep(&Profile::new(spec, *grid)?, energy)
}

/// Level `n` on `grid` by bisection on the node count, to relative
/// tolerance `tol`.
pub fn solve_eigenvalue(
    spec: &PotentialSpec,
    n: usize,
    grid: &GridSpec,
    tol: f64,
) -> Result<EigenResult> {
    if !spec.level_count().contains(n) {
        return Err(Error::Unbound(n));
    }
    if !(tol >= 1e-14) {
        return Err(Error::Range(format!("tolerance {tol}")));
    }
    let profile = Profile::new(spec, *grid)?;
    let mut lo = profile.potential.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = spec.threshold();
    let mut hi = if threshold.is_finite() { threshold } else { lo + 1.0 };
    let mut expansions = 0;
    while sturm_count(&profile, hi)? <= n {
        if threshold.is_finite() || expansions > 200 {
            return Err(Error::NoConvergence(format!("level {n} not bracketed below {hi}")));
        }
        hi = lo + 2.0 * (hi - lo);
        expansions += 1;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) {
            break;
        }
        if sturm_count(&profile, mid)? > n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let energy = 0.5 * (lo + hi);
    let (node_count, match_residual) = sweep(&profile, energy)?;
    Ok(EigenResult { energy, node_count, match_residual })
}
