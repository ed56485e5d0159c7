//! Self-checks run by the command-line `verify` command.
//!
//! Each check reduces to a maximum residual compared against one of the
//! [`Tolerances`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{canonical_potential, MapSign, PotentialSpec};
use crate::error::Result;
use crate::numerics::integrate_double_exponential;
use crate::oracle::{default_domain, solve_eigenvalue};
use crate::quantization::{
    action, equivalence_residual, moment_integral_first, moment_integral_second, pq_ground_closed,
    Method, Rule,
};
use crate::solver::{solve_level_pq, solve_level_swkb, MAX_REPORT_LEVELS};
use crate::tolerance::Tolerances;

/// Points per Riccati / reconstruction grid.
pub const RICCATI_POINTS: usize = 200;
/// Energies per equivalence grid.
pub const EQUIVALENCE_ENERGIES: usize = 20;
/// Level used as the top of the energy grid when the spectrum is unbounded.
const UNBOUNDED_GRID_LEVEL: usize = 10;
/// Point counts of the coarse and fine grids in the refinement check.
const REFINEMENT_POINTS: (usize, usize) = (2001, 4001);

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Largest residual seen (for `oracle-refinement`, the smallest gain).
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn below(name: &str, worst: f64, tolerance: f64, samples: usize, detail: String) -> Self {
        Self { name: name.into(), worst, tolerance, samples, passed: worst < tolerance, detail }
    }

    fn failed(name: &str, tolerance: f64, detail: String) -> Self {
        Self { name: name.into(), worst: f64::NAN, tolerance, samples: 0, passed: false, detail }
    }
}

fn fold_max(acc: f64, v: f64) -> f64 {
    // NaN poisons the maximum so that it can never pass
    if v.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

/// `count` energies evenly inside `(E0, E_top)`, where `E_top` is the
/// threshold, or a fixed excited level for unbounded spectra.
pub fn energy_grid(spec: &PotentialSpec, count: usize) -> Result<Vec<f64>> {
    let e0 = spec.ground_state_energy()?;
    let threshold = spec.threshold();
    let top = if threshold.is_finite() {
        threshold
    } else {
        spec.closed_form_level(UNBOUNDED_GRID_LEVEL)?
    };
    let parts = (count + 1) as f64;
    Ok((1..=count).map(|k| e0 + (top - e0) * k as f64 / parts).collect())
}

/// Bound levels used by the per-level checks.
fn levels(spec: &PotentialSpec) -> usize {
    spec.level_count().capped(MAX_REPORT_LEVELS)
}

/// `max |I_swkb(E) - I_pq(E) + I_pq(E0)|` over the energy grid.
pub fn check_equivalence(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "equivalence";
    let run = || -> Result<CheckResult> {
        let grid = energy_grid(spec, EQUIVALENCE_ENERGIES)?;
        let mut worst = 0.0;
        for &e in &grid {
            worst = fold_max(worst, equivalence_residual(spec, e)?.abs());
        }
        Ok(CheckResult::below(name, worst, tol.equivalence, grid.len(), String::new()))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.equivalence, e.to_string()))
}

/// Closed-form, canonical and raw-quadrature actions agree on the energy grid.
pub fn check_action_methods(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "action-methods";
    let run = || -> Result<CheckResult> {
        let grid = energy_grid(spec, EQUIVALENCE_ENERGIES)?;
        let mut worst = 0.0;
        let mut samples = 0;
        for &e in &grid {
            for rule in [Rule::Swkb, Rule::Proper] {
                let closed = action(spec, e, rule, Method::ClosedForm)?.value;
                let raw = action(spec, e, rule, Method::RawQuadrature)?.value;
                worst = fold_max(worst, (closed - raw).abs());
                // unsupported for a few degenerate maps; those are covered by raw
                if let Ok(canon) = action(spec, e, rule, Method::CanonicalQuadrature) {
                    worst = fold_max(worst, (closed - canon.value).abs());
                }
                samples += 1;
            }
        }
        Ok(CheckResult::below(name, worst, tol.action_agreement, samples, String::new()))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.action_agreement, e.to_string()))
}

/// `max |W^2 - W' - (V - E0)|` and `max |V - V_canonical(y(x))|` on
/// [`RICCATI_POINTS`] points.
pub fn check_riccati(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "riccati";
    let run = || -> Result<CheckResult> {
        let form = spec.canonical_form()?;
        let points = spec.sample_points(RICCATI_POINTS);
        let mut riccati: f64 = 0.0;
        let mut rebuilt: f64 = 0.0;
        for &x in &points {
            riccati = fold_max(riccati, spec.riccati_residual(x)?.abs());
            let (y, _) = spec.variable_map(x)?;
            rebuilt = fold_max(rebuilt, (spec.potential(x)? - canonical_potential(&form, y)).abs());
        }
        let detail = format!("riccati {riccati:.3e}, reconstruction {rebuilt:.3e}");
        Ok(CheckResult::below(name, fold_max(riccati, rebuilt), tol.riccati, points.len(), detail))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.riccati, e.to_string()))
}

/// Offsets `I_pq(E_n) - n pi` over the bound levels, by raw quadrature.
pub fn ground_offsets(spec: &PotentialSpec) -> Result<Vec<f64>> {
    (0..levels(spec))
        .map(|n| {
            let e = spec.closed_form_level(n)?;
            Ok(action(spec, e, Rule::Proper, Method::RawQuadrature)?.value - n as f64 * PI)
        })
        .collect()
}

/// Population standard deviation and mean.
pub fn spread(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
    (var.sqrt(), mean)
}

/// Offsets are constant over the spectrum and equal the closed-form value.
pub fn check_gamma(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "gamma";
    let run = || -> Result<CheckResult> {
        let offsets = ground_offsets(spec)?;
        let closed = pq_ground_closed(spec)?;
        let (stdev, mean) = spread(&offsets);
        let mean_err = (mean - closed).abs();
        let passed = stdev < tol.gamma_stdev && mean_err < tol.gamma_mean;
        Ok(CheckResult {
            name: name.into(),
            worst: fold_max(stdev, mean_err),
            tolerance: tol.gamma_stdev,
            samples: offsets.len(),
            passed,
            detail: format!("stdev {stdev:.3e}, mean {mean:.12} vs closed {closed:.12}"),
        })
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.gamma_stdev, e.to_string()))
}

/// `max |I_swkb(E_n) - n pi|` over the bound levels, by raw quadrature.
pub fn check_swkb_quantization(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "swkb-quantization";
    let run = || -> Result<CheckResult> {
        let count = levels(spec);
        let mut worst = 0.0;
        for n in 0..count {
            let e = spec.closed_form_level(n)?;
            let value = action(spec, e, Rule::Swkb, Method::RawQuadrature)?.value;
            worst = fold_max(worst, (value - n as f64 * PI).abs());
        }
        Ok(CheckResult::below(name, worst, tol.swkb_action, count, String::new()))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.swkb_action, e.to_string()))
}

/// Levels solved from both rules vs the closed forms, relative to `1 + |E|`.
pub fn check_spectrum(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "spectrum";
    let run = || -> Result<CheckResult> {
        let count = levels(spec);
        let mut worst = 0.0;
        for n in 0..count {
            let e = spec.closed_form_level(n)?;
            let scale = 1.0 + e.abs();
            worst = fold_max(worst, (solve_level_swkb(spec, n)? - e).abs() / scale);
            worst = fold_max(worst, (solve_level_pq(spec, n)? - e).abs() / scale);
        }
        Ok(CheckResult::below(name, worst, tol.spectrum_rel, count, String::new()))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.spectrum_rel, e.to_string()))
}

/// Numerov levels on the default grid vs the closed forms, relative to `1 + |E|`.
pub fn check_oracle(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "oracle";
    let run = || -> Result<CheckResult> {
        let count = levels(spec);
        let mut worst = 0.0;
        for n in 0..count {
            let e = spec.closed_form_level(n)?;
            let grid = default_domain(spec, e)?;
            let found = solve_eigenvalue(spec, n, &grid, 1e-13)?;
            let mut err = (found.energy - e).abs() / (1.0 + e.abs());
            if found.node_count != n {
                err = f64::NAN;
            }
            worst = fold_max(worst, err);
        }
        Ok(CheckResult::below(name, worst, tol.oracle_rel, count, String::new()))
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.oracle_rel, e.to_string()))
}

/// Error reduction of the oracle when the grid spacing is halved, for the
/// lowest three levels; `worst` is the smallest gain.
pub fn check_oracle_refinement(spec: &PotentialSpec, tol: &Tolerances) -> CheckResult {
    let name = "oracle-refinement";
    let run = || -> Result<CheckResult> {
        let count = levels(spec).min(3);
        let mut gain = f64::INFINITY;
        for n in 0..count {
            let e = spec.closed_form_level(n)?;
            let base = default_domain(spec, e)?;
            let err = |points: usize| -> Result<f64> {
                let grid = base.with_points(points)?;
                Ok((solve_eigenvalue(spec, n, &grid, 1e-14)?.energy - e).abs())
            };
            let ratio = err(REFINEMENT_POINTS.0)? / err(REFINEMENT_POINTS.1)?;
            gain = if ratio.is_nan() { f64::NAN } else { gain.min(ratio) };
        }
        Ok(CheckResult {
            name: name.into(),
            worst: gain,
            tolerance: tol.oracle_refinement,
            samples: count,
            passed: gain >= tol.oracle_refinement,
            detail: format!("{} -> {} points", REFINEMENT_POINTS.0, REFINEMENT_POINTS.1),
        })
    };
    run().unwrap_or_else(|e| CheckResult::failed(name, tol.oracle_refinement, e.to_string()))
}

/// Every per-potential check, in a fixed order.
pub fn verify_potential(spec: &PotentialSpec, tol: &Tolerances, oracle: bool) -> Vec<CheckResult> {
    let mut out = vec![
        check_riccati(spec, tol),
        check_spectrum(spec, tol),
        check_equivalence(spec, tol),
        check_action_methods(spec, tol),
        check_gamma(spec, tol),
        check_swkb_quantization(spec, tol),
    ];
    if oracle {
        out.push(check_oracle(spec, tol));
        out.push(check_oracle_refinement(spec, tol));
    }
    out
}

/// The four moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentFormula {
    FirstPlus,
    FirstMinus,
    SecondPlus,
    SecondMinus,
}

impl MomentFormula {
    pub const ALL: [MomentFormula; 4] = [
        MomentFormula::FirstPlus,
        MomentFormula::FirstMinus,
        MomentFormula::SecondPlus,
        MomentFormula::SecondMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MomentFormula::FirstPlus => "first-plus",
            MomentFormula::FirstMinus => "first-minus",
            MomentFormula::SecondPlus => "second-plus",
            MomentFormula::SecondMinus => "second-minus",
        }
    }

    /// Closed form on `[lo, hi]`.
    pub fn closed(self, lo: f64, hi: f64) -> Result<f64> {
        match self {
            MomentFormula::FirstPlus => moment_integral_first(lo, hi, MapSign::Plus),
            MomentFormula::FirstMinus => moment_integral_first(lo, hi, MapSign::Minus),
            MomentFormula::SecondPlus => moment_integral_second(lo, hi, MapSign::Plus),
            MomentFormula::SecondMinus => moment_integral_second(lo, hi, MapSign::Minus),
        }
    }

    /// The weight multiplying `sqrt((hi - u)(u - lo))`.
    pub fn weight(self, u: f64) -> f64 {
        match self {
            MomentFormula::FirstPlus => 1.0 / (1.0 + u * u),
            MomentFormula::FirstMinus => 1.0 / (1.0 - u * u),
            MomentFormula::SecondPlus => 1.0 / (u * (1.0 + u)),
            MomentFormula::SecondMinus => 1.0 / (u * (1.0 - u)),
        }
    }

    /// A random ordered pair inside the validity region.
    pub fn draw<R: Rng>(self, rng: &mut R) -> (f64, f64) {
        let (lo, hi): (f64, f64) = match self {
            MomentFormula::FirstPlus => (-5.0, 5.0),
            MomentFormula::FirstMinus => (-0.99, 0.99),
            MomentFormula::SecondPlus => (0.01, 5.0),
            MomentFormula::SecondMinus => (0.01, 0.99),
        };
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        (a.min(b), a.max(b))
    }
}

/// Moment formulas vs tanh-sinh quadrature on `per_formula` seeded random
/// pairs each.
pub fn check_moments(per_formula: usize, seed: u64, tol: &Tolerances) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MomentFormula::ALL
        .iter()
        .map(|&formula| {
            let name = format!("moment-{}", formula.name());
            let mut worst: f64 = 0.0;
            let mut detail = String::new();
            for _ in 0..per_formula {
                let (lo, hi) = formula.draw(&mut rng);
                let integrand = |u: f64| ((hi - u) * (u - lo)).max(0.0).sqrt() * formula.weight(u);
                let diff = formula.closed(lo, hi).and_then(|closed| {
                    integrate_double_exponential(integrand, lo, hi, 1e-13).map(|q| (closed - q.value).abs())
                });
                match diff {
                    Ok(d) => {
                        if d > worst {
                            detail = format!("worst at [{lo}, {hi}]");
                        }
                        worst = fold_max(worst, d);
                    }
                    Err(e) => {
                        worst = f64::NAN;
                        detail = format!("[{lo}, {hi}]: {e}");
                        break;
                    }
                }
            }
            CheckResult::below(&name, worst, tol.moment, per_formula, detail)
        })
        .collect()
}
