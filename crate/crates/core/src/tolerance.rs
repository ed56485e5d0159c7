//! Pass/fail thresholds for the verification checks.

use std::env;

use serde::Serialize;

/// Thresholds used by reports and verification suites.
///
/// Every field can be overridden through an environment variable named
/// `SWKB_TOL_` followed by the upper-cased field name, e.g.
/// `SWKB_TOL_ORACLE_REL=1e-4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Solved level vs closed form, relative to `1 + |E|`.
    pub spectrum_rel: f64,
    /// Equivalence residual, absolute.
    pub equivalence: f64,
    /// Spread of `I_pq(E_n) - n pi` over a spectrum.
    pub gamma_stdev: f64,
    /// Mean of `I_pq(E_n) - n pi` vs the closed-form ground offset.
    pub gamma_mean: f64,
    /// Moment formulas vs quadrature, absolute.
    pub moment: f64,
    /// Riccati and reconstruction residuals, absolute.
    pub riccati: f64,
    /// `I_swkb(E_n) - n pi`, absolute.
    pub swkb_action: f64,
    /// Closed form vs quadrature for either action, absolute.
    pub action_agreement: f64,
    /// Numerov oracle vs closed form, relative to `1 + |E|`.
    pub oracle_rel: f64,
    /// Minimum error reduction when the oracle grid spacing is halved.
    pub oracle_refinement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spectrum_rel: 1e-8,
            equivalence: 1e-8,
            gamma_stdev: 1e-9,
            gamma_mean: 1e-8,
            moment: 1e-10,
            riccati: 1e-10,
            swkb_action: 1e-9,
            action_agreement: 1e-8,
            oracle_rel: 1e-5,
            oracle_refinement: 8.0,
        }
    }
}

impl Tolerances {
    /// Defaults with any `SWKB_TOL_*` overrides applied.
    pub fn from_env() -> Self {
        Self::default().with_overrides(|name| env::var(name).ok())
    }

    /// Applies overrides from `lookup`, which maps a variable name to its value.
    /// Unparsable values are ignored.
    pub fn with_overrides<F>(mut self, lookup: F) -> Self
    where
        F: Fn(&str) -> Option<String>,
    {
        let fields: [(&str, &mut f64); 10] = [
            ("SPECTRUM_REL", &mut self.spectrum_rel),
            ("EQUIVALENCE", &mut self.equivalence),
            ("GAMMA_STDEV", &mut self.gamma_stdev),
            ("GAMMA_MEAN", &mut self.gamma_mean),
            ("MOMENT", &mut self.moment),
            ("RICCATI", &mut self.riccati),
            ("SWKB_ACTION", &mut self.swkb_action),
            ("ACTION_AGREEMENT", &mut self.action_agreement),
            ("ORACLE_REL", &mut self.oracle_rel),
            ("ORACLE_REFINEMENT", &mut self.oracle_refinement),
        ];
        for (suffix, slot) in fields {
            let parsed = lookup(&format!("SWKB_TOL_{suffix}")).and_then(|v| v.trim().parse().ok());
            if let Some(v) = parsed.filter(|v: &f64| v.is_finite() && *v > 0.0) {
                *slot = v;
            }
        }
        self
    }
}
