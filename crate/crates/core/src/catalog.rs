//! The primary translationally shape-invariant potentials.
//!
//! Every potential is normalized so that its ground state sits at zero
//! energy (except the two generic entries, which carry raw canonical
//! coefficients). Units are hbar = 2m = 1 throughout.
//!
//! A potential of the first family reduces to `l2*y^2 + l1*y + l0` and one of
//! the second family to `l2*y^2 + mu2/y^2 + l0` under a change of variable
//! with `y'(x) = alpha*(1 +/- y^2)`. The superpotential is then `a*y + b` or
//! `a*y - b/y`. Harmonic, Morse, Kepler-Coulomb and isotonic are the
//! exceptional members and carry their own closed forms.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Identifier of a catalog potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialId {
    RosenMorseI,
    RosenMorseII,
    Eckart,
    PoschlTeller,
    PoschlTellerI,
    PoschlTellerII,
    ScarfI,
    Harmonic,
    Morse,
    KeplerCoulomb,
    Isotonic,
    GenericFirst,
    GenericSecond,
}

/// The two families of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    First,
    Second,
}

/// The sign in `y' = alpha*(1 +/- y^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapSign {
    Plus,
    Minus,
}

impl MapSign {
    pub fn value(self) -> f64 {
        match self {
            MapSign::Plus => 1.0,
            MapSign::Minus => -1.0,
        }
    }
}

impl PotentialId {
    /// The eleven named potentials, in listing order.
    pub const CATALOG: [PotentialId; 11] = [
        PotentialId::RosenMorseI,
        PotentialId::RosenMorseII,
        PotentialId::Eckart,
        PotentialId::PoschlTeller,
        PotentialId::PoschlTellerI,
        PotentialId::PoschlTellerII,
        PotentialId::ScarfI,
        PotentialId::Harmonic,
        PotentialId::Morse,
        PotentialId::KeplerCoulomb,
        PotentialId::Isotonic,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            PotentialId::RosenMorseI => "rosen-morse-1",
            PotentialId::RosenMorseII => "rosen-morse-2",
            PotentialId::Eckart => "eckart",
            PotentialId::PoschlTeller => "poschl-teller",
            PotentialId::PoschlTellerI => "poschl-teller-1",
            PotentialId::PoschlTellerII => "poschl-teller-2",
            PotentialId::ScarfI => "scarf-1",
            PotentialId::Harmonic => "harmonic",
            PotentialId::Morse => "morse",
            PotentialId::KeplerCoulomb => "kepler-coulomb",
            PotentialId::Isotonic => "isotonic",
            PotentialId::GenericFirst => "generic-first",
            PotentialId::GenericSecond => "generic-second",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            PotentialId::RosenMorseI => "Rosen-Morse I",
            PotentialId::RosenMorseII => "Rosen-Morse II",
            PotentialId::Eckart => "Eckart",
            PotentialId::PoschlTeller => "Poschl-Teller",
            PotentialId::PoschlTellerI => "Poschl-Teller I",
            PotentialId::PoschlTellerII => "Poschl-Teller II",
            PotentialId::ScarfI => "Scarf I",
            PotentialId::Harmonic => "harmonic oscillator",
            PotentialId::Morse => "Morse",
            PotentialId::KeplerCoulomb => "Kepler-Coulomb",
            PotentialId::Isotonic => "isotonic oscillator",
            PotentialId::GenericFirst => "generic (first family)",
            PotentialId::GenericSecond => "generic (second family)",
        }
    }

    pub fn family(self) -> Family {
        match self {
            PotentialId::RosenMorseI
            | PotentialId::RosenMorseII
            | PotentialId::Eckart
            | PotentialId::Harmonic
            | PotentialId::Morse
            | PotentialId::KeplerCoulomb
            | PotentialId::GenericFirst => Family::First,
            PotentialId::PoschlTeller
            | PotentialId::PoschlTellerI
            | PotentialId::PoschlTellerII
            | PotentialId::ScarfI
            | PotentialId::Isotonic
            | PotentialId::GenericSecond => Family::Second,
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(
            self,
            PotentialId::Harmonic
                | PotentialId::Morse
                | PotentialId::KeplerCoulomb
                | PotentialId::Isotonic
        )
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            PotentialId::Harmonic => &["omega"],
            PotentialId::Isotonic => &["omega", "l"],
            PotentialId::KeplerCoulomb => &["g", "l"],
            PotentialId::GenericFirst => &["lambda2", "lambda1", "lambda0", "alpha", "sign"],
            PotentialId::GenericSecond => &["lambda2", "mu2", "lambda0", "alpha", "sign"],
            _ => &["A", "B", "alpha"],
        }
    }

    /// Human-readable parameter constraints checked at construction.
    pub fn constraints(self) -> &'static str {
        match self {
            PotentialId::RosenMorseI => "alpha>0, A>alpha/2",
            PotentialId::RosenMorseII => "alpha>0, A>0, 0<B<A^2",
            PotentialId::Eckart => "alpha>0, A>0, B>A^2",
            PotentialId::PoschlTeller => "alpha>0, B>A>0",
            PotentialId::PoschlTellerI => "alpha>0, A>alpha, B>alpha",
            PotentialId::PoschlTellerII => "alpha>0, 0<B<A",
            PotentialId::ScarfI => "alpha>0, 0<B<A",
            PotentialId::Harmonic => "omega>0",
            PotentialId::Morse => "A>0, B>0, alpha>0",
            PotentialId::KeplerCoulomb => "g>0, l>=0",
            PotentialId::Isotonic => "omega>0, l>=0",
            PotentialId::GenericFirst => "lambda2>0, alpha>0, sign=+1|-1",
            PotentialId::GenericSecond => "lambda2>0, mu2>0, alpha>0, sign=+1|-1",
        }
    }

    /// Closed-form spectrum, written out.
    pub fn spectrum_formula(self) -> &'static str {
        match self {
            PotentialId::RosenMorseI => "E_n = -A^2 + B^2/A^2 + (A+alpha n)^2 - B^2/(A+alpha n)^2",
            PotentialId::RosenMorseII => "E_n = A^2 + B^2/A^2 - (A-alpha n)^2 - B^2/(A-alpha n)^2",
            PotentialId::Eckart => "E_n = A^2 + B^2/A^2 - (A+alpha n)^2 - B^2/(A+alpha n)^2",
            PotentialId::PoschlTeller => "E_n = A^2 - (alpha n - A)^2",
            PotentialId::PoschlTellerI => "E_n = -(A+B)^2 + (2 alpha n + A + B)^2",
            PotentialId::PoschlTellerII => "E_n = (B-A)^2 - (2 alpha n + B - A)^2",
            PotentialId::ScarfI => "E_n = -A^2 + (A + alpha n)^2",
            PotentialId::Harmonic => "E_n = n omega",
            PotentialId::Morse => "E_n = A^2 - (A - alpha n)^2",
            PotentialId::KeplerCoulomb => "E_n = g^2/4 [1/(l+1)^2 - 1/(n+l+1)^2]",
            PotentialId::Isotonic => "E_n = 2 n omega",
            PotentialId::GenericFirst => {
                "E_n = -+a^2 + alpha a + l0 +- (a +- alpha n)^2 - l1^2/(4 (a +- alpha n)^2)"
            }
            PotentialId::GenericSecond => "E_n = l0 -+ (mu2 + l2) +- (2 alpha n +- a + b)^2",
        }
    }
}

impl fmt::Display for PotentialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for PotentialId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let id = match key.as_str() {
            "rosenmorse1" | "rosenmorsei" | "rm1" => PotentialId::RosenMorseI,
            "rosenmorse2" | "rosenmorseii" | "rm2" => PotentialId::RosenMorseII,
            "eckart" => PotentialId::Eckart,
            "poschlteller" | "pt" => PotentialId::PoschlTeller,
            "poschlteller1" | "poschltelleri" | "pt1" => PotentialId::PoschlTellerI,
            "poschlteller2" | "poschltellerii" | "pt2" => PotentialId::PoschlTellerII,
            "scarf1" | "scarfi" | "scarf" => PotentialId::ScarfI,
            "harmonic" => PotentialId::Harmonic,
            "morse" => PotentialId::Morse,
            "keplercoulomb" | "coulomb" => PotentialId::KeplerCoulomb,
            "isotonic" => PotentialId::Isotonic,
            "genericfirst" => PotentialId::GenericFirst,
            "genericsecond" => PotentialId::GenericSecond,
            _ => return Err(Error::Param(format!("unknown potential '{s}'"))),
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    RosenMorseI { a: f64, b: f64, alpha: f64 },
    RosenMorseII { a: f64, b: f64, alpha: f64 },
    Eckart { a: f64, b: f64, alpha: f64 },
    PoschlTeller { a: f64, b: f64, alpha: f64 },
    PoschlTellerI { a: f64, b: f64, alpha: f64 },
    PoschlTellerII { a: f64, b: f64, alpha: f64 },
    ScarfI { a: f64, b: f64, alpha: f64 },
    Harmonic { omega: f64 },
    Morse { a: f64, b: f64, alpha: f64 },
    KeplerCoulomb { g: f64, l: f64 },
    Isotonic { omega: f64, l: f64 },
    GenericFirst { lambda2: f64, lambda1: f64, lambda0: f64, alpha: f64, sign: MapSign },
    GenericSecond { lambda2: f64, mu2: f64, lambda0: f64, alpha: f64, sign: MapSign },
}

/// A validated potential: identifier plus physical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    shape: Shape,
}

/// Canonical reduction of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CanonicalForm {
    /// `V = l2 y^2 + l1 y + l0`, `y' = alpha (1 +/- y^2)`.
    ///
    /// `alpha` is negative for Eckart, whose map `y = -coth(alpha x)` only
    /// fits the pattern after flipping the sign of alpha.
    First { lambda2: f64, lambda1: f64, lambda0: f64, alpha: f64, sign: MapSign },
    /// `V = l2 y^2 + mu2 / y^2 + l0`, `y' = alpha (1 +/- y^2)`.
    Second { lambda2: f64, mu2: f64, lambda0: f64, alpha: f64, sign: MapSign },
    Harmonic { omega: f64 },
    /// `W = a - b e^{-alpha x}` in the listing's A, B notation: `a = A`, `b = B`.
    Morse { a: f64, b: f64, alpha: f64 },
    /// `W = -a/x + b`.
    Coulomb { a: f64, b: f64 },
    /// `W = a x - b/x`.
    Isotonic { a: f64, b: f64 },
}

/// Superpotential coefficients `(a, b)`.
///
/// First family: `W = a y + b`; second family: `W = a y - b/y`. For the
/// exceptional potentials the pair follows the forms documented on
/// [`CanonicalForm`]; harmonic uses `W = a x` with `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperpotentialCoeffs {
    pub a: f64,
    pub b: f64,
}

/// One level of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub n: usize,
    pub energy: f64,
    pub shifted_energy: f64,
}

/// Number of bound states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LevelCount {
    Finite(usize),
    Unbounded,
}

impl LevelCount {
    pub fn contains(self, n: usize) -> bool {
        match self {
            LevelCount::Finite(c) => n < c,
            LevelCount::Unbounded => true,
        }
    }

    /// Levels `0..capped(cap)` are bound, never more than `cap`.
    pub fn capped(self, cap: usize) -> usize {
        match self {
            LevelCount::Finite(c) => c.min(cap),
            LevelCount::Unbounded => cap,
        }
    }
}

impl fmt::Display for LevelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelCount::Finite(c) => write!(f, "{c}"),
            LevelCount::Unbounded => f.write_str("unbounded"),
        }
    }
}

fn require(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Param(format!("{msg} violated")))
    }
}

fn finite(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Param("parameters must be finite".into()))
    }
}

fn sign_from(v: f64) -> Result<MapSign> {
    if v == 1.0 {
        Ok(MapSign::Plus)
    } else if v == -1.0 {
        Ok(MapSign::Minus)
    } else {
        Err(Error::Param(format!("sign must be +1 or -1, got {v}")))
    }
}

impl PotentialSpec {
    pub fn rosen_morse_1(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(a > alpha / 2.0, "A>alpha/2")?;
        Ok(Self { shape: Shape::RosenMorseI { a, b, alpha } })
    }

    pub fn rosen_morse_2(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(a > 0.0, "A>0")?;
        require(b > 0.0, "B>0")?;
        require(b < a * a, "B<A^2")?;
        Ok(Self { shape: Shape::RosenMorseII { a, b, alpha } })
    }

    pub fn eckart(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(a > 0.0, "A>0")?;
        require(b > a * a, "B>A^2")?;
        Ok(Self { shape: Shape::Eckart { a, b, alpha } })
    }

    pub fn poschl_teller(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(a > 0.0, "A>0")?;
        require(b > a, "B>A")?;
        Ok(Self { shape: Shape::PoschlTeller { a, b, alpha } })
    }

    pub fn poschl_teller_1(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(a > alpha, "A>alpha")?;
        require(b > alpha, "B>alpha")?;
        Ok(Self { shape: Shape::PoschlTellerI { a, b, alpha } })
    }

    pub fn poschl_teller_2(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(b > 0.0, "B>0")?;
        require(b < a, "B<A")?;
        Ok(Self { shape: Shape::PoschlTellerII { a, b, alpha } })
    }

    pub fn scarf_1(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(alpha > 0.0, "alpha>0")?;
        require(b > 0.0, "B>0")?;
        require(b < a, "B<A")?;
        Ok(Self { shape: Shape::ScarfI { a, b, alpha } })
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        finite(&[omega])?;
        require(omega > 0.0, "omega>0")?;
        Ok(Self { shape: Shape::Harmonic { omega } })
    }

    pub fn morse(a: f64, b: f64, alpha: f64) -> Result<Self> {
        finite(&[a, b, alpha])?;
        require(a > 0.0, "A>0")?;
        require(b > 0.0, "B>0")?;
        require(alpha > 0.0, "alpha>0")?;
        Ok(Self { shape: Shape::Morse { a, b, alpha } })
    }

    /// Kepler-Coulomb with strength `g` (the `-g/x` coefficient) and angular momentum `l`.
    pub fn kepler_coulomb(g: f64, l: f64) -> Result<Self> {
        finite(&[g, l])?;
        require(g > 0.0, "g>0")?;
        require(l >= 0.0, "l>=0")?;
        Ok(Self { shape: Shape::KeplerCoulomb { g, l } })
    }

    pub fn isotonic(omega: f64, l: f64) -> Result<Self> {
        finite(&[omega, l])?;
        require(omega > 0.0, "omega>0")?;
        require(l >= 0.0, "l>=0")?;
        Ok(Self { shape: Shape::Isotonic { omega, l } })
    }

    /// First-family potential given directly by its canonical coefficients.
    ///
    /// Uses `y = -cot(alpha x)` on `(0, pi/alpha)` for `Plus` and
    /// `y = tanh(alpha x)` on the real line for `Minus`.
    pub fn generic_first(
        lambda2: f64,
        lambda1: f64,
        lambda0: f64,
        alpha: f64,
        sign: MapSign,
    ) -> Result<Self> {
        finite(&[lambda2, lambda1, lambda0, alpha])?;
        require(lambda2 > 0.0, "lambda2>0")?;
        require(alpha > 0.0, "alpha>0")?;
        Ok(Self {
            shape: Shape::GenericFirst { lambda2, lambda1, lambda0, alpha, sign },
        })
    }

    /// Second-family potential given directly by its canonical coefficients.
    ///
    /// Uses `y = tan(alpha x)` on `(0, pi/(2 alpha))` for `Plus` and
    /// `y = tanh(alpha x)` on the half-line for `Minus`.
    pub fn generic_second(
        lambda2: f64,
        mu2: f64,
        lambda0: f64,
        alpha: f64,
        sign: MapSign,
    ) -> Result<Self> {
        finite(&[lambda2, mu2, lambda0, alpha])?;
        require(lambda2 > 0.0, "lambda2>0")?;
        require(mu2 > 0.0, "mu2>0")?;
        require(alpha > 0.0, "alpha>0")?;
        Ok(Self {
            shape: Shape::GenericSecond { lambda2, mu2, lambda0, alpha, sign },
        })
    }

    /// Builds a spec from named parameters, e.g. `{"A": 2, "B": 0.5, "alpha": 1}`.
    pub fn from_params(id: PotentialId, params: &BTreeMap<String, f64>) -> Result<Self> {
        let names = id.param_names();
        if let Some(extra) = params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(Error::Param(format!(
                "unknown parameter '{extra}' for {id} (expected {})",
                names.join(", ")
            )));
        }
        let get = |name: &str| -> Result<f64> {
            params
                .get(name)
                .copied()
                .ok_or_else(|| Error::Param(format!("missing parameter '{name}' for {id}")))
        };
        match id {
            PotentialId::RosenMorseI => Self::rosen_morse_1(get("A")?, get("B")?, get("alpha")?),
            PotentialId::RosenMorseII => Self::rosen_morse_2(get("A")?, get("B")?, get("alpha")?),
            PotentialId::Eckart => Self::eckart(get("A")?, get("B")?, get("alpha")?),
            PotentialId::PoschlTeller => Self::poschl_teller(get("A")?, get("B")?, get("alpha")?),
            PotentialId::PoschlTellerI => {
                Self::poschl_teller_1(get("A")?, get("B")?, get("alpha")?)
            }
            PotentialId::PoschlTellerII => {
                Self::poschl_teller_2(get("A")?, get("B")?, get("alpha")?)
            }
            PotentialId::ScarfI => Self::scarf_1(get("A")?, get("B")?, get("alpha")?),
            PotentialId::Harmonic => Self::harmonic(get("omega")?),
            PotentialId::Morse => Self::morse(get("A")?, get("B")?, get("alpha")?),
            PotentialId::KeplerCoulomb => Self::kepler_coulomb(get("g")?, get("l")?),
            PotentialId::Isotonic => Self::isotonic(get("omega")?, get("l")?),
            PotentialId::GenericFirst => Self::generic_first(
                get("lambda2")?,
                get("lambda1")?,
                get("lambda0")?,
                get("alpha")?,
                sign_from(get("sign")?)?,
            ),
            PotentialId::GenericSecond => Self::generic_second(
                get("lambda2")?,
                get("mu2")?,
                get("lambda0")?,
                get("alpha")?,
                sign_from(get("sign")?)?,
            ),
        }
    }

    /// Reference parameter set used by the verification suites.
    ///
    /// Each finite spectrum has at least two bound levels and every
    /// canonical coefficient is strictly positive.
    pub fn reference(id: PotentialId) -> Self {
        let spec = match id {
            PotentialId::RosenMorseI => Self::rosen_morse_1(2.0, 1.0, 1.0),
            PotentialId::RosenMorseII => Self::rosen_morse_2(2.0, 0.5, 1.0),
            PotentialId::Eckart => Self::eckart(2.0, 20.0, 1.0),
            PotentialId::PoschlTeller => Self::poschl_teller(2.5, 4.0, 1.0),
            PotentialId::PoschlTellerI => Self::poschl_teller_1(3.0, 2.0, 1.0),
            PotentialId::PoschlTellerII => Self::poschl_teller_2(8.0, 2.0, 1.0),
            PotentialId::ScarfI => Self::scarf_1(3.0, 1.0, 1.0),
            PotentialId::Harmonic => Self::harmonic(2.0),
            PotentialId::Morse => Self::morse(2.0, 1.0, 1.0),
            PotentialId::KeplerCoulomb => Self::kepler_coulomb(4.0, 1.0),
            PotentialId::Isotonic => Self::isotonic(2.0, 1.0),
            PotentialId::GenericFirst => Self::generic_first(2.0, -2.0, 0.0, 1.0, MapSign::Plus),
            PotentialId::GenericSecond => Self::generic_second(6.0, 2.0, 0.0, 1.0, MapSign::Plus),
        };
        spec.expect("reference parameters are valid")
    }

    /// Maps a point of the unit cube onto a valid parameter set whose
    /// canonical coefficients are strictly positive.
    ///
    /// Used to draw random potentials for property checks.
    pub fn sample(id: PotentialId, unit: [f64; 3]) -> Self {
        let [u, v, w] = unit.map(|t| t.clamp(0.0, 1.0));
        let lerp = |t: f64, lo: f64, hi: f64| lo + (hi - lo) * t;
        let alpha = lerp(w, 0.5, 2.0);
        let spec = match id {
            PotentialId::RosenMorseI => {
                Self::rosen_morse_1(alpha + lerp(u, 0.1, 3.0), lerp(v, -3.0, 3.0), alpha)
            }
            PotentialId::RosenMorseII => {
                let a = lerp(u, 0.5, 3.0);
                Self::rosen_morse_2(a, a * a * lerp(v, 0.05, 0.95), alpha)
            }
            PotentialId::Eckart => {
                let a = alpha + lerp(u, 0.1, 2.0);
                Self::eckart(a, a * a * lerp(v, 1.05, 5.0), alpha)
            }
            PotentialId::PoschlTeller => {
                let a = lerp(u, 0.2, 3.0);
                Self::poschl_teller(a, a + alpha + lerp(v, 0.1, 3.0), alpha)
            }
            PotentialId::PoschlTellerI => {
                Self::poschl_teller_1(alpha + lerp(u, 0.1, 3.0), alpha + lerp(v, 0.1, 3.0), alpha)
            }
            PotentialId::PoschlTellerII => {
                let b = alpha + lerp(v, 0.1, 2.0);
                Self::poschl_teller_2(b + lerp(u, 0.1, 3.0), b, alpha)
            }
            PotentialId::ScarfI => {
                let b = lerp(v, 0.1, 2.0);
                Self::scarf_1(b + alpha + lerp(u, 0.1, 2.0), b, alpha)
            }
            PotentialId::Harmonic => Self::harmonic(lerp(u, 0.5, 4.0)),
            PotentialId::Morse => Self::morse(lerp(u, 0.5, 3.0), lerp(v, 0.5, 3.0), alpha),
            PotentialId::KeplerCoulomb => Self::kepler_coulomb(lerp(u, 0.5, 5.0), lerp(v, 0.0, 3.0)),
            PotentialId::Isotonic => Self::isotonic(lerp(u, 0.5, 4.0), lerp(v, 0.2, 3.0)),
            PotentialId::GenericFirst => Self::generic_first(
                lerp(u, 0.5, 6.0),
                lerp(v, -3.0, 3.0),
                lerp(w, -1.0, 1.0),
                1.0,
                MapSign::Plus,
            ),
            PotentialId::GenericSecond => Self::generic_second(
                lerp(u, 0.5, 6.0),
                lerp(v, 0.5, 6.0),
                lerp(w, -1.0, 1.0),
                1.0,
                MapSign::Plus,
            ),
        };
        spec.expect("sampled parameters are valid")
    }

    pub fn id(&self) -> PotentialId {
        match self.shape {
            Shape::RosenMorseI { .. } => PotentialId::RosenMorseI,
            Shape::RosenMorseII { .. } => PotentialId::RosenMorseII,
            Shape::Eckart { .. } => PotentialId::Eckart,
            Shape::PoschlTeller { .. } => PotentialId::PoschlTeller,
            Shape::PoschlTellerI { .. } => PotentialId::PoschlTellerI,
            Shape::PoschlTellerII { .. } => PotentialId::PoschlTellerII,
            Shape::ScarfI { .. } => PotentialId::ScarfI,
            Shape::Harmonic { .. } => PotentialId::Harmonic,
            Shape::Morse { .. } => PotentialId::Morse,
            Shape::KeplerCoulomb { .. } => PotentialId::KeplerCoulomb,
            Shape::Isotonic { .. } => PotentialId::Isotonic,
            Shape::GenericFirst { .. } => PotentialId::GenericFirst,
            Shape::GenericSecond { .. } => PotentialId::GenericSecond,
        }
    }

    /// Parameters as `(name, value)` pairs in [`PotentialId::param_names`] order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        let names = self.id().param_names();
        let values: Vec<f64> = match self.shape {
            Shape::RosenMorseI { a, b, alpha }
            | Shape::RosenMorseII { a, b, alpha }
            | Shape::Eckart { a, b, alpha }
            | Shape::PoschlTeller { a, b, alpha }
            | Shape::PoschlTellerI { a, b, alpha }
            | Shape::PoschlTellerII { a, b, alpha }
            | Shape::ScarfI { a, b, alpha }
            | Shape::Morse { a, b, alpha } => vec![a, b, alpha],
            Shape::Harmonic { omega } => vec![omega],
            Shape::KeplerCoulomb { g, l } => vec![g, l],
            Shape::Isotonic { omega, l } => vec![omega, l],
            Shape::GenericFirst { lambda2, lambda1, lambda0, alpha, sign } => {
                vec![lambda2, lambda1, lambda0, alpha, sign.value()]
            }
            Shape::GenericSecond { lambda2, mu2, lambda0, alpha, sign } => {
                vec![lambda2, mu2, lambda0, alpha, sign.value()]
            }
        };
        names.iter().copied().zip(values).collect()
    }

    /// Open interval on which the potential is defined.
    pub fn domain(&self) -> (f64, f64) {
        let inf = f64::INFINITY;
        match self.shape {
            Shape::RosenMorseI { alpha, .. } | Shape::ScarfI { alpha, .. } => (0.0, PI / alpha),
            Shape::PoschlTellerI { alpha, .. } => (0.0, FRAC_PI_2 / alpha),
            Shape::RosenMorseII { .. } | Shape::Harmonic { .. } | Shape::Morse { .. } => {
                (-inf, inf)
            }
            Shape::Eckart { .. }
            | Shape::PoschlTeller { .. }
            | Shape::PoschlTellerII { .. }
            | Shape::KeplerCoulomb { .. }
            | Shape::Isotonic { .. } => (0.0, inf),
            Shape::GenericFirst { alpha, sign, .. } => match sign {
                MapSign::Plus => (0.0, PI / alpha),
                MapSign::Minus => (-inf, inf),
            },
            Shape::GenericSecond { alpha, sign, .. } => match sign {
                MapSign::Plus => (0.0, FRAC_PI_2 / alpha),
                MapSign::Minus => (0.0, inf),
            },
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x > lo && x < hi {
            Ok(())
        } else {
            Err(Error::Domain { x, lo, hi })
        }
    }

    /// `V(x)` from the potential's own definition.
    pub fn potential(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.potential_unchecked(x))
    }

    pub(crate) fn potential_unchecked(&self, x: f64) -> f64 {
        match self.shape {
            Shape::RosenMorseI { a, b, alpha } => {
                let (s, c) = (alpha * x).sin_cos();
                a * (a - alpha) / (s * s) + 2.0 * b * c / s - a * a + b * b / (a * a)
            }
            Shape::RosenMorseII { a, b, alpha } => {
                let ch = (alpha * x).cosh();
                -a * (a + alpha) / (ch * ch) + 2.0 * b * (alpha * x).tanh() + a * a + b * b / (a * a)
            }
            Shape::Eckart { a, b, alpha } => {
                let sh = (alpha * x).sinh();
                a * (a - alpha) / (sh * sh) - 2.0 * b / (alpha * x).tanh() + a * a + b * b / (a * a)
            }
            Shape::PoschlTeller { a, b, alpha } => {
                let sh = (alpha * x).sinh();
                let coth = 1.0 / (alpha * x).tanh();
                a * a + (a * a + b * b + alpha * a) / (sh * sh) - b * (2.0 * a + alpha) * coth / sh
            }
            Shape::PoschlTellerI { a, b, alpha } => {
                let (s, c) = (alpha * x).sin_cos();
                -(a + b) * (a + b) + a * (a - alpha) / (c * c) + b * (b - alpha) / (s * s)
            }
            Shape::PoschlTellerII { a, b, alpha } => {
                let ch = (alpha * x).cosh();
                let sh = (alpha * x).sinh();
                (a - b) * (a - b) - a * (a + alpha) / (ch * ch) + b * (b - alpha) / (sh * sh)
            }
            Shape::ScarfI { a, b, alpha } => {
                let (s, c) = (alpha * x).sin_cos();
                -a * a + (a * a + b * b - alpha * a) / (s * s) - b * (2.0 * a - alpha) * c / (s * s)
            }
            Shape::Harmonic { omega } => omega * omega * x * x / 4.0 - omega / 2.0,
            Shape::Morse { a, b, alpha } => {
                let e = (-alpha * x).exp();
                a * a + b * b * e * e - 2.0 * b * (a + alpha / 2.0) * e
            }
            Shape::KeplerCoulomb { g, l } => {
                -g / x + l * (l + 1.0) / (x * x) + g * g / (4.0 * (l + 1.0) * (l + 1.0))
            }
            Shape::Isotonic { omega, l } => {
                omega * omega * x * x / 4.0 + l * (l + 1.0) / (x * x) - omega * (l + 1.5)
            }
            Shape::GenericFirst { lambda2, lambda1, lambda0, .. } => {
                let (y, _) = self.map_unchecked(x);
                lambda2 * y * y + lambda1 * y + lambda0
            }
            Shape::GenericSecond { lambda2, mu2, lambda0, .. } => {
                let (y, _) = self.map_unchecked(x);
                lambda2 * y * y + mu2 / (y * y) + lambda0
            }
        }
    }

    /// The change of variable `(y(x), y'(x))`.
    ///
    /// For the first and second families `y' = alpha_eff (1 +/- y^2) > 0`.
    /// Morse uses `y = e^{-alpha x}`, Kepler-Coulomb `y = 1/x` (both
    /// decreasing), harmonic and isotonic the identity.
    pub fn variable_map(&self, x: f64) -> Result<(f64, f64)> {
        self.check_domain(x)?;
        Ok(self.map_unchecked(x))
    }

    pub(crate) fn map_unchecked(&self, x: f64) -> (f64, f64) {
        let tan_map = |k: f64| {
            let t = (k * x).tan();
            (t, k * (1.0 + t * t))
        };
        let tanh_map = |k: f64| {
            let t = (k * x).tanh();
            let c = (k * x).cosh();
            (t, k / (c * c))
        };
        let neg_cot_map = |k: f64| {
            let (s, c) = (k * x).sin_cos();
            (-c / s, k / (s * s))
        };
        match self.shape {
            Shape::RosenMorseI { alpha, .. } => neg_cot_map(alpha),
            Shape::RosenMorseII { alpha, .. } | Shape::PoschlTellerII { alpha, .. } => {
                tanh_map(alpha)
            }
            Shape::Eckart { alpha, .. } => {
                let sh = (alpha * x).sinh();
                (-1.0 / (alpha * x).tanh(), alpha / (sh * sh))
            }
            Shape::PoschlTeller { alpha, .. } => tanh_map(alpha / 2.0),
            Shape::PoschlTellerI { alpha, .. } => tan_map(alpha),
            Shape::ScarfI { alpha, .. } => tan_map(alpha / 2.0),
            Shape::Harmonic { .. } | Shape::Isotonic { .. } => (x, 1.0),
            Shape::Morse { alpha, .. } => {
                let y = (-alpha * x).exp();
                (y, -alpha * y)
            }
            Shape::KeplerCoulomb { .. } => (1.0 / x, -1.0 / (x * x)),
            Shape::GenericFirst { alpha, sign, .. } => match sign {
                MapSign::Plus => neg_cot_map(alpha),
                MapSign::Minus => tanh_map(alpha),
            },
            Shape::GenericSecond { alpha, sign, .. } => match sign {
                MapSign::Plus => tan_map(alpha),
                MapSign::Minus => tanh_map(alpha),
            },
        }
    }

    /// Open range covered by `y` as `x` sweeps the domain.
    pub(crate) fn variable_range(&self) -> (f64, f64) {
        let inf = f64::INFINITY;
        match self.shape {
            Shape::RosenMorseI { .. } | Shape::Harmonic { .. } => (-inf, inf),
            Shape::RosenMorseII { .. } => (-1.0, 1.0),
            Shape::Eckart { .. } => (-inf, -1.0),
            Shape::PoschlTeller { .. } | Shape::PoschlTellerII { .. } => (0.0, 1.0),
            Shape::PoschlTellerI { .. }
            | Shape::ScarfI { .. }
            | Shape::Morse { .. }
            | Shape::KeplerCoulomb { .. }
            | Shape::Isotonic { .. } => (0.0, inf),
            Shape::GenericFirst { sign, .. } => match sign {
                MapSign::Plus => (-inf, inf),
                MapSign::Minus => (-1.0, 1.0),
            },
            Shape::GenericSecond { sign, .. } => match sign {
                MapSign::Plus => (0.0, inf),
                MapSign::Minus => (0.0, 1.0),
            },
        }
    }

    /// `W(x)` without domain checks, for quadrature nodes known to be inside.
    pub(crate) fn superpotential_unchecked(&self, coeffs: &SuperpotentialCoeffs, x: f64) -> f64 {
        let SuperpotentialCoeffs { a, b } = *coeffs;
        match self.shape {
            Shape::Harmonic { .. } => a * x,
            Shape::KeplerCoulomb { .. } => -a / x + b,
            Shape::Isotonic { .. } => a * x - b / x,
            _ => {
                let (y, _) = self.map_unchecked(x);
                match self.shape {
                    Shape::Morse { .. } => a - b * y,
                    _ if self.id().family() == Family::First => a * y + b,
                    _ => a * y - b / y,
                }
            }
        }
    }

    /// Inverse of the change of variable for the first and second families.
    pub(crate) fn inverse_map(&self, y: f64) -> f64 {
        let atan_inv = |k: f64| y.atan() / k;
        let atanh_inv = |k: f64| y.atanh() / k;
        let neg_cot_inv = |k: f64| (FRAC_PI_2 + y.atan()) / k;
        match self.shape {
            Shape::RosenMorseI { alpha, .. } => neg_cot_inv(alpha),
            Shape::RosenMorseII { alpha, .. } | Shape::PoschlTellerII { alpha, .. } => {
                atanh_inv(alpha)
            }
            Shape::Eckart { alpha, .. } => (-1.0 / y).atanh() / alpha,
            Shape::PoschlTeller { alpha, .. } => atanh_inv(alpha / 2.0),
            Shape::PoschlTellerI { alpha, .. } => atan_inv(alpha),
            Shape::ScarfI { alpha, .. } => atan_inv(alpha / 2.0),
            Shape::Harmonic { .. } | Shape::Isotonic { .. } => y,
            Shape::Morse { alpha, .. } => -y.ln() / alpha,
            Shape::KeplerCoulomb { .. } => 1.0 / y,
            Shape::GenericFirst { alpha, sign, .. } => match sign {
                MapSign::Plus => neg_cot_inv(alpha),
                MapSign::Minus => atanh_inv(alpha),
            },
            Shape::GenericSecond { alpha, sign, .. } => match sign {
                MapSign::Plus => atan_inv(alpha),
                MapSign::Minus => atanh_inv(alpha),
            },
        }
    }

    /// Canonical reduction, with strictly positive `lambda2` (and `mu2`).
    ///
    /// Parameter sets that pass construction but give a non-positive
    /// coefficient (for example Rosen-Morse I with `alpha/2 < A <= alpha`)
    /// are rejected here: the potential then falls to minus infinity at a
    /// wall and has no second classical turning point.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        let first = |lambda2: f64, lambda1: f64, lambda0: f64, alpha: f64, sign: MapSign| {
            CanonicalForm::First { lambda2, lambda1, lambda0, alpha, sign }
        };
        // second family from the superpotential data: y' = k (1 +/- y^2)
        let second = |a: f64, b: f64, k: f64, sign: MapSign| {
            let s = sign.value();
            CanonicalForm::Second {
                lambda2: a * (a - s * k),
                mu2: b * (b - k),
                lambda0: -2.0 * a * b - k * (a + s * b),
                alpha: k,
                sign,
            }
        };
        let form = match self.shape {
            Shape::RosenMorseI { a, b, alpha } => {
                first(a * (a - alpha), -2.0 * b, b * b / (a * a) - alpha * a, alpha, MapSign::Plus)
            }
            Shape::RosenMorseII { a, b, alpha } => {
                first(a * (a + alpha), 2.0 * b, b * b / (a * a) - alpha * a, alpha, MapSign::Minus)
            }
            Shape::Eckart { a, b, alpha } => {
                first(a * (a - alpha), 2.0 * b, b * b / (a * a) + alpha * a, -alpha, MapSign::Minus)
            }
            Shape::PoschlTeller { a, b, alpha } => {
                second((a + b) / 2.0, (b - a) / 2.0, alpha / 2.0, MapSign::Minus)
            }
            Shape::PoschlTellerI { a, b, alpha } => CanonicalForm::Second {
                lambda2: a * (a - alpha),
                mu2: b * (b - alpha),
                lambda0: -alpha * (a + b) - 2.0 * a * b,
                alpha,
                sign: MapSign::Plus,
            },
            Shape::PoschlTellerII { a, b, alpha } => CanonicalForm::Second {
                lambda2: a * (a + alpha),
                mu2: b * (b - alpha),
                lambda0: -alpha * (a - b) - 2.0 * a * b,
                alpha,
                sign: MapSign::Minus,
            },
            Shape::ScarfI { a, b, alpha } => {
                second((a + b) / 2.0, (a - b) / 2.0, alpha / 2.0, MapSign::Plus)
            }
            Shape::Harmonic { omega } => CanonicalForm::Harmonic { omega },
            Shape::Morse { a, b, alpha } => CanonicalForm::Morse { a, b, alpha },
            Shape::KeplerCoulomb { g, l } => CanonicalForm::Coulomb {
                a: l + 1.0,
                b: g / (2.0 * (l + 1.0)),
            },
            Shape::Isotonic { omega, l } => CanonicalForm::Isotonic { a: omega / 2.0, b: l + 1.0 },
            Shape::GenericFirst { lambda2, lambda1, lambda0, alpha, sign } => {
                first(lambda2, lambda1, lambda0, alpha, sign)
            }
            Shape::GenericSecond { lambda2, mu2, lambda0, alpha, sign } => {
                CanonicalForm::Second { lambda2, mu2, lambda0, alpha, sign }
            }
        };
        match form {
            CanonicalForm::First { lambda2, .. } if lambda2 <= 0.0 => Err(Error::Param(format!(
                "{}: lambda2 = {lambda2} must be positive",
                self.id()
            ))),
            CanonicalForm::Second { lambda2, mu2, .. } if lambda2 <= 0.0 || mu2 <= 0.0 => {
                Err(Error::Param(format!(
                    "{}: lambda2 = {lambda2} and mu2 = {mu2} must be positive",
                    self.id()
                )))
            }
            f => Ok(f),
        }
    }

    /// Superpotential coefficients read off the potential's parameters.
    ///
    /// Independent of [`superpotential_coeffs`], which recovers the same
    /// pair from the canonical form.
    pub fn superpotential_params(&self) -> Result<SuperpotentialCoeffs> {
        let c = |a: f64, b: f64| SuperpotentialCoeffs { a, b };
        Ok(match self.shape {
            Shape::RosenMorseI { a, b, .. } => c(a, -b / a),
            Shape::RosenMorseII { a, b, .. } | Shape::Eckart { a, b, .. } => c(a, b / a),
            Shape::PoschlTeller { a, b, .. } => c((a + b) / 2.0, (b - a) / 2.0),
            Shape::PoschlTellerI { a, b, .. } | Shape::PoschlTellerII { a, b, .. } => c(a, b),
            Shape::ScarfI { a, b, .. } => c((a + b) / 2.0, (a - b) / 2.0),
            Shape::Harmonic { omega } => c(omega / 2.0, 0.0),
            Shape::Morse { a, b, .. } => c(a, b),
            Shape::KeplerCoulomb { g, l } => c(l + 1.0, g / (2.0 * (l + 1.0))),
            Shape::Isotonic { omega, l } => c(omega / 2.0, l + 1.0),
            Shape::GenericFirst { .. } | Shape::GenericSecond { .. } => {
                superpotential_coeffs(&self.canonical_form()?)?
            }
        })
    }

    /// Superpotential and its analytic derivative at `x`.
    pub fn superpotential_with_derivative(&self, x: f64) -> Result<(f64, f64)> {
        self.check_domain(x)?;
        let SuperpotentialCoeffs { a, b } = self.superpotential_params()?;
        let (y, dy) = self.map_unchecked(x);
        Ok(match self.shape {
            Shape::RosenMorseI { .. }
            | Shape::RosenMorseII { .. }
            | Shape::Eckart { .. }
            | Shape::GenericFirst { .. } => (a * y + b, a * dy),
            Shape::PoschlTeller { .. }
            | Shape::PoschlTellerI { .. }
            | Shape::PoschlTellerII { .. }
            | Shape::ScarfI { .. }
            | Shape::GenericSecond { .. } => {
                if y == 0.0 {
                    return Err(Error::Singularity(x));
                }
                (a * y - b / y, (a + b / (y * y)) * dy)
            }
            Shape::Harmonic { .. } => (a * x, a),
            // W = A - B e^{-alpha x}
            Shape::Morse { .. } => (a - b * y, -b * dy),
            Shape::KeplerCoulomb { .. } => (-a / x + b, a / (x * x)),
            Shape::Isotonic { .. } => (a * x - b / x, a + b / (x * x)),
        })
    }

    pub fn superpotential(&self, x: f64) -> Result<f64> {
        self.superpotential_with_derivative(x).map(|(w, _)| w)
    }

    /// `W^2 - W' - (V - E0)`; zero up to round-off for every catalog entry.
    pub fn riccati_residual(&self, x: f64) -> Result<f64> {
        let (w, dw) = self.superpotential_with_derivative(x)?;
        let v = self.potential_unchecked(x);
        Ok(w * w - dw - (v - self.ground_state_energy()?))
    }

    /// Ground-state energy; zero for all named potentials.
    pub fn ground_state_energy(&self) -> Result<f64> {
        match self.shape {
            Shape::GenericFirst { .. } | Shape::GenericSecond { .. } => {
                let form = self.canonical_form()?;
                ground_state_energy(&form, &superpotential_coeffs(&form)?)
            }
            _ => Ok(0.0),
        }
    }

    /// Lowest asymptotic value of `V`; infinite for confining potentials.
    pub fn threshold(&self) -> f64 {
        match self.shape {
            Shape::RosenMorseII { a, b, .. } | Shape::Eckart { a, b, .. } => {
                let t = a - b / a;
                t * t
            }
            Shape::PoschlTeller { a, .. } => a * a,
            Shape::PoschlTellerII { a, b, .. } => (a - b) * (a - b),
            Shape::Morse { a, .. } => a * a,
            Shape::KeplerCoulomb { g, l } => g * g / (4.0 * (l + 1.0) * (l + 1.0)),
            Shape::GenericFirst { lambda2, lambda1, lambda0, sign: MapSign::Minus, .. } => {
                lambda2 - lambda1.abs() + lambda0
            }
            Shape::GenericSecond { lambda2, mu2, lambda0, sign: MapSign::Minus, .. } => {
                lambda2 + mu2 + lambda0
            }
            _ => f64::INFINITY,
        }
    }

    /// Closed-form `E_n` from the potential's own spectrum formula.
    ///
    /// Generic entries fall back to the family formula.
    pub fn closed_form_level(&self, n: usize) -> Result<f64> {
        let count = self.level_count();
        if !count.contains(n) {
            let LevelCount::Finite(count) = count else { unreachable!() };
            return Err(Error::Index { n, count });
        }
        Ok(self.level_formula(n))
    }

    fn level_formula(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.shape {
            Shape::RosenMorseI { a, b, alpha } => {
                let k = a + alpha * nf;
                -a * a + b * b / (a * a) + k * k - b * b / (k * k)
            }
            Shape::RosenMorseII { a, b, alpha } => {
                let k = a - alpha * nf;
                a * a + b * b / (a * a) - k * k - b * b / (k * k)
            }
            Shape::Eckart { a, b, alpha } => {
                let k = a + alpha * nf;
                a * a + b * b / (a * a) - k * k - b * b / (k * k)
            }
            Shape::PoschlTeller { a, alpha, .. } => {
                let k = alpha * nf - a;
                a * a - k * k
            }
            Shape::PoschlTellerI { a, b, alpha } => {
                let k = 2.0 * alpha * nf + a + b;
                -(a + b) * (a + b) + k * k
            }
            Shape::PoschlTellerII { a, b, alpha } => {
                let k = 2.0 * alpha * nf + b - a;
                (b - a) * (b - a) - k * k
            }
            Shape::ScarfI { a, alpha, .. } => {
                let k = a + alpha * nf;
                -a * a + k * k
            }
            Shape::Harmonic { omega } => nf * omega,
            Shape::Isotonic { omega, .. } => 2.0 * nf * omega,
            Shape::Morse { a, alpha, .. } => {
                let k = a - alpha * nf;
                a * a - k * k
            }
            Shape::KeplerCoulomb { g, l } => {
                let b = g / (2.0 * (l + 1.0));
                let k = (l + 1.0) / (l + 1.0 + nf);
                b * b * (1.0 - k * k)
            }
            Shape::GenericFirst { .. } | Shape::GenericSecond { .. } => {
                match self.canonical_form() {
                    Ok(form) => master_level(&form, n).unwrap_or(f64::NAN),
                    Err(_) => f64::NAN,
                }
            }
        }
    }

    /// Number of bound states.
    ///
    /// Counts `n` while the closed-form level keeps increasing and stays
    /// strictly below [`threshold`](Self::threshold).
    pub fn level_count(&self) -> LevelCount {
        let threshold = self.threshold();
        if threshold.is_infinite() {
            return LevelCount::Unbounded;
        }
        let mut prev = f64::NEG_INFINITY;
        let mut n = 0;
        while n < 1_000_000 {
            let e = self.level_formula(n);
            if !(e.is_finite() && e > prev && e < threshold) {
                break;
            }
            prev = e;
            n += 1;
        }
        LevelCount::Finite(n)
    }

    /// The first `count` levels (or all bound ones, if fewer).
    pub fn spectrum(&self, count: usize) -> Vec<SpectrumLevel> {
        let e0 = self.level_formula(0);
        (0..self.level_count().capped(count))
            .map(|n| {
                let energy = self.level_formula(n);
                SpectrumLevel { n, energy, shifted_energy: energy - e0 }
            })
            .collect()
    }

    /// A representative window of the domain, used for sampling and for
    /// locating the well.
    pub fn natural_window(&self) -> (f64, f64) {
        match self.shape {
            Shape::Harmonic { omega } => {
                let s = 8.0 / omega.sqrt();
                (-s, s)
            }
            Shape::Isotonic { omega, .. } => (0.0, 8.0 / omega.sqrt()),
            Shape::Morse { alpha, .. } => (-2.0 / alpha, 10.0 / alpha),
            Shape::KeplerCoulomb { g, l } => (0.0, 20.0 * (l + 1.0) * (l + 1.0) / g),
            Shape::RosenMorseII { alpha, .. } => (-8.0 / alpha, 8.0 / alpha),
            Shape::GenericFirst { alpha, sign: MapSign::Minus, .. } => (-8.0 / alpha, 8.0 / alpha),
            Shape::Eckart { alpha, .. }
            | Shape::PoschlTeller { alpha, .. }
            | Shape::PoschlTellerII { alpha, .. }
            | Shape::GenericSecond { alpha, sign: MapSign::Minus, .. } => (0.0, 8.0 / alpha),
            _ => self.domain(),
        }
    }

    /// `count` interior points evenly spread over [`natural_window`](Self::natural_window).
    pub fn sample_points(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.natural_window();
        (0..count)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64)
            .collect()
    }
}

/// `V` rebuilt from a canonical form at variable value `y`.
pub fn canonical_potential(form: &CanonicalForm, y: f64) -> f64 {
    match *form {
        CanonicalForm::First { lambda2, lambda1, lambda0, .. } => {
            lambda2 * y * y + lambda1 * y + lambda0
        }
        CanonicalForm::Second { lambda2, mu2, lambda0, .. } => {
            lambda2 * y * y + mu2 / (y * y) + lambda0
        }
        CanonicalForm::Harmonic { omega } => omega * omega * y * y / 4.0 - omega / 2.0,
        // y = e^{-alpha x}: V = (a - b y)^2 - alpha b y
        CanonicalForm::Morse { a, b, alpha } => (a - b * y) * (a - b * y) - alpha * b * y,
        // y = 1/x
        CanonicalForm::Coulomb { a, b } => a * (a - 1.0) * y * y - 2.0 * a * b * y + b * b,
        CanonicalForm::Isotonic { a, b } => {
            a * a * y * y + b * (b - 1.0) / (y * y) - 2.0 * a * b - a
        }
    }
}

/// Recovers `(a, b)` from a canonical form.
///
/// `a = +/-alpha/2 + sqrt(alpha^2/4 + l2)` with the sign of the map, so
/// that `a (a -/+ alpha) = l2`; `b = l1 / 2a` in the first family and
/// `b = alpha/2 + sqrt(alpha^2/4 + mu2)` in the second.
pub fn superpotential_coeffs(form: &CanonicalForm) -> Result<SuperpotentialCoeffs> {
    let a_root = |lambda2: f64, alpha: f64, sign: MapSign| -> Result<f64> {
        if lambda2 <= 0.0 {
            return Err(Error::Param(format!("lambda2 = {lambda2} must be positive")));
        }
        let a = sign.value() * alpha / 2.0 + (alpha * alpha / 4.0 + lambda2).sqrt();
        if a <= 0.0 {
            return Err(Error::Param(format!("superpotential slope a = {a} must be positive")));
        }
        Ok(a)
    };
    Ok(match *form {
        CanonicalForm::First { lambda2, lambda1, alpha, sign, .. } => {
            let a = a_root(lambda2, alpha, sign)?;
            SuperpotentialCoeffs { a, b: lambda1 / (2.0 * a) }
        }
        CanonicalForm::Second { lambda2, mu2, alpha, sign, .. } => {
            if mu2 <= 0.0 {
                return Err(Error::Param(format!("mu2 = {mu2} must be positive")));
            }
            let a = a_root(lambda2, alpha, sign)?;
            let b = alpha / 2.0 + (alpha * alpha / 4.0 + mu2).sqrt();
            SuperpotentialCoeffs { a, b }
        }
        CanonicalForm::Harmonic { omega } => SuperpotentialCoeffs { a: omega / 2.0, b: 0.0 },
        CanonicalForm::Morse { a, b, .. }
        | CanonicalForm::Coulomb { a, b }
        | CanonicalForm::Isotonic { a, b } => SuperpotentialCoeffs { a, b },
    })
}

/// `E0 = l0 + alpha a - b^2` (first family) or `l0 + 2ab + alpha (a +/- b)`
/// (second family); zero for the exceptional potentials.
pub fn ground_state_energy(form: &CanonicalForm, coeffs: &SuperpotentialCoeffs) -> Result<f64> {
    let SuperpotentialCoeffs { a, b } = *coeffs;
    Ok(match *form {
        CanonicalForm::First { lambda0, alpha, .. } => lambda0 + alpha * a - b * b,
        CanonicalForm::Second { lambda0, alpha, sign, .. } => {
            lambda0 + 2.0 * a * b + alpha * (a + sign.value() * b)
        }
        _ => 0.0,
    })
}

/// Family-level spectrum formula.
///
/// First family: `E_n = -+a^2 + alpha a + l0 +- (a +- alpha n)^2 - l1^2 / (4 (a +- alpha n)^2)`.
/// Second family: `E_n = l0 -+ (mu2 + l2) +- (2 alpha n +- a + b)^2`.
/// The exceptional forms return their own spectra.
pub fn master_level(form: &CanonicalForm, n: usize) -> Result<f64> {
    let nf = n as f64;
    let SuperpotentialCoeffs { a, b } = superpotential_coeffs(form)?;
    Ok(match *form {
        CanonicalForm::First { lambda1, lambda0, alpha, sign, .. } => {
            let s = sign.value();
            let k = a + s * alpha * nf;
            -s * a * a + alpha * a + lambda0 + s * k * k - lambda1 * lambda1 / (4.0 * k * k)
        }
        CanonicalForm::Second { lambda2, mu2, lambda0, alpha, sign } => {
            let s = sign.value();
            let k = 2.0 * alpha * nf + s * a + b;
            lambda0 - s * (mu2 + lambda2) + s * k * k
        }
        CanonicalForm::Harmonic { omega } => nf * omega,
        CanonicalForm::Isotonic { a, .. } => 4.0 * nf * a,
        CanonicalForm::Morse { a, alpha, .. } => {
            let k = a - alpha * nf;
            a * a - k * k
        }
        CanonicalForm::Coulomb { a, b } => {
            let k = a / (a + nf);
            b * b * (1.0 - k * k)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn potential_examples() {
        let h = PotentialSpec::harmonic(2.0).unwrap();
        assert_eq!(h.potential(0.0).unwrap(), -1.0);
        let rm2 = PotentialSpec::rosen_morse_2(2.0, 0.5, 1.0).unwrap();
        assert!(close(rm2.potential(0.0).unwrap(), -1.9375, 1e-14));
        let rm1 = PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap();
        assert!(close(rm1.potential(FRAC_PI_2).unwrap(), -1.75, 1e-14));
    }

    #[test]
    fn domain_is_enforced() {
        let rm1 = PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap();
        assert!(matches!(rm1.potential(0.0), Err(Error::Domain { .. })));
        assert!(matches!(rm1.potential(4.0), Err(Error::Domain { .. })));
        let pt1 = PotentialSpec::poschl_teller_1(3.0, 2.0, 1.0).unwrap();
        assert!(pt1.potential(1.6).is_err());
        let c = PotentialSpec::kepler_coulomb(2.0, 0.0).unwrap();
        assert!(c.superpotential(-1.0).is_err());
    }

    #[test]
    fn variable_map_examples() {
        let rm2 = PotentialSpec::rosen_morse_2(2.0, 0.5, 1.0).unwrap();
        assert_eq!(rm2.variable_map(0.0).unwrap(), (0.0, 1.0));
        let rm1 = PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap();
        let (y, dy) = rm1.variable_map(FRAC_PI_2).unwrap();
        assert!(y.abs() < 1e-16 && close(dy, 1.0, 1e-15));
        let pt = PotentialSpec::poschl_teller(2.5, 4.0, 2.0).unwrap();
        for x in [0.1, 3f64.ln() / 2.0, 1.0, 2.5] {
            let (y, dy) = pt.variable_map(x).unwrap();
            assert!(close(y, x.tanh(), 1e-15));
            assert!(close(dy, 1.0 * (1.0 - y * y), 1e-13));
        }
    }

    #[test]
    fn canonical_form_examples() {
        let rm1 = PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap();
        let CanonicalForm::First { lambda2, lambda1, lambda0, alpha, sign } =
            rm1.canonical_form().unwrap()
        else {
            panic!()
        };
        assert_eq!((lambda2, lambda1, alpha, sign), (2.0, -2.0, 1.0, MapSign::Plus));
        assert!(close(lambda0, -1.75, 1e-15));

        let pt1 = PotentialSpec::poschl_teller_1(3.0, 2.0, 1.0).unwrap();
        assert_eq!(
            pt1.canonical_form().unwrap(),
            CanonicalForm::Second {
                lambda2: 6.0,
                mu2: 2.0,
                lambda0: -17.0,
                alpha: 1.0,
                sign: MapSign::Plus
            }
        );
        let h = PotentialSpec::harmonic(2.0).unwrap();
        assert_eq!(h.canonical_form().unwrap(), CanonicalForm::Harmonic { omega: 2.0 });
    }

    #[test]
    fn non_positive_canonical_coefficients_are_rejected() {
        // mu2 = b (b - alpha/2) < 0 for b = 0.25
        let pt = PotentialSpec::poschl_teller(2.5, 3.0, 1.0).unwrap();
        assert!(matches!(pt.canonical_form(), Err(Error::Param(_))));
        let rm1 = PotentialSpec::rosen_morse_1(0.8, 1.0, 1.0).unwrap();
        assert!(rm1.canonical_form().is_err());
    }

    #[test]
    fn superpotential_coeff_examples() {
        let first = |l2, l1, sign| CanonicalForm::First {
            lambda2: l2,
            lambda1: l1,
            lambda0: 0.0,
            alpha: 1.0,
            sign,
        };
        let c = superpotential_coeffs(&first(2.0, -2.0, MapSign::Plus)).unwrap();
        assert!(close(c.a, 2.0, 1e-15) && close(c.b, -0.5, 1e-15));
        let c = superpotential_coeffs(&first(6.0, 1.0, MapSign::Minus)).unwrap();
        assert!(close(c.a, 2.0, 1e-15) && close(c.b, 0.25, 1e-15));
        let second = CanonicalForm::Second {
            lambda2: 6.0,
            mu2: 2.0,
            lambda0: 0.0,
            alpha: 1.0,
            sign: MapSign::Plus,
        };
        let c = superpotential_coeffs(&second).unwrap();
        assert!(close(c.a, 3.0, 1e-15) && close(c.b, 2.0, 1e-15));
        assert!(superpotential_coeffs(&first(0.0, 1.0, MapSign::Plus)).is_err());
    }

    #[test]
    fn ground_energy_examples() {
        let g = PotentialSpec::generic_first(2.0, -2.0, 0.0, 1.0, MapSign::Plus).unwrap();
        assert!(close(g.ground_state_energy().unwrap(), 1.75, 1e-14));
        for spec in [
            PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap(),
            PotentialSpec::poschl_teller_1(3.0, 2.0, 1.0).unwrap(),
        ] {
            let form = spec.canonical_form().unwrap();
            let e0 = ground_state_energy(&form, &superpotential_coeffs(&form).unwrap()).unwrap();
            assert!(e0.abs() < 1e-14, "{e0}");
        }
    }

    #[test]
    fn superpotential_examples() {
        let h = PotentialSpec::harmonic(2.0).unwrap();
        assert_eq!(h.superpotential(1.5).unwrap(), 1.5);
        let rm2 = PotentialSpec::rosen_morse_2(2.0, 0.5, 1.0).unwrap();
        assert_eq!(rm2.superpotential(0.0).unwrap(), 0.25);
        let iso = PotentialSpec::isotonic(2.0, 1.0).unwrap();
        assert_eq!(iso.superpotential(1.0).unwrap(), -1.0);
    }

    #[test]
    fn riccati_examples() {
        let h = PotentialSpec::harmonic(2.0).unwrap();
        assert!(h.riccati_residual(0.7).unwrap().abs() < 1e-12);
        // the spec's printed PT parameters: fine for the Riccati identity
        // even though the canonical form is rejected
        let pt = PotentialSpec::poschl_teller(2.5, 3.0, 1.0).unwrap();
        assert!(pt.riccati_residual(1.0).unwrap().abs() < 1e-10);
        let c = PotentialSpec::kepler_coulomb(2.0, 0.0).unwrap();
        assert!(c.riccati_residual(3.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        let rm1 = PotentialSpec::rosen_morse_1(2.0, 1.0, 1.0).unwrap();
        assert!(close(rm1.closed_form_level(1).unwrap(), -4.0 + 0.25 + 9.0 - 1.0 / 9.0, 1e-13));
        let rm2 = PotentialSpec::rosen_morse_2(2.0, 0.5, 1.0).unwrap();
        assert!(close(rm2.closed_form_level(1).unwrap(), 2.8125, 1e-13));
        let scarf = PotentialSpec::scarf_1(3.0, 1.0, 1.0).unwrap();
        assert_eq!(scarf.closed_form_level(2).unwrap(), 16.0);
        let h = PotentialSpec::harmonic(2.0).unwrap();
        assert_eq!(h.closed_form_level(3).unwrap(), 6.0);
        let m = PotentialSpec::morse(2.0, 1.0, 1.0).unwrap();
        assert_eq!(m.closed_form_level(1).unwrap(), 3.0);
        assert!(matches!(m.closed_form_level(2), Err(Error::Index { n: 2, count: 2 })));
    }

    #[test]
    fn level_count_examples() {
        assert_eq!(PotentialSpec::harmonic(2.0).unwrap().level_count(), LevelCount::Unbounded);
        assert_eq!(
            PotentialSpec::morse(2.0, 1.0, 1.0).unwrap().level_count(),
            LevelCount::Finite(2)
        );
        let rm2 = PotentialSpec::rosen_morse_2(2.0, 0.5, 1.0).unwrap();
        assert_eq!(rm2.threshold(), 3.0625);
        assert_eq!(rm2.level_count(), LevelCount::Finite(2));
        assert_eq!(PotentialSpec::reference(PotentialId::Eckart).level_count(), LevelCount::Finite(3));
        assert_eq!(
            PotentialSpec::reference(PotentialId::PoschlTeller).level_count(),
            LevelCount::Finite(3)
        );
        assert_eq!(
            PotentialSpec::reference(PotentialId::PoschlTellerII).level_count(),
            LevelCount::Finite(3)
        );
    }

    #[test]
    fn constraint_messages() {
        let err = PotentialSpec::rosen_morse_2(1.0, 2.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("B<A^2 violated"), "{err}");
        assert!(PotentialSpec::eckart(2.0, 3.0, 1.0).is_err());
        assert!(PotentialSpec::poschl_teller(3.0, 2.0, 1.0).is_err());
        assert!(PotentialSpec::morse(2.0, -1.0, 1.0).is_err());
        assert!(PotentialSpec::kepler_coulomb(1.0, -0.5).is_err());
        assert!(PotentialSpec::harmonic(f64::NAN).is_err());
    }

    #[test]
    fn params_round_trip_through_names() {
        for id in PotentialId::CATALOG {
            let spec = PotentialSpec::reference(id);
            let map: BTreeMap<String, f64> =
                spec.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            assert_eq!(PotentialSpec::from_params(id, &map).unwrap(), spec);
            assert_eq!(id.slug().parse::<PotentialId>().unwrap(), id);
        }
        let mut map = BTreeMap::new();
        map.insert("omega".to_string(), 1.0);
        map.insert("bogus".to_string(), 1.0);
        assert!(PotentialSpec::from_params(PotentialId::Harmonic, &map).is_err());
    }

    fn all_ids() -> Vec<PotentialId> {
        let mut ids = PotentialId::CATALOG.to_vec();
        ids.extend([PotentialId::GenericFirst, PotentialId::GenericSecond]);
        ids
    }

    fn check_reconstruction(spec: &PotentialSpec) {
        let form = spec.canonical_form().unwrap();
        for x in spec.sample_points(200) {
            let v = spec.potential(x).unwrap();
            let (y, _) = spec.variable_map(x).unwrap();
            let rebuilt = canonical_potential(&form, y);
            assert!(
                (v - rebuilt).abs() <= 1e-10 * (1.0 + v.abs()),
                "{} x={x}: {v} vs {rebuilt}",
                spec.id()
            );
        }
    }

    fn check_riccati(spec: &PotentialSpec) {
        for x in spec.sample_points(200) {
            let v = spec.potential(x).unwrap();
            let r = spec.riccati_residual(x).unwrap();
            assert!(r.abs() <= 1e-10 * (1.0 + v.abs()), "{} x={x}: residual {r}", spec.id());
        }
    }

    fn check_levels(spec: &PotentialSpec) {
        let form = spec.canonical_form().unwrap();
        for level in spec.spectrum(10) {
            let master = master_level(&form, level.n).unwrap();
            assert!(
                (master - level.energy).abs() <= 1e-10 * (1.0 + level.energy.abs()),
                "{} n={}: {master} vs {}",
                spec.id(),
                level.n,
                level.energy
            );
        }
    }

    #[test]
    fn reference_sets_reconstruct() {
        for id in all_ids() {
            let spec = PotentialSpec::reference(id);
            check_reconstruction(&spec);
            check_riccati(&spec);
            check_levels(&spec);
        }
    }

    #[test]
    fn reference_ground_state_is_zero() {
        for id in PotentialId::CATALOG {
            let spec = PotentialSpec::reference(id);
            let form = spec.canonical_form().unwrap();
            let e0 = ground_state_energy(&form, &superpotential_coeffs(&form).unwrap()).unwrap();
            assert!(e0.abs() < 1e-12, "{id}: {e0}");
            assert!(spec.closed_form_level(0).unwrap().abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn canonical_coeffs_match_direct_superpotential() {
        for id in PotentialId::CATALOG {
            let spec = PotentialSpec::reference(id);
            let direct = spec.superpotential_params().unwrap();
            let derived = superpotential_coeffs(&spec.canonical_form().unwrap()).unwrap();
            assert!((direct.a - derived.a).abs() < 1e-12, "{id}");
            assert!((direct.b - derived.b).abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn eckart_is_rosen_morse_2_with_alpha_reversed() {
        let eckart = PotentialSpec::eckart(2.0, 20.0, 1.0).unwrap();
        let CanonicalForm::First { lambda2, lambda1, lambda0, alpha, sign } =
            eckart.canonical_form().unwrap()
        else {
            panic!()
        };
        // the Rosen-Morse II canonical data with alpha -> -alpha
        let (a, b, al) = (2.0, 20.0, -1.0);
        assert_eq!(sign, MapSign::Minus);
        assert_eq!(alpha, al);
        assert!((lambda2 - a * (a + al)).abs() < 1e-14);
        assert!((lambda1 - 2.0 * b).abs() < 1e-14);
        assert!((lambda0 - (b * b / (a * a) - al * a)).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn sampled_potentials_reconstruct(
            idx in 0usize..13,
            u in 0.0f64..1.0,
            v in 0.0f64..1.0,
            w in 0.0f64..1.0,
        ) {
            let spec = PotentialSpec::sample(all_ids()[idx], [u, v, w]);
            check_reconstruction(&spec);
            check_riccati(&spec);
            check_levels(&spec);
        }

        #[test]
        fn finite_spectra_stay_below_threshold(
            idx in 0usize..11,
            u in 0.0f64..1.0,
            v in 0.0f64..1.0,
            w in 0.0f64..1.0,
        ) {
            let spec = PotentialSpec::sample(PotentialId::CATALOG[idx], [u, v, w]);
            let levels = spec.spectrum(50);
            proptest::prop_assert!(levels.windows(2).all(|p| p[1].energy > p[0].energy));
            for l in &levels {
                proptest::prop_assert!(l.energy < spec.threshold());
            }
        }
    }

    #[test]
    fn family_membership() {
        let second: Vec<_> = PotentialId::CATALOG
            .iter()
            .filter(|id| id.family() == Family::Second)
            .collect();
        assert_eq!(second.len(), 5);
        assert_eq!(PotentialId::CATALOG.iter().filter(|id| id.is_exceptional()).count(), 4);
    }
}
