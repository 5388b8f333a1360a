//! Admissible objective functions and convexity relative to the Bhattacharyya
//! parameter `b(p) = √(p(1−p))`.
//!
//! An objective `g: [0,1] → ℝ₊` is admissible when it is symmetric about 1/2,
//! normalized (`g(0) = 0`), nondecreasing on `[0, 1/2]`, and finite at 1/2.
//! It is convex-admissible (resp. concave-admissible) when `g = φ(b)` for a
//! convex (resp. concave) nondecreasing `φ`. The classification decides which
//! closed-form measurement is optimal:
//!
//! - convex-admissible  → `E[g(p)] ≥ g(p*)` with `b(p*) = E[b(p)]`,
//! - concave-admissible → `E[g(p)] ≥ 2 g(1/2) E[b(p)]`.
//!
//! Builtins expose closed-form derivatives, so smooth objectives are
//! classified by the derivative-ratio criterion `g''/|g'| ≥ b''/|b'|` on
//! `(0, 1/2)`. Non-smooth objectives (error, ambiguity) fall back to a
//! supported-slope test on sampled `(b, g)` triples, which tolerates the
//! discontinuity of the ambiguity function where the ratio criterion cannot.

use serde::Serialize;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Grid margin for derivative-based classification (the ratios blow up at the
/// endpoints of `(0, 1/2)`).
const CLASSIFY_MARGIN: f64 = 1e-3;

/// Central-difference step for derivative estimates of custom objectives.
const FD_STEP: f64 = 1e-5;

/// Relative tolerance when comparing curvature ratios or data slopes.
const CLASSIFY_TOL: f64 = 1e-7;

/// Default grid size used by callers that do not care to pick one.
pub const DEFAULT_CLASSIFY_GRID: usize = 2001;

/// Rényi orders closer to 1 than this evaluate the Shannon branch (removable
/// singularity in `1/(1−α)`).
const RENYI_SHANNON_WINDOW: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("unknown objective {0:?}; expected error | entropy | ambiguity | bhattacharyya | renyi:<alpha>")]
    UnknownName(String),
    #[error("Rényi order must be nonnegative, got {0}")]
    NegativeAlpha(f64),
    #[error("objective {name:?} is not admissible: {}", report.summary())]
    NotAdmissible {
        name: String,
        report: AdmissibilityReport,
    },
    #[error("mean Bhattacharyya value must lie in [0, 1/2], got {0}")]
    MeanBOutOfRange(f64),
    #[error("sample at {value} lies outside the interval [{a}, {b}]")]
    SupportOutsideRange { value: f64, a: f64, b: f64 },
    #[error("interval endpoints must satisfy a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("samples must carry positive total weight")]
    EmptySamples,
}

/// The Bhattacharyya parameter `b(p) = √(p(1−p))`, the pivot objective.
pub fn bhattacharyya(p: f64) -> f64 {
    (p * (1.0 - p)).max(0.0).sqrt()
}

/// The root `p ≤ 1/2` of `b(p) = mean_b`.
pub fn invert_bhattacharyya(mean_b: f64) -> f64 {
    0.5 * (1.0 - (1.0 - 4.0 * mean_b * mean_b).max(0.0).sqrt())
}

#[derive(Clone)]
enum Kind {
    Error,
    Entropy,
    Ambiguity,
    Bhattacharyya,
    Renyi(f64),
    RenyiInf,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for ObjectiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ObjectiveFn({})", self.name())
    }
}

/// An evaluatable objective `g(p)` with its identity and `g(1/2)`.
#[derive(Clone)]
pub struct ObjectiveFn {
    kind: Kind,
}


impl ObjectiveFn {
    /// Error probability `e(p) = min(p, 1−p)`.
    pub fn error() -> Self {
        ObjectiveFn { kind: Kind::Error }
    }

    /// Binary entropy in nats, with the `0·log 0 = 0` convention.
    pub fn entropy() -> Self {
        ObjectiveFn {
            kind: Kind::Entropy,
        }
    }

    /// Ambiguity indicator `a(p) = 1 for p ∉ {0, 1}`.
    pub fn ambiguity() -> Self {
        ObjectiveFn {
            kind: Kind::Ambiguity,
        }
    }

    pub fn bhattacharyya() -> Self {
        ObjectiveFn {
            kind: Kind::Bhattacharyya,
        }
    }

    /// Binary Rényi entropy of order `alpha` (natural log). Order 0 is the
    /// ambiguity function, order 1 the Shannon entropy.
    pub fn renyi(alpha: f64) -> Result<Self, ObjectiveError> {
        if !(alpha >= 0.0) {
            return Err(ObjectiveError::NegativeAlpha(alpha));
        }
        Ok(ObjectiveFn {
            kind: Kind::Renyi(alpha),
        })
    }

    /// Rényi order ∞: `−log(1 − e(p))`.
    pub fn renyi_inf() -> Self {
        ObjectiveFn {
            kind: Kind::RenyiInf,
        }
    }

    /// A user-supplied objective, classified by finite differences.
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ObjectiveFn {
            kind: Kind::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        match &self.kind {
            Kind::Error => p.min(1.0 - p),
            Kind::Entropy => xlnx(p) + xlnx(1.0 - p),
            Kind::Ambiguity => {
                if p == 0.0 || p == 1.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Kind::Bhattacharyya => bhattacharyya(p),
            Kind::Renyi(alpha) => renyi_eval(*alpha, p),
            Kind::RenyiInf => -(p.max(1.0 - p)).ln(),
            Kind::Custom { f, .. } => f(p),
        }
    }

    pub fn value_at_half(&self) -> f64 {
        self.eval(0.5)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Error => "error".into(),
            Kind::Entropy => "entropy".into(),
            Kind::Ambiguity => "ambiguity".into(),
            Kind::Bhattacharyya => "bhattacharyya".into(),
            Kind::Renyi(alpha) => format!("renyi:{alpha}"),
            Kind::RenyiInf => "renyi:inf".into(),
            Kind::Custom { name, .. } => name.clone(),
        }
    }
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

fn renyi_eval(alpha: f64, p: f64) -> f64 {
    if alpha == 0.0 {
        return if p == 0.0 || p == 1.0 { 0.0 } else { 1.0 };
    }
    if (alpha - 1.0).abs() < RENYI_SHANNON_WINDOW {
        return xlnx(p) + xlnx(1.0 - p);
    }
    if alpha.is_infinite() {
        return -(p.max(1.0 - p)).ln();
    }
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    (p.powf(alpha) + (1.0 - p).powf(alpha)).ln() / (1.0 - alpha)
}

/// Parse the objective grammar
/// `error | entropy | ambiguity | bhattacharyya | renyi:<alpha>`
/// where `<alpha>` is a nonnegative decimal or `inf`.
pub fn builtin_objective(spec: &str) -> Result<ObjectiveFn, ObjectiveError> {
    match spec {
        "error" => Ok(ObjectiveFn::error()),
        "entropy" => Ok(ObjectiveFn::entropy()),
        "ambiguity" => Ok(ObjectiveFn::ambiguity()),
        "bhattacharyya" => Ok(ObjectiveFn::bhattacharyya()),
        other => {
            if let Some(alpha) = other.strip_prefix("renyi:") {
                if alpha == "inf" {
                    return Ok(ObjectiveFn::renyi_inf());
                }
                let alpha: f64 = alpha
                    .parse()
                    .map_err(|_| ObjectiveError::UnknownName(other.to_string()))?;
                if alpha.is_infinite() {
                    return Ok(ObjectiveFn::renyi_inf());
                }
                return ObjectiveFn::renyi(alpha);
            }
            Err(ObjectiveError::UnknownName(other.to_string()))
        }
    }
}

impl std::str::FromStr for ObjectiveFn {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        builtin_objective(s)
    }
}

/// Classification of an objective relative to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexityClass {
    ConvexAdmissible,
    ConcaveAdmissible,
    Neither,
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConvexityClass::ConvexAdmissible => "convex-admissible",
            ConvexityClass::ConcaveAdmissible => "concave-admissible",
            ConvexityClass::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// Outcome of the four admissibility checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub symmetry_ok: bool,
    pub normalization_ok: bool,
    pub monotonicity_ok: bool,
    pub bounded_ok: bool,
    pub violations: Vec<String>,
}

impl AdmissibilityReport {
    pub fn summary(&self) -> String {
        if self.admissible {
            "admissible".into()
        } else {
            self.violations.join("; ")
        }
    }
}

/// Samples `g` on a uniform grid of `(0, 1)` plus the endpoints and verifies
/// symmetry, normalization, monotonicity on `[0, 1/2]`, and boundedness.
pub fn check_admissible(g: &ObjectiveFn, grid_size: usize) -> AdmissibilityReport {
    let n = grid_size.max(3);
    let tol = 1e-9;
    let mut report = AdmissibilityReport {
        admissible: true,
        symmetry_ok: true,
        normalization_ok: true,
        monotonicity_ok: true,
        bounded_ok: true,
        violations: Vec::new(),
    };

    let at_zero = g.eval(0.0);
    if !(at_zero.abs() <= 1e-12) {
        report.normalization_ok = false;
        report
            .violations
            .push(format!("normalization: g(0) = {at_zero:e}, expected 0"));
    }
    let at_half = g.eval(0.5);
    if !at_half.is_finite() {
        report.bounded_ok = false;
        report
            .violations
            .push(format!("boundedness: g(1/2) = {at_half}"));
    }

    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n {
        let p = i as f64 / n as f64;
        let v = g.eval(p);
        let mirror = g.eval(1.0 - p);
        let scale = 1.0 + v.abs().max(mirror.abs());
        if (v - mirror).abs() > tol * scale && report.symmetry_ok {
            report.symmetry_ok = false;
            report.violations.push(format!(
                "symmetry: g({p:.6}) = {v:.6e} but g({:.6}) = {mirror:.6e}",
                1.0 - p
            ));
        }
        if p <= 0.5 {
            if let Some((pp, pv)) = prev {
                if v < pv - tol * (1.0 + pv.abs()) && report.monotonicity_ok {
                    report.monotonicity_ok = false;
                    report.violations.push(format!(
                        "monotonicity: g decreases from {pv:.6e} at {pp:.6} to {v:.6e} at {p:.6}"
                    ));
                }
            }
            prev = Some((p, v));
        }
    }

    report.admissible = report.symmetry_ok
        && report.normalization_ok
        && report.monotonicity_ok
        && report.bounded_ok;
    report
}

/// Curvature ratio `g''/|g'|` of the Bhattacharyya parameter on `(0, 1/2)`:
/// `b' = (1−2p)/(2b)`, `b'' = −1/(4b³)`.
fn ratio_b(p: f64) -> f64 {
    -1.0 / (2.0 * p * (1.0 - p) * (1.0 - 2.0 * p))
}

/// Closed-form curvature ratio for smooth builtins; `None` routes the
/// objective to the sampled-slope test.
fn analytic_ratio(kind: &Kind, p: f64) -> Option<f64> {
    match kind {
        Kind::Entropy => Some(-1.0 / (p * (1.0 - p) * ((1.0 - p) / p).ln())),
        Kind::Bhattacharyya => Some(ratio_b(p)),
        Kind::RenyiInf => Some(1.0 / (1.0 - p)),
        Kind::Renyi(alpha) => {
            if *alpha == 0.0 {
                None
            } else if (alpha - 1.0).abs() < RENYI_SHANNON_WINDOW {
                analytic_ratio(&Kind::Entropy, p)
            } else if alpha.is_infinite() {
                analytic_ratio(&Kind::RenyiInf, p)
            } else {
                // N = p^α + q^α; ratio = N''/N' − N'/N (the 1/(1−α) cancels).
                let a = *alpha;
                let q = 1.0 - p;
                let n = p.powf(a) + q.powf(a);
                let n1 = a * (p.powf(a - 1.0) - q.powf(a - 1.0));
                let n2 = a * (a - 1.0) * (p.powf(a - 2.0) + q.powf(a - 2.0));
                Some(n2 / n1 - n1 / n)
            }
        }
        _ => None,
    }
}

fn classify_by_ratio(ratio: impl Fn(f64) -> f64, grid_size: usize) -> (bool, bool) {
    let n = grid_size.max(16);
    let lo = CLASSIFY_MARGIN;
    let hi = 0.5 - CLASSIFY_MARGIN;
    let mut convex_ok = true;
    let mut concave_ok = true;
    for i in 0..n {
        let p = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let rg = ratio(p);
        let rb = ratio_b(p);
        if !rg.is_finite() {
            return (false, false);
        }
        let tol = CLASSIFY_TOL * (1.0 + rg.abs() + rb.abs());
        if rg < rb - tol {
            convex_ok = false;
        }
        if rg > rb + tol {
            concave_ok = false;
        }
        if !convex_ok && !concave_ok {
            break;
        }
    }
    (convex_ok, concave_ok)
}

/// Supported-slope test: `g = φ(b)` with `b` strictly increasing on `[0,1/2]`,
/// so convexity of `φ` is equivalent to nondecreasing chord slopes of the
/// sampled `(b_i, g_i)` data. Works for discontinuous `φ` (ambiguity), where
/// pointwise supporting lines exist but `φ` is not convex.
fn classify_by_slopes(g: &ObjectiveFn, grid_size: usize) -> (bool, bool) {
    let n = grid_size.max(16);
    let mut data = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let p = 0.5 * i as f64 / n as f64;
        data.push((bhattacharyya(p), g.eval(p)));
    }
    let mut convex_ok = true;
    let mut concave_ok = true;
    let mut prev_slope: Option<f64> = None;
    for w in data.windows(2) {
        let db = w[1].0 - w[0].0;
        if db <= 0.0 {
            continue;
        }
        let slope = (w[1].1 - w[0].1) / db;
        if let Some(prev) = prev_slope {
            let tol = CLASSIFY_TOL * (1.0 + prev.abs().max(slope.abs()));
            if slope < prev - tol {
                convex_ok = false;
            }
            if slope > prev + tol {
                concave_ok = false;
            }
        }
        prev_slope = Some(slope);
    }
    (convex_ok, concave_ok)
}

/// Finite-difference curvature ratio with a stability probe: if the second
/// derivative at steps `h` and `h/2` disagrees by more than 10% anywhere, the
/// objective is treated as non-smooth.
fn classify_custom(g: &ObjectiveFn, grid_size: usize) -> (bool, bool) {
    let f = |p: f64| g.eval(p);
    let n = grid_size.max(16);
    let lo = CLASSIFY_MARGIN;
    let hi = 0.5 - CLASSIFY_MARGIN;
    let second = |p: f64, h: f64| (f(p + h) - 2.0 * f(p) + f(p - h)) / (h * h);
    let first = |p: f64, h: f64| (f(p + h) - f(p - h)) / (2.0 * h);
    let mut smooth = true;
    for i in 0..n {
        let p = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let d2a = second(p, FD_STEP);
        let d2b = second(p, FD_STEP / 2.0);
        if (d2a - d2b).abs() > 0.1 * d2a.abs().max(d2b.abs()) + 1e-4 {
            smooth = false;
            break;
        }
        let d1 = first(p, FD_STEP);
        if d1.abs() < 1e-12 {
            smooth = false;
            break;
        }
    }
    if smooth {
        classify_by_ratio(
            |p| second(p, FD_STEP) / first(p, FD_STEP).abs(),
            grid_size,
        )
    } else {
        classify_by_slopes(g, grid_size)
    }
}

/// Classify `g` relative to `b` on a grid of the stated size.
///
/// Returns `Neither` when the evidence is mixed; errors only when `g` fails
/// the admissibility checks. Objectives proportional to `b` satisfy both
/// relations and report as convex-admissible.
pub fn classify(g: &ObjectiveFn, grid_size: usize) -> Result<ConvexityClass, ObjectiveError> {
    let report = check_admissible(g, grid_size.max(64));
    if !report.admissible {
        return Err(ObjectiveError::NotAdmissible {
            name: g.name(),
            report,
        });
    }
    let (convex_ok, concave_ok) = match &g.kind {
        Kind::Error | Kind::Ambiguity => classify_by_slopes(g, grid_size),
        Kind::Renyi(alpha) if *alpha == 0.0 => classify_by_slopes(g, grid_size),
        Kind::Custom { .. } => classify_custom(g, grid_size),
        kind => classify_by_ratio(|p| analytic_ratio(kind, p).unwrap(), grid_size),
    };
    Ok(match (convex_ok, concave_ok) {
        (true, _) => ConvexityClass::ConvexAdmissible,
        (false, true) => ConvexityClass::ConcaveAdmissible,
        (false, false) => ConvexityClass::Neither,
    })
}

/// Jensen lower bound for convex-admissible `g`: `g(p*)` with `b(p*) = mean_b`.
pub fn jensen_bound_convex(g: &ObjectiveFn, mean_b: f64) -> Result<f64, ObjectiveError> {
    if !(-1e-12..=0.5 + 1e-12).contains(&mean_b) {
        return Err(ObjectiveError::MeanBOutOfRange(mean_b));
    }
    Ok(g.eval(invert_bhattacharyya(mean_b.clamp(0.0, 0.5))))
}

/// Inverse-Jensen lower bound for concave-admissible `g`: `2 g(1/2) mean_b`.
pub fn jensen_bound_concave(g: &ObjectiveFn, mean_b: f64) -> f64 {
    2.0 * g.value_at_half() * mean_b
}

/// Result of the inverse-Jensen evaluation: the distribution-free upper bound
/// and the empirical mean it dominates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InverseJensenBound {
    pub bound: f64,
    pub empirical: f64,
    pub holds: bool,
}

/// For convex `φ` and weighted samples of `X` supported on `[a, b]`:
/// `E[φ(X)] ≤ [(E[X]−a) φ(b) + (b−E[X]) φ(a)] / (b−a)`.
pub fn inverse_jensen(
    phi: impl Fn(f64) -> f64,
    samples: &[(f64, f64)],
    a: f64,
    b: f64,
) -> Result<InverseJensenBound, ObjectiveError> {
    if !(a < b) {
        return Err(ObjectiveError::InvalidInterval { a, b });
    }
    let total: f64 = samples.iter().map(|&(_, w)| w).sum();
    if !(total > 0.0) {
        return Err(ObjectiveError::EmptySamples);
    }
    let span_tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
    let mut mean = 0.0;
    let mut empirical = 0.0;
    for &(x, w) in samples {
        if x < a - span_tol || x > b + span_tol {
            return Err(ObjectiveError::SupportOutsideRange { value: x, a, b });
        }
        mean += w * x;
        empirical += w * phi(x);
    }
    mean /= total;
    empirical /= total;
    let bound = ((mean - a) * phi(b) + (b - mean) * phi(a)) / (b - a);
    let holds = empirical <= bound + 1e-10 * (1.0 + bound.abs());
    Ok(InverseJensenBound {
        bound,
        empirical,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bhattacharyya_values() {
        assert_eq!(bhattacharyya(0.0), 0.0);
        assert_eq!(bhattacharyya(0.5), 0.5);
        assert!((bhattacharyya(0.3) - 0.21f64.sqrt()).abs() < 1e-15);
        assert!((bhattacharyya(0.3) - 0.458_257_569_495_584).abs() < 1e-12);
    }

    #[test]
    fn builtin_values() {
        assert_eq!(builtin_objective("error").unwrap().eval(0.3), 0.3);
        let a = builtin_objective("ambiguity").unwrap();
        assert_eq!(a.eval(0.5), 1.0);
        assert_eq!(a.eval(0.0), 0.0);
        assert_eq!(a.eval(1.0), 0.0);
        let h = builtin_objective("entropy").unwrap();
        assert!((h.eval(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(h.eval(0.0), 0.0);
        assert!(builtin_objective("renyi:-1").is_err());
        assert!(builtin_objective("nonsense").is_err());
    }

    #[test]
    fn renyi_half_identity() {
        // h_{1/2}(p) = log(1 + 2 b(p)), pointwise on a 1000-point grid.
        let g = builtin_objective("renyi:0.5").unwrap();
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            let expected = (1.0 + 2.0 * bhattacharyya(p)).ln();
            assert!(
                (g.eval(p) - expected).abs() < 1e-12,
                "mismatch at p={p}: {} vs {expected}",
                g.eval(p)
            );
        }
    }

    #[test]
    fn renyi_special_orders() {
        let r0 = builtin_objective("renyi:0").unwrap();
        assert_eq!(r0.eval(0.3), 1.0);
        assert_eq!(r0.eval(0.0), 0.0);
        let r1 = builtin_objective("renyi:1").unwrap();
        let h = builtin_objective("entropy").unwrap();
        assert!((r1.eval(0.3) - h.eval(0.3)).abs() < 1e-12);
        let rinf = builtin_objective("renyi:inf").unwrap();
        assert!((rinf.eval(0.3) - (-(0.7f64).ln())).abs() < 1e-15);
        assert_eq!(rinf.eval(0.0), 0.0);
    }

    #[test]
    fn admissibility_checks() {
        assert!(check_admissible(&ObjectiveFn::entropy(), 101).admissible);
        assert!(check_admissible(&ObjectiveFn::ambiguity(), 101).admissible);

        let asym = ObjectiveFn::custom("identity", |p| p);
        let report = check_admissible(&asym, 101);
        assert!(!report.admissible);
        assert!(!report.symmetry_ok);

        // b plus a small ripple: symmetric it is not, but the interesting
        // failure is the ripple-induced loss of monotonicity near 1/2.
        let wiggly = ObjectiveFn::custom("wiggly", |p| {
            let q = p.min(1.0 - p);
            bhattacharyya(q) + 0.01 * (20.0 * q).sin()
        });
        let report = check_admissible(&wiggly, 501);
        assert!(!report.monotonicity_ok, "{:?}", report.violations);
    }

    #[test]
    fn classify_builtins() {
        let grid = DEFAULT_CLASSIFY_GRID;
        assert_eq!(
            classify(&ObjectiveFn::error(), grid).unwrap(),
            ConvexityClass::ConvexAdmissible
        );
        assert_eq!(
            classify(&ObjectiveFn::entropy(), grid).unwrap(),
            ConvexityClass::ConvexAdmissible
        );
        assert_eq!(
            classify(&ObjectiveFn::ambiguity(), grid).unwrap(),
            ConvexityClass::ConcaveAdmissible
        );
        assert_eq!(
            classify(&builtin_objective("renyi:0.5").unwrap(), grid).unwrap(),
            ConvexityClass::ConcaveAdmissible
        );
        assert_eq!(
            classify(&builtin_objective("renyi:0.75").unwrap(), grid).unwrap(),
            ConvexityClass::Neither
        );
        assert_eq!(
            classify(&ObjectiveFn::bhattacharyya(), grid).unwrap(),
            ConvexityClass::ConvexAdmissible
        );
        assert!(classify(&ObjectiveFn::custom("identity", |p| p), grid).is_err());
    }

    #[test]
    fn entropy_ratio_reduces_to_log_inequality() {
        // g''/|g'| ≥ b''/|b'| for the entropy is log((1−p)/p) ≥ 2(1−2p).
        for i in 1..2000 {
            let p = 0.5 * i as f64 / 2000.0;
            assert!(
                ((1.0 - p) / p).ln() >= 2.0 * (1.0 - 2.0 * p) - 1e-12,
                "failed at p={p}"
            );
        }
    }

    #[test]
    fn jensen_bounds() {
        let e = ObjectiveFn::error();
        assert_eq!(jensen_bound_convex(&e, 0.0).unwrap(), 0.0);
        assert!((jensen_bound_convex(&e, 0.5).unwrap() - 0.5).abs() < 1e-12);
        let mb = 0.125f64.sqrt();
        let expected = 0.146_446_609_406_726_24;
        assert!((jensen_bound_convex(&e, mb).unwrap() - expected).abs() < 1e-12);
        assert!(jensen_bound_convex(&e, 0.7).is_err());

        let a = ObjectiveFn::ambiguity();
        assert!((jensen_bound_concave(&a, 0.3) - 0.6).abs() < 1e-15);
        assert_eq!(jensen_bound_concave(&a, 0.0), 0.0);
        let r = builtin_objective("renyi:0.5").unwrap();
        assert!(
            (jensen_bound_concave(&r, 0.25) - 0.5 * std::f64::consts::LN_2).abs() < 1e-12
        );
    }

    #[test]
    fn jensen_bounds_monotone_in_mean_b() {
        let g = ObjectiveFn::entropy();
        let a = ObjectiveFn::ambiguity();
        let mut prev_cv = 0.0;
        let mut prev_cc = 0.0;
        for i in 0..=100 {
            let mb = 0.5 * i as f64 / 100.0;
            let cv = jensen_bound_convex(&g, mb).unwrap();
            let cc = jensen_bound_concave(&a, mb);
            assert!(cv >= prev_cv - 1e-12);
            assert!(cc >= prev_cc - 1e-12);
            prev_cv = cv;
            prev_cc = cc;
        }
    }

    #[test]
    fn inverse_jensen_examples() {
        let phi = |x: f64| x * x;
        // Deterministic at a: bound equals φ(a).
        let r = inverse_jensen(phi, &[(0.2, 1.0)], 0.2, 1.0).unwrap();
        assert!((r.bound - 0.04).abs() < 1e-12 && r.holds);
        // Uniform on {a, b}: bound (φ(a)+φ(b))/2, tight.
        let r = inverse_jensen(phi, &[(0.0, 1.0), (1.0, 1.0)], 0.0, 1.0).unwrap();
        assert!((r.bound - 0.5).abs() < 1e-12);
        assert!((r.empirical - 0.5).abs() < 1e-12);
        // Uniform on [0,1]: E[x²] = 1/3 ≤ 1/2.
        let samples: Vec<(f64, f64)> = (0..=10_000)
            .map(|i| (i as f64 / 10_000.0, 1.0))
            .collect();
        let r = inverse_jensen(phi, &samples, 0.0, 1.0).unwrap();
        assert!((r.empirical - 1.0 / 3.0).abs() < 1e-3);
        assert!((r.bound - 0.5).abs() < 1e-12 && r.holds);
        // Support violation.
        assert!(inverse_jensen(phi, &[(1.5, 1.0)], 0.0, 1.0).is_err());
    }
}
