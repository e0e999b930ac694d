//! Grid checks of monotonicity and discrete log-concavity/log-convexity, and
//! the catalogue of clauses they are run against.
//!
//! A log-concavity check on a uniform grid with spacing `h` asserts
//! `f(x)^2 >= f(x-h) f(x+h) (1 - tol)` at every interior point; log-convexity
//! reverses the inequality. Points where `f` underflows below
//! [`UNDERFLOW_FLOOR`] are excluded and counted.

use std::fmt;

use crate::closed_form::{marcum_central, marcum_central_complement, marcum_excess};
use crate::error::{Error, Result};
use crate::oracle::{MarcumArgs, NuttallArgs, Oracle};
use crate::scalar::gaussian_q;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const UNDERFLOW_FLOOR: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Nu,
    Mu,
    A,
    B,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Nu => "nu",
            Axis::Mu => "mu",
            Axis::A => "a",
            Axis::B => "b",
        })
    }
}

/// Grid coordinate `x` maps to the parameter value `x` or `sqrt(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Identity,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Parameter values held fixed while one axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Params {
    pub nu: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
}

impl Params {
    pub fn marcum(nu: f64, a: f64, b: f64) -> Self {
        Self { nu, mu: 0.0, a, b }
    }

    pub fn nuttall(mu: f64, nu: f64, a: f64, b: f64) -> Self {
        Self { nu, mu, a, b }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axis: Axis,
    pub points: Vec<f64>,
    pub fixed: Params,
    pub transform: Transform,
    /// Keep `mu - nu` equal to this while `nu` varies.
    pub mu_gap: Option<f64>,
}

impl GridSpec {
    pub fn new(axis: Axis, points: Vec<f64>, fixed: Params, transform: Transform) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid points must be strictly increasing".into()));
        }
        Ok(Self { axis, points, fixed, transform, mu_gap: None })
    }

    /// `lo, lo + h, ...` up to `hi` inclusive (within rounding).
    pub fn uniform(axis: Axis, lo: f64, hi: f64, h: f64, fixed: Params, transform: Transform) -> Result<Self> {
        if !(h > 0.0) || hi < lo {
            return Err(Error::Domain(format!("bad grid [{lo}, {hi}] step {h}")));
        }
        let n = ((hi - lo) / h + 1e-9).floor() as usize;
        let points = (0..=n).map(|i| lo + h * i as f64).collect();
        Self::new(axis, points, fixed, transform)
    }

    pub fn with_mu_gap(mut self, gap: f64) -> Self {
        self.mu_gap = Some(gap);
        self
    }

    /// Full parameter set at grid coordinate `x`.
    pub fn params_at(&self, x: f64) -> Params {
        let v = match self.transform {
            Transform::Identity => x,
            Transform::Sqrt => x.sqrt(),
        };
        let mut p = self.fixed;
        match self.axis {
            Axis::Nu => p.nu = v,
            Axis::Mu => p.mu = v,
            Axis::A => p.a = v,
            Axis::B => p.b = v,
        }
        if let Some(d) = self.mu_gap {
            p.mu = p.nu + d;
        }
        p
    }

    /// Spacing, if the grid is uniform.
    pub fn spacing(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let h = self.points[1] - self.points[0];
        self.points
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0))
            .then_some(h)
    }

    /// Human-readable fixed parameters, omitting the varying axis.
    pub fn describe_fixed(&self) -> String {
        let p = self.fixed;
        let mut parts = Vec::new();
        if self.axis != Axis::Mu {
            match self.mu_gap {
                Some(d) => parts.push(format!("mu=nu+{d}")),
                None if p.mu != 0.0 => parts.push(format!("mu={}", p.mu)),
                None => {}
            }
        }
        if self.axis != Axis::Nu {
            parts.push(format!("nu={}", p.nu));
        }
        if self.axis != Axis::A {
            parts.push(format!("a={}", p.a));
        }
        if self.axis != Axis::B {
            parts.push(format!("b={}", p.b));
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Grid coordinate (before the transform).
    pub point: f64,
    pub residual: f64,
    pub fixed: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Theorem,
    Conjecture,
    Remark,
    Probe,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Theorem => "theorem",
            VerdictKind::Conjecture => "conjecture",
            VerdictKind::Remark => "remark",
            VerdictKind::Probe => "probe",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyVerdict {
    pub property_id: String,
    pub kind: VerdictKind,
    pub checked_points: usize,
    pub excluded_points: usize,
    pub violations: Vec<Violation>,
    /// Largest residual seen; positive values beyond the tolerance are violations.
    pub max_residual: f64,
    pub pass: bool,
    /// `Some(true)` when the property is claimed, `Some(false)` when the
    /// catalogue expects counterexamples, `None` for pure probes.
    pub expected: Option<bool>,
}

impl PropertyVerdict {
    fn empty(id: &str) -> Self {
        Self {
            property_id: id.to_string(),
            kind: VerdictKind::Theorem,
            checked_points: 0,
            excluded_points: 0,
            violations: Vec::new(),
            max_residual: f64::NEG_INFINITY,
            pass: true,
            expected: Some(true),
        }
    }

    fn absorb(&mut self, other: PropertyVerdict) {
        self.checked_points += other.checked_points;
        self.excluded_points += other.excluded_points;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.violations.extend(other.violations);
        self.pass = self.violations.is_empty();
    }

    /// Whether the outcome matches what the catalogue expects.
    pub fn as_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.pass)
    }
}

fn evaluate<F: Fn(f64) -> Result<f64>>(f: &F, grid: &GridSpec) -> Result<Vec<Option<f64>>> {
    grid.points
        .iter()
        .map(|&x| {
            let v = f(x)?;
            Ok((v.is_finite() && v > UNDERFLOW_FLOOR).then_some(v))
        })
        .collect()
}

/// `f(x_{i+1}) - f(x_i)` must have the stated sign, up to `tol` relative.
/// `f` receives the grid coordinate.
pub fn check_monotone<F: Fn(f64) -> Result<f64>>(
    id: &str,
    f: F,
    grid: &GridSpec,
    direction: Direction,
    tol: f64,
) -> Result<PropertyVerdict> {
    let values = evaluate(&f, grid)?;
    let mut v = PropertyVerdict::empty(id);
    v.excluded_points = values.iter().filter(|x| x.is_none()).count();
    for (i, w) in values.windows(2).enumerate() {
        let (Some(f0), Some(f1)) = (w[0], w[1]) else { continue };
        v.checked_points += 1;
        let signed = match direction {
            Direction::Increasing => f1 - f0,
            Direction::Decreasing => f0 - f1,
        };
        let residual = -signed / f0.abs().max(f1.abs());
        v.max_residual = v.max_residual.max(residual);
        if residual > tol {
            v.violations.push(Violation { point: grid.points[i + 1], residual, fixed: grid.describe_fixed() });
        }
    }
    v.pass = v.violations.is_empty();
    Ok(v)
}

fn check_second_log_difference<F: Fn(f64) -> Result<f64>>(
    id: &str,
    f: F,
    grid: &GridSpec,
    tol: f64,
    convex: bool,
) -> Result<PropertyVerdict> {
    if grid.spacing().is_none() {
        return Err(Error::Domain(format!("{id}: log-concavity checks need a uniform grid")));
    }
    let values = evaluate(&f, grid)?;
    let mut v = PropertyVerdict::empty(id);
    v.excluded_points = values.iter().filter(|x| x.is_none()).count();
    for (i, w) in values.windows(3).enumerate() {
        let (Some(lo), Some(mid), Some(hi)) = (w[0], w[1], w[2]) else { continue };
        v.checked_points += 1;
        // concave: f(x-h) f(x+h) / f(x)^2 - 1 must be <= tol
        let d = lo.ln() + hi.ln() - 2.0 * mid.ln();
        let residual = if convex { (-d).exp_m1() } else { d.exp_m1() };
        v.max_residual = v.max_residual.max(residual);
        if residual > tol {
            v.violations.push(Violation { point: grid.points[i + 1], residual, fixed: grid.describe_fixed() });
        }
    }
    v.pass = v.violations.is_empty();
    Ok(v)
}

pub fn check_logconcave<F: Fn(f64) -> Result<f64>>(id: &str, f: F, grid: &GridSpec, tol: f64) -> Result<PropertyVerdict> {
    check_second_log_difference(id, f, grid, tol, false)
}

pub fn check_logconvex<F: Fn(f64) -> Result<f64>>(id: &str, f: F, grid: &GridSpec, tol: f64) -> Result<PropertyVerdict> {
    check_second_log_difference(id, f, grid, tol, true)
}

/// Function families the catalogue evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `Q_nu(a, b)`
    MarcumQ,
    /// `1 - Q_nu(a, b)`
    MarcumP,
    /// `Q_nu(a, b) - Q_nu(0, b)`
    MarcumExcess,
    /// `Q_nu(0, b)`
    MarcumCentral,
    /// `1 - Q_nu(0, b)`
    MarcumCentralP,
    /// `Q(b + a) + Q(b - a)`, the order-1/2 Marcum function
    GaussianPair,
    NuttallNorm,
    NuttallStd,
    /// Normalized lower integral over `[0, b]`.
    NuttallNormLower,
    /// `a^nu` times the normalized lower integral.
    NuttallStdLower,
}

impl Quantity {
    pub fn eval(self, p: Params, oracle: &Oracle) -> Result<f64> {
        let m = || MarcumArgs::new(p.nu, p.a, p.b);
        let n = || NuttallArgs::new(p.mu, p.nu, p.a, p.b);
        Ok(match self {
            Quantity::MarcumQ => oracle.marcum_q(m()?)?.value,
            Quantity::MarcumP => oracle.marcum_p(m()?)?.value,
            Quantity::MarcumExcess => marcum_excess(p.nu, p.a, p.b)?,
            Quantity::MarcumCentral => marcum_central(p.nu, p.b)?,
            Quantity::MarcumCentralP => marcum_central_complement(p.nu, p.b)?,
            Quantity::GaussianPair => gaussian_q(p.b + p.a) + gaussian_q(p.b - p.a),
            Quantity::NuttallNorm => oracle.nuttall_q_norm(n()?)?.value,
            Quantity::NuttallStd => oracle.nuttall_q(n()?)?.value,
            Quantity::NuttallNormLower => oracle.nuttall_lower(n()?)?.value,
            Quantity::NuttallStdLower => oracle.nuttall_lower(n()?)?.value * p.a.powf(p.nu),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Monotone(Direction),
    LogConcave,
    LogConvex,
}

/// One catalogued claim: a property of a quantity on a set of grids.
#[derive(Debug, Clone)]
pub struct Clause {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: VerdictKind,
    pub quantity: Quantity,
    pub property: Property,
    pub grids: Vec<GridSpec>,
    pub expected: Option<bool>,
}

impl Clause {
    pub fn run(&self, oracle: &Oracle, tol: f64) -> Result<PropertyVerdict> {
        let mut verdict = PropertyVerdict::empty(self.id);
        verdict.kind = self.kind;
        verdict.expected = self.expected;
        for g in &self.grids {
            let f = |x: f64| self.quantity.eval(g.params_at(x), oracle);
            let part = match self.property {
                Property::Monotone(d) => check_monotone(self.id, f, g, d, tol)?,
                Property::LogConcave => check_logconcave(self.id, f, g, tol)?,
                Property::LogConvex => check_logconvex(self.id, f, g, tol)?,
            };
            verdict.absorb(part);
        }
        Ok(verdict)
    }
}

fn grids(axis: Axis, lo: f64, hi: f64, h: f64, transform: Transform, fixed: &[Params]) -> Vec<GridSpec> {
    fixed
        .iter()
        .map(|&p| GridSpec::uniform(axis, lo, hi, h, p, transform).expect("catalogue grids are valid"))
        .collect()
}

fn gapped(g: Vec<GridSpec>, gaps: &[f64]) -> Vec<GridSpec> {
    gaps.iter().flat_map(|&d| g.iter().cloned().map(move |x| x.with_mu_gap(d))).collect()
}

fn marcum_sets(pairs: &[(f64, f64)], f: impl Fn(f64, f64) -> Params) -> Vec<Params> {
    pairs.iter().map(|&(x, y)| f(x, y)).collect()
}

fn clause(
    id: &'static str,
    statement: &'static str,
    quantity: Quantity,
    property: Property,
    grids: Vec<GridSpec>,
) -> Clause {
    Clause { id, statement, kind: VerdictKind::Theorem, quantity, property, grids, expected: Some(true) }
}

/// Every theorem and corollary clause plus the order-direction Turán inequality.
pub fn theorem_clauses() -> Vec<Clause> {
    use Axis::*;
    use Direction::*;
    use Property::*;
    use Quantity::*;
    use Transform::*;

    let inc = Monotone(Increasing);
    let dec = Monotone(Decreasing);
    let nu_ab = marcum_sets(&[(0.0, 1.0), (1.0, 2.0), (2.0, 3.0), (4.0, 3.0), (0.5, 6.0), (2.0, 8.0)], |a, b| {
        Params::marcum(0.0, a, b)
    });
    let nu_ab_pos: Vec<Params> = nu_ab.iter().copied().filter(|p| p.a > 0.0).chain([Params::marcum(0.0, 0.5, 1.0)]).collect();
    let a_nub = marcum_sets(&[(0.5, 1.0), (1.0, 3.0), (2.5, 5.0), (4.3, 2.0)], |nu, b| Params::marcum(nu, 0.0, b));
    let b_nua = marcum_sets(&[(0.5, 0.0), (1.3, 1.0), (4.0, 4.0), (7.5, 2.0)], |nu, a| Params::marcum(nu, a, 0.0));
    let central_b: Vec<Params> = [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|&b| Params::marcum(0.0, 0.0, b)).collect();

    // Nuttall fixed sets: (mu, nu, a) with mu + nu >= 1, and the mu >= 1, nu >= 1/2 subset
    let n_b = [
        Params::nuttall(1.0, 0.0, 1.0, 0.0),
        Params::nuttall(2.0, 1.0, 2.0, 0.0),
        Params::nuttall(3.5, 1.5, 1.0, 0.0),
        Params::nuttall(0.5, 0.5, 3.0, 0.0),
        Params::nuttall(5.0, 2.0, 0.5, 0.0),
    ];
    let n_b_d: Vec<Params> = n_b.iter().copied().filter(|p| p.mu >= 1.0 && p.nu >= 0.5).collect();
    let n_nu_ab = [
        Params::nuttall(0.0, 0.0, 0.5, 1.0),
        Params::nuttall(0.0, 0.0, 1.0, 2.0),
        Params::nuttall(0.0, 0.0, 2.0, 3.0),
        Params::nuttall(0.0, 0.0, 4.0, 6.0),
    ];
    let n_nu_ab_zero_b: Vec<Params> = n_nu_ab.iter().copied().chain([Params::nuttall(0.0, 0.0, 1.0, 0.0)]).collect();
    let n_mu = [
        Params::nuttall(0.0, 0.0, 1.0, 1.0),
        Params::nuttall(0.0, 1.0, 2.0, 1.0),
        Params::nuttall(0.0, 2.0, 1.0, 1.5),
        Params::nuttall(0.0, 0.5, 3.0, 4.0),
    ];
    let n_mu_zero_b: Vec<Params> = n_mu.iter().copied().chain([Params::nuttall(0.0, 1.0, 2.0, 0.0)]).collect();
    // order-direction sets: (nu, b) with mu = nu + gap
    let n_a = [
        Params::nuttall(0.0, 0.0, 0.0, 1.0),
        Params::nuttall(0.0, 1.0, 0.0, 2.0),
        Params::nuttall(0.0, 1.5, 0.0, 3.0),
        Params::nuttall(0.0, 3.0, 0.0, 5.0),
    ];
    let n_a_zero_b: Vec<Params> = n_a.iter().copied().chain([Params::nuttall(0.0, 1.0, 0.0, 0.0)]).collect();
    // Nuttall monotonicity sets: mu = nu + mu0 + 1
    let t1_nu = [
        Params::nuttall(0.0, 0.0, 1.0, 2.0),
        Params::nuttall(0.0, 0.0, 2.0, 3.0),
        Params::nuttall(0.0, 0.0, 0.5, 1.0),
    ];
    let t1_nu_std: Vec<Params> = [1.0, 2.0, 4.0]
        .iter()
        .flat_map(|&a| [1.0, 3.0, 6.0].map(|b| Params::nuttall(0.0, 0.0, a, b)))
        .collect();
    let t1_a = [
        Params::nuttall(1.0, 0.0, 0.0, 1.0),
        Params::nuttall(3.5, 1.5, 0.0, 3.0),
        Params::nuttall(4.5, 3.0, 0.0, 5.0),
    ];
    let t1_b = [
        Params::nuttall(1.0, 0.0, 0.5, 0.0),
        Params::nuttall(3.5, 1.5, 2.0, 0.0),
        Params::nuttall(4.5, 3.0, 4.0, 0.0),
    ];

    let ub = 12.0;
    vec![
        clause("theorem1a_nu", "nu -> Q_nu(a,b) is increasing", MarcumQ, inc, grids(Nu, 0.25, 8.0, 0.25, Identity, &nu_ab)),
        clause("theorem1a_a", "a -> Q_nu(a,b) is increasing", MarcumQ, inc, grids(A, 0.0, 6.0, 0.5, Identity, &a_nub)),
        clause("theorem1a_b", "b -> Q_nu(a,b) is decreasing", MarcumQ, dec, grids(B, 0.0, ub, 0.25, Identity, &b_nua)),
        clause(
            "theorem1b_nu",
            "nu -> normalized Q_{mu+nu+1,nu}(a,b) is increasing",
            NuttallNorm,
            inc,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &t1_nu), &[1.0, 2.5]),
        ),
        clause(
            "theorem1b_a",
            "a -> normalized Q_{mu+nu+1,nu}(a,b) is increasing",
            NuttallNorm,
            inc,
            grids(A, 0.5, 6.0, 0.5, Identity, &t1_a),
        ),
        clause(
            "theorem1b_b",
            "b -> normalized Q_{mu+nu+1,nu}(a,b) is decreasing",
            NuttallNorm,
            dec,
            grids(B, 0.0, ub, 0.25, Identity, &t1_b),
        ),
        clause(
            "theorem1c_nu",
            "nu -> Q_{mu+nu+1,nu}(a,b) is increasing for a >= 1",
            NuttallStd,
            inc,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &t1_nu_std), &[1.0, 2.5]),
        ),
        clause("theorem1c_a", "a -> Q_{mu+nu+1,nu}(a,b) is increasing", NuttallStd, inc, grids(A, 0.5, 6.0, 0.5, Identity, &t1_a)),
        clause("theorem1c_b", "b -> Q_{mu+nu+1,nu}(a,b) is decreasing", NuttallStd, dec, grids(B, 0.0, ub, 0.25, Identity, &t1_b)),
        clause(
            "theorem2_sqrt",
            "b -> 1 - Q_nu(a,sqrt b) is log-concave for nu >= 1",
            MarcumP,
            LogConcave,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &marcum_sets(&[(1.0, 0.0), (1.0, 1.0), (1.5, 3.0), (3.0, 1.0), (3.0, 3.0)], |nu, a| Params::marcum(nu, a, 0.0))),
        ),
        clause(
            "theorem2",
            "b -> 1 - Q_nu(a,b) is log-concave for nu >= 3/2",
            MarcumP,
            LogConcave,
            grids(B, 0.25, ub, 0.25, Identity, &marcum_sets(&[(1.5, 0.0), (1.5, 1.0), (2.0, 3.0), (4.0, 1.0), (4.0, 3.0)], |nu, a| Params::marcum(nu, a, 0.0))),
        ),
        clause("theorem3a", "nu -> Q_nu(0,b) is log-concave", MarcumCentral, LogConcave, grids(Nu, 0.25, 8.0, 0.25, Identity, &central_b)),
        clause("theorem3b", "nu -> Q_nu(a,b) is log-concave on [1, inf)", MarcumQ, LogConcave, grids(Nu, 1.0, 8.0, 0.25, Identity, &nu_ab)),
        clause(
            "theorem3c",
            "nu -> Q_nu(a,b) - Q_nu(0,b) is log-concave",
            MarcumExcess,
            LogConcave,
            grids(Nu, 0.25, 6.0, 0.25, Identity, &nu_ab_pos),
        ),
        clause("theorem3d", "nu -> 1 - Q_nu(0,b) is log-concave", MarcumCentralP, LogConcave, grids(Nu, 0.25, 8.0, 0.25, Identity, &central_b)),
        clause("theorem3e", "nu -> 1 - Q_nu(a,b) is log-concave on [1, inf)", MarcumP, LogConcave, grids(Nu, 1.0, 8.0, 0.25, Identity, &nu_ab)),
        clause("theorem4a", "a -> Q_nu(sqrt a, b) is log-concave", MarcumQ, LogConcave, grids(A, 0.0, 36.0, 0.5, Sqrt, &a_nub)),
        clause("theorem4b", "a -> 1 - Q_nu(sqrt a, b) is log-concave", MarcumP, LogConcave, grids(A, 0.0, 36.0, 0.5, Sqrt, &a_nub)),
        clause("theorem4c", "a -> 1 - Q_nu(a,b) is log-concave", MarcumP, LogConcave, grids(A, 0.0, 6.0, 0.5, Identity, &a_nub)),
        clause("theorem5a", "b -> normalized Q_{mu,nu}(a,sqrt b) is log-concave", NuttallNorm, LogConcave, grids(B, 0.0, 30.0, 0.25, Sqrt, &n_b)),
        clause("theorem5b", "b -> normalized Q_{mu,nu}(a,b) is log-concave", NuttallNorm, LogConcave, grids(B, 0.0, ub, 0.25, Identity, &n_b)),
        clause(
            "theorem5c",
            "b -> normalized lower integral at sqrt b is log-concave",
            NuttallNormLower,
            LogConcave,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &n_b),
        ),
        clause(
            "theorem5d",
            "b -> normalized lower integral is log-concave for mu >= 1, nu >= 1/2",
            NuttallNormLower,
            LogConcave,
            grids(B, 0.25, ub, 0.25, Identity, &n_b_d),
        ),
        clause("corollary1a", "b -> Q_{mu,nu}(a,sqrt b) is log-concave", NuttallStd, LogConcave, grids(B, 0.0, 30.0, 0.25, Sqrt, &n_b)),
        clause("corollary1b", "b -> Q_{mu,nu}(a,b) is log-concave", NuttallStd, LogConcave, grids(B, 0.0, ub, 0.25, Identity, &n_b)),
        clause(
            "corollary1c",
            "b -> standard lower integral at sqrt b is log-concave",
            NuttallStdLower,
            LogConcave,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &n_b),
        ),
        clause(
            "corollary1d",
            "b -> standard lower integral is log-concave for mu >= 1, nu >= 1/2",
            NuttallStdLower,
            LogConcave,
            grids(B, 0.25, ub, 0.25, Identity, &n_b_d),
        ),
        clause(
            "theorem6a",
            "nu -> normalized Q_{nu+d,nu}(a,b) is log-concave for d >= 1",
            NuttallNorm,
            LogConcave,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &n_nu_ab_zero_b), &[1.0, 2.5]),
        ),
        clause(
            "theorem6b",
            "nu -> normalized lower integral of order (nu+d, nu) is log-concave",
            NuttallNormLower,
            LogConcave,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &n_nu_ab), &[1.0, 2.5]),
        ),
        clause(
            "corollary2a",
            "nu -> Q_{nu+d,nu}(a,b) is log-concave for d >= 1",
            NuttallStd,
            LogConcave,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &n_nu_ab_zero_b), &[1.0, 2.5]),
        ),
        clause(
            "corollary2b",
            "nu -> standard lower integral of order (nu+d, nu) is log-concave",
            NuttallStdLower,
            LogConcave,
            gapped(grids(Nu, 0.0, 6.0, 0.25, Identity, &n_nu_ab), &[1.0, 2.5]),
        ),
        clause("theorem7a_norm", "mu -> normalized Q_{mu,nu}(a,b) is log-convex", NuttallNorm, LogConvex, grids(Mu, 0.0, 6.0, 0.25, Identity, &n_mu_zero_b)),
        clause("theorem7a_std", "mu -> Q_{mu,nu}(a,b) is log-convex", NuttallStd, LogConvex, grids(Mu, 0.0, 6.0, 0.25, Identity, &n_mu_zero_b)),
        clause(
            "theorem7b_norm",
            "mu -> normalized lower integral is log-convex",
            NuttallNormLower,
            LogConvex,
            grids(Mu, 0.0, 6.0, 0.25, Identity, &n_mu),
        ),
        clause("theorem7b_std", "mu -> standard lower integral is log-convex", NuttallStdLower, LogConvex, grids(Mu, 0.0, 6.0, 0.25, Identity, &n_mu)),
        clause(
            "theorem8a",
            "a -> normalized Q_{nu+d,nu}(sqrt a, b) is log-concave",
            NuttallNorm,
            LogConcave,
            gapped(grids(A, 0.5, 36.0, 0.5, Sqrt, &n_a_zero_b), &[1.0, 2.5]),
        ),
        clause(
            "theorem8b",
            "a -> normalized lower integral at sqrt a is log-concave",
            NuttallNormLower,
            LogConcave,
            gapped(grids(A, 0.5, 36.0, 0.5, Sqrt, &n_a), &[1.0, 2.5]),
        ),
        clause(
            "corollary3a",
            "a -> Q_{nu+d,nu}(sqrt a, b) is log-concave",
            NuttallStd,
            LogConcave,
            gapped(grids(A, 0.5, 36.0, 0.5, Sqrt, &n_a_zero_b), &[1.0, 2.5]),
        ),
        clause(
            "corollary3b",
            "a -> standard lower integral at sqrt a is log-concave",
            NuttallStdLower,
            LogConcave,
            gapped(grids(A, 0.5, 36.0, 0.5, Sqrt, &n_a), &[1.0, 2.5]),
        ),
        clause("turan", "Q_{nu+1}^2 >= Q_nu Q_{nu+2} for nu >= 1", MarcumQ, LogConcave, turan_grids()),
    ]
}

/// Order grids with unit spacing over the standard `(a, b)` grid, starting at
/// 1 and 1.5 so every `nu` in `{1, 1.5, ..., 7.5}` is a center.
pub fn turan_grids() -> Vec<GridSpec> {
    let mut out = Vec::new();
    for &a in &crate::oracle::grid::a() {
        for &b in &crate::oracle::grid::b() {
            for start in [1.0, 1.5] {
                let p = Params::marcum(0.0, a, b);
                out.push(GridSpec::uniform(Axis::Nu, start, 9.5, 1.0, p, Transform::Identity).expect("valid grid"));
            }
        }
    }
    out
}

/// Informational scans of the open conjectures, the two negative remarks,
/// and the standard-Nuttall order monotonicity below `a = 1`.
pub fn conjecture_clauses() -> Vec<Clause> {
    use Axis::*;
    use Property::*;
    use Quantity::*;
    use Transform::*;

    let scan = |id, statement, kind, quantity, property, grids, expected| Clause {
        id,
        statement,
        kind,
        quantity,
        property,
        grids,
        expected,
    };
    let conj_b = |nus: &[f64], as_: &[f64]| -> Vec<Params> {
        nus.iter().flat_map(|&nu| as_.iter().map(move |&a| Params::marcum(nu, a, 0.0))).collect()
    };
    let small_nu = marcum_sets(&[(0.5, 0.5), (1.0, 1.0), (2.0, 2.0), (4.0, 3.0)], |a, b| Params::marcum(0.0, a, b));
    vec![
        scan(
            "conjecture1",
            "b -> Q_nu(a,b) is log-concave for nu in [1/2, 1]",
            VerdictKind::Conjecture,
            MarcumQ,
            LogConcave,
            grids(B, 0.25, 12.0, 0.25, Identity, &conj_b(&[0.5, 0.75, 1.0], &[0.5, 1.0, 2.0, 4.0])),
            Some(true),
        ),
        scan(
            "conjecture1_half",
            "b -> Q(b+a) + Q(b-a) is log-concave",
            VerdictKind::Conjecture,
            GaussianPair,
            LogConcave,
            grids(B, 0.25, 12.0, 0.25, Identity, &conj_b(&[0.5], &[0.0, 0.5, 1.0, 2.0, 4.0, 6.0])),
            Some(true),
        ),
        scan(
            "conjecture2_sqrt",
            "b -> 1 - Q_nu(a,sqrt b) is log-concave for nu in (0, 1)",
            VerdictKind::Conjecture,
            MarcumP,
            LogConcave,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &conj_b(&[0.25, 0.5, 0.75], &[0.5, 1.0, 2.0])),
            Some(true),
        ),
        scan(
            "conjecture2",
            "b -> 1 - Q_nu(a,b) is log-concave for nu in [1/2, 3/2)",
            VerdictKind::Conjecture,
            MarcumP,
            LogConcave,
            grids(B, 0.25, 12.0, 0.25, Identity, &conj_b(&[0.5, 1.0, 1.25], &[0.5, 1.0, 2.0])),
            Some(true),
        ),
        scan(
            "conjecture3_q",
            "nu -> Q_nu(a,b) is log-concave on (0, 1]",
            VerdictKind::Conjecture,
            MarcumQ,
            LogConcave,
            grids(Nu, 0.05, 1.0, 0.05, Identity, &small_nu),
            Some(true),
        ),
        scan(
            "conjecture3_p",
            "nu -> 1 - Q_nu(a,b) is log-concave on (0, 1]",
            VerdictKind::Conjecture,
            MarcumP,
            LogConcave,
            grids(Nu, 0.05, 1.0, 0.05, Identity, &small_nu),
            Some(true),
        ),
        scan(
            "remark1_concave",
            "b -> Q_nu(a,sqrt b) at nu = 0.75, a = 1 is not log-concave",
            VerdictKind::Remark,
            MarcumQ,
            LogConcave,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &[Params::marcum(0.75, 1.0, 0.0)]),
            Some(false),
        ),
        scan(
            "remark1_convex",
            "b -> Q_nu(a,sqrt b) at nu = 0.75, a = 1 is not log-convex",
            VerdictKind::Remark,
            MarcumQ,
            LogConvex,
            grids(B, 0.25, 30.0, 0.25, Sqrt, &[Params::marcum(0.75, 1.0, 0.0)]),
            Some(false),
        ),
        scan(
            "remark2",
            "b -> 1 - Q_nu(a,b) at nu = 0.25 is not log-concave",
            VerdictKind::Remark,
            MarcumP,
            LogConcave,
            grids(B, 0.05, 3.0, 0.05, Identity, &[Params::marcum(0.25, 6.0, 0.0)]),
            Some(false),
        ),
        scan(
            "theorem1c_nu_small_a",
            "nu -> Q_{mu+nu+1,nu}(a,b) for a < 1",
            VerdictKind::Probe,
            NuttallStd,
            Property::Monotone(Direction::Increasing),
            gapped(
                grids(Nu, 0.0, 6.0, 0.25, Identity, &[Params::nuttall(0.0, 0.0, 0.5, 1.0), Params::nuttall(0.0, 0.0, 0.9, 2.0)]),
                &[1.0],
            ),
            None,
        ),
    ]
}

fn run_all(clauses: &[Clause], oracle: &Oracle, tol: f64, filter: Option<&str>) -> Result<Vec<PropertyVerdict>> {
    clauses
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.starts_with(f)))
        .map(|c| c.run(oracle, tol))
        .collect()
}

/// Run every theorem clause; `filter` keeps clauses whose id starts with it.
pub fn run_theorem_suite(oracle: &Oracle, tol: f64, filter: Option<&str>) -> Result<Vec<PropertyVerdict>> {
    run_all(&theorem_clauses(), oracle, tol, filter)
}

pub fn scan_conjectures(oracle: &Oracle, tol: f64, filter: Option<&str>) -> Result<Vec<PropertyVerdict>> {
    run_all(&conjecture_clauses(), oracle, tol, filter)
}
