//! Analytic symbols on the disk: expression trees with exact recursive
//! evaluation and differentiation, level-set membership, and boundary
//! sup-norm estimation.
//!
//! Trees are closed under the operations needed by the rest of the crate
//! (Möbius composition, products, sums), so every derivative is exact —
//! no Taylor truncation enters any downstream integral.

pub mod json;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::UnitDiskPoint;

/// An analytic function of one complex variable with an exact derivative.
///
/// All norm and operator computations go through this trait, so test
/// integrands that are not expression trees (fractional-power families)
/// plug into the same pipeline.
pub trait Analytic: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
    fn deriv(&self, z: Complex64) -> Complex64;
}

impl<'a, T: Analytic + ?Sized> Analytic for &'a T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        (**self).deriv(z)
    }
}

/// Expression tree for an analytic function on the closed disk.
///
/// Invariants (checked by [`SymbolExpr::validate`], which all constructors
/// and the JSON parser run): Blaschke zeros strictly inside the disk,
/// rational denominators nonvanishing on the closed disk, tree depth ≤ 32.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolExpr {
    /// Coefficients in ascending degree.
    Polynomial(Vec<Complex64>),
    /// Finite Blaschke product `Π (a_k − z)/(1 − ā_k z)`.
    BlaschkeProduct(Vec<Complex64>),
    /// Quotient of two polynomials, denominator zero-free on the closed disk.
    Rational {
        num: Vec<Complex64>,
        den: Vec<Complex64>,
    },
    Sum(Vec<SymbolExpr>),
    Product(Vec<SymbolExpr>),
    Scale {
        factor: Complex64,
        child: Box<SymbolExpr>,
    },
    Const(Complex64),
}

pub const MAX_TREE_DEPTH: usize = 32;

/// Boundary sample count used to certify rational denominators.
const DEN_BOUNDARY_SAMPLES: usize = 4096;

impl SymbolExpr {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        let e = SymbolExpr::Polynomial(coeffs);
        e.validate()?;
        Ok(e)
    }

    pub fn blaschke(zeros: Vec<Complex64>) -> Result<Self> {
        let e = SymbolExpr::BlaschkeProduct(zeros);
        e.validate()?;
        Ok(e)
    }

    pub fn rational(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let e = SymbolExpr::Rational { num, den };
        e.validate()?;
        Ok(e)
    }

    pub fn constant(value: Complex64) -> Self {
        SymbolExpr::Const(value)
    }

    /// `z` as a tree.
    pub fn identity() -> Self {
        SymbolExpr::Polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn depth(&self) -> usize {
        match self {
            SymbolExpr::Polynomial(_)
            | SymbolExpr::BlaschkeProduct(_)
            | SymbolExpr::Rational { .. }
            | SymbolExpr::Const(_) => 1,
            SymbolExpr::Sum(children) | SymbolExpr::Product(children) => {
                1 + children.iter().map(SymbolExpr::depth).max().unwrap_or(0)
            }
            SymbolExpr::Scale { child, .. } => 1 + child.depth(),
        }
    }

    /// Check every structural invariant; `path` in errors uses the JSON
    /// schema's field names so parser and direct construction report alike.
    pub fn validate(&self) -> Result<()> {
        self.validate_at("$")
    }

    fn validate_at(&self, path: &str) -> Result<()> {
        if self.depth() > MAX_TREE_DEPTH {
            return Err(Error::config(path, "tree depth exceeds 32"));
        }
        match self {
            SymbolExpr::Polynomial(coeffs) => {
                if coeffs.is_empty() {
                    return Err(Error::config(
                        format!("{path}.coeffs"),
                        "polynomial needs at least one coefficient",
                    ));
                }
                for (i, c) in coeffs.iter().enumerate() {
                    if !c.is_finite() {
                        return Err(Error::config(
                            format!("{path}.coeffs[{i}]"),
                            "coefficient must be finite",
                        ));
                    }
                }
                Ok(())
            }
            SymbolExpr::BlaschkeProduct(zeros) => {
                for (i, a) in zeros.iter().enumerate() {
                    if !a.is_finite() || a.norm() >= 1.0 {
                        return Err(Error::config(
                            format!("{path}.zeros[{i}]"),
                            "Blaschke zero must lie strictly inside the unit disk",
                        ));
                    }
                }
                Ok(())
            }
            SymbolExpr::Rational { num, den } => {
                if num.is_empty() {
                    return Err(Error::config(
                        format!("{path}.num"),
                        "numerator needs at least one coefficient",
                    ));
                }
                if den.is_empty() {
                    return Err(Error::config(
                        format!("{path}.den"),
                        "denominator needs at least one coefficient",
                    ));
                }
                for (label, poly) in [("num", num), ("den", den)] {
                    for (i, c) in poly.iter().enumerate() {
                        if !c.is_finite() {
                            return Err(Error::config(
                                format!("{path}.{label}[{i}]"),
                                "coefficient must be finite",
                            ));
                        }
                    }
                }
                check_denominator(den, &format!("{path}.den"))
            }
            SymbolExpr::Sum(children) | SymbolExpr::Product(children) => {
                if children.is_empty() {
                    return Err(Error::config(
                        format!("{path}.children"),
                        "needs at least one child",
                    ));
                }
                for (i, c) in children.iter().enumerate() {
                    c.validate_at(&format!("{path}.children[{i}]"))?;
                }
                Ok(())
            }
            SymbolExpr::Scale { factor, child } => {
                if !factor.is_finite() {
                    return Err(Error::config(
                        format!("{path}.factor"),
                        "scale factor must be finite",
                    ));
                }
                child.validate_at(&format!("{path}.child"))
            }
            SymbolExpr::Const(v) => {
                if !v.is_finite() {
                    return Err(Error::config(
                        format!("{path}.value"),
                        "constant must be finite",
                    ));
                }
                Ok(())
            }
        }
    }

    fn eval_inner(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolExpr::Polynomial(coeffs) => poly_eval(coeffs, z),
            SymbolExpr::BlaschkeProduct(zeros) => {
                let mut v = Complex64::new(1.0, 0.0);
                for a in zeros {
                    v *= blaschke_factor(*a, z);
                }
                v
            }
            SymbolExpr::Rational { num, den } => poly_eval(num, z) / poly_eval(den, z),
            SymbolExpr::Sum(children) => children.iter().map(|c| c.eval_inner(z)).sum(),
            SymbolExpr::Product(children) => children
                .iter()
                .map(|c| c.eval_inner(z))
                .fold(Complex64::new(1.0, 0.0), |a, b| a * b),
            SymbolExpr::Scale { factor, child } => *factor * child.eval_inner(z),
            SymbolExpr::Const(v) => *v,
        }
    }

    fn deriv_inner(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolExpr::Polynomial(coeffs) => {
                let mut acc = Complex64::new(0.0, 0.0);
                // Horner on the derivative coefficients, descending degree.
                for k in (1..coeffs.len()).rev() {
                    acc = acc * z + coeffs[k] * (k as f64);
                }
                acc
            }
            SymbolExpr::BlaschkeProduct(zeros) => {
                // product rule over the factors
                let vals: Vec<Complex64> = zeros.iter().map(|a| blaschke_factor(*a, z)).collect();
                let mut total = Complex64::new(0.0, 0.0);
                for (k, a) in zeros.iter().enumerate() {
                    let mut term = blaschke_factor_deriv(*a, z);
                    for (j, v) in vals.iter().enumerate() {
                        if j != k {
                            term *= *v;
                        }
                    }
                    total += term;
                }
                total
            }
            SymbolExpr::Rational { num, den } => {
                let n = poly_eval(num, z);
                let d = poly_eval(den, z);
                let np = poly_eval_deriv(num, z);
                let dp = poly_eval_deriv(den, z);
                (np * d - n * dp) / (d * d)
            }
            SymbolExpr::Sum(children) => children.iter().map(|c| c.deriv_inner(z)).sum(),
            SymbolExpr::Product(children) => {
                // running (value, derivative) fold: (uv)' = u'v + uv'
                let mut val = Complex64::new(1.0, 0.0);
                let mut der = Complex64::new(0.0, 0.0);
                for c in children {
                    let cv = c.eval_inner(z);
                    let cd = c.deriv_inner(z);
                    der = der * cv + val * cd;
                    val *= cv;
                }
                der
            }
            SymbolExpr::Scale { factor, child } => *factor * child.deriv_inner(z),
            SymbolExpr::Const(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Tree computing `self(ψ_a(z))` with `ψ_a(z) = (a−z)/(1−āz)`.
    ///
    /// Used for Möbius-covariance checks: level sets of the composed
    /// symbol over `D_η(0)` match level sets of the original over `D_η(a)`.
    pub fn compose_with_psi(&self, a: UnitDiskPoint) -> SymbolExpr {
        let ac = a.c();
        // ψ_a = N/D with N = a − z, D = 1 − ā z
        let n = vec![ac, Complex64::new(-1.0, 0.0)];
        let d = vec![Complex64::new(1.0, 0.0), -ac.conj()];
        match self {
            SymbolExpr::Polynomial(coeffs) => {
                let (p, q) = poly_compose_rational(coeffs, &n, &d);
                SymbolExpr::Rational { num: p, den: q }
            }
            SymbolExpr::BlaschkeProduct(zeros) => {
                // ψ_w ∘ ψ_a = [(w−a) + (1−wā)z] / [(1−w̄a) + (w̄−ā)z]
                let factors: Vec<SymbolExpr> = zeros
                    .iter()
                    .map(|w| SymbolExpr::Rational {
                        num: vec![w - ac, Complex64::new(1.0, 0.0) - w * ac.conj()],
                        den: vec![Complex64::new(1.0, 0.0) - w.conj() * ac, w.conj() - ac.conj()],
                    })
                    .collect();
                if factors.len() == 1 {
                    factors.into_iter().next().unwrap()
                } else if factors.is_empty() {
                    SymbolExpr::Const(Complex64::new(1.0, 0.0))
                } else {
                    SymbolExpr::Product(factors)
                }
            }
            SymbolExpr::Rational { num, den } => {
                let (pn, qn) = poly_compose_rational(num, &n, &d);
                let (pd, qd) = poly_compose_rational(den, &n, &d);
                // (pn/qn)/(pd/qd) = pn·qd / (qn·pd)
                SymbolExpr::Rational {
                    num: poly_mul(&pn, &qd),
                    den: poly_mul(&qn, &pd),
                }
            }
            SymbolExpr::Sum(children) => {
                SymbolExpr::Sum(children.iter().map(|c| c.compose_with_psi(a)).collect())
            }
            SymbolExpr::Product(children) => {
                SymbolExpr::Product(children.iter().map(|c| c.compose_with_psi(a)).collect())
            }
            SymbolExpr::Scale { factor, child } => SymbolExpr::Scale {
                factor: *factor,
                child: Box::new(child.compose_with_psi(a)),
            },
            SymbolExpr::Const(v) => SymbolExpr::Const(*v),
        }
    }
}

impl Analytic for SymbolExpr {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_inner(z)
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        self.deriv_inner(z)
    }
}

fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// d/dz (a−z)/(1−āz) = −(1−|a|²)/(1−āz)².
fn blaschke_factor_deriv(a: Complex64, z: Complex64) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - a.conj() * z;
    Complex64::new(-(1.0 - a.norm_sqr()), 0.0) / (d * d)
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_eval_deriv(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..coeffs.len()).rev() {
        acc = acc * z + coeffs[k] * (k as f64);
    }
    acc
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Vec<Complex64>, term: &[Complex64], s: Complex64) {
    if acc.len() < term.len() {
        acc.resize(term.len(), Complex64::new(0.0, 0.0));
    }
    for (i, t) in term.iter().enumerate() {
        acc[i] += s * t;
    }
}

/// For polynomial p and linear n, d: returns (P, Q) with p(n/d) = P/Q,
/// Q = d^deg(p).
fn poly_compose_rational(
    p: &[Complex64],
    n: &[Complex64],
    d: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let deg = p.len() - 1;
    // powers n^k, d^(deg-k)
    let mut out: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    for (k, c) in p.iter().enumerate() {
        let mut term = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..k {
            term = poly_mul(&term, n);
        }
        for _ in 0..(deg - k) {
            term = poly_mul(&term, d);
        }
        poly_add_scaled(&mut out, &term, *c);
    }
    let mut q = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..deg {
        q = poly_mul(&q, d);
    }
    (out, q)
}

/// Certify a rational denominator nonvanishing on the closed disk: min
/// modulus over a 4096-point boundary grid (relative to the max, so
/// poles just outside the circle stay admissible), a winding count of
/// the boundary curve around 0 (argument principle counts interior
/// zeros), and a coarse interior probe grid.
fn check_denominator(den: &[Complex64], path: &str) -> Result<()> {
    let mut min_mod = f64::INFINITY;
    let mut max_mod = 0.0f64;
    let mut winding = 0.0f64;
    let mut prev = poly_eval(den, Complex64::new(1.0, 0.0));
    min_mod = min_mod.min(prev.norm());
    max_mod = max_mod.max(prev.norm());
    for k in 1..=DEN_BOUNDARY_SAMPLES {
        let th = std::f64::consts::TAU * (k as f64) / (DEN_BOUNDARY_SAMPLES as f64);
        let v = poly_eval(den, Complex64::from_polar(1.0, th));
        min_mod = min_mod.min(v.norm());
        max_mod = max_mod.max(v.norm());
        winding += (v / prev).arg();
        prev = v;
    }
    if !(min_mod > 1e-12 * max_mod) {
        return Err(Error::config(
            path,
            "denominator vanishes (or nearly) on the unit circle",
        ));
    }
    let turns = (winding / std::f64::consts::TAU).round();
    if turns != 0.0 {
        return Err(Error::config(
            path,
            format!("denominator has {turns} zero(s) inside the unit disk"),
        ));
    }
    // interior probes, a cheap second opinion
    for i in 1..16 {
        let r = i as f64 / 16.0;
        for j in 0..64 {
            let th = std::f64::consts::TAU * (j as f64) / 64.0;
            if poly_eval(den, Complex64::from_polar(r, th)).norm() <= 1e-12 * max_mod {
                return Err(Error::config(
                    path,
                    "denominator vanishes at an interior grid point",
                ));
            }
        }
    }
    Ok(())
}

/// Level set `G_c = {z : |g(z)| > c}`.
#[derive(Debug, Clone)]
pub struct LevelSetSpec {
    pub symbol: SymbolExpr,
    pub threshold: f64,
}

impl LevelSetSpec {
    pub fn new(symbol: SymbolExpr, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) {
            return Err(Error::config(
                "level set threshold",
                format!("c = {threshold} must be positive"),
            ));
        }
        Ok(LevelSetSpec { symbol, threshold })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.symbol.eval(z).norm() > self.threshold
    }
}

/// Evaluate with a finiteness check.
pub fn evaluate(expr: &SymbolExpr, z: UnitDiskPoint) -> Result<Complex64> {
    let v = expr.eval(z.c());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::numerical(format!(
            "symbol evaluation overflowed at z = {} + {}i",
            z.re, z.im
        )))
    }
}

/// Exact derivative with a finiteness check.
pub fn derivative(expr: &SymbolExpr, z: UnitDiskPoint) -> Result<Complex64> {
    let v = expr.deriv(z.c());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::numerical(format!(
            "symbol derivative overflowed at z = {} + {}i",
            z.re, z.im
        )))
    }
}

/// Strict membership `|g(z)| > c`.
pub fn level_set_member(spec: &LevelSetSpec, z: UnitDiskPoint) -> bool {
    spec.contains(z.c())
}

/// Result of boundary sup-norm sampling: a lower bound for `‖g‖_∞`
/// together with the maximizing angle.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub theta: f64,
}

/// Max of `|g|` over `samples` uniform points on the circle of radius
/// `r`. By the maximum principle interior sampling cannot do better, so
/// only the circle is probed.
pub fn sup_norm_estimate_at(expr: &SymbolExpr, samples: usize, r: f64) -> SupNormEstimate {
    let mut best = SupNormEstimate {
        value: f64::NEG_INFINITY,
        theta: 0.0,
    };
    for k in 0..samples.max(1) {
        let th = std::f64::consts::TAU * (k as f64) / (samples.max(1) as f64);
        let v = expr.eval(Complex64::from_polar(r, th)).norm();
        if v > best.value {
            best = SupNormEstimate {
                value: v,
                theta: th,
            };
        }
    }
    best
}

/// [`sup_norm_estimate_at`] on the default truncation circle.
pub fn sup_norm_estimate(expr: &SymbolExpr, samples: usize) -> SupNormEstimate {
    sup_norm_estimate_at(expr, samples, crate::quadrature::DEFAULT_R_MAX)
}
