//! The integral operator `S_g f(z) = ∫₀ᶻ f′(w) g(w) dw`, the extremal
//! test families, and bounded-below / dominating-set ratio estimation.
//!
//! `(S_g f)′ = f′·g` exactly, so every derivative-based norm of `S_g f`
//! is computed without path integration; the segment rule is used only
//! for the classical Hardy and Bergman norms (which need values of
//! `S_g f`) and for fundamental-theorem tests.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::UnitDiskPoint;
use crate::norms::{space_norm, NormContext, SpaceSpec};
use crate::quadrature::{integrate_disk, integrate_region, integrate_segment, PolarGrid, RegionIndicator};
use crate::symbols::{Analytic, SymbolExpr};

/// `(S_g f)′(z) = f′(z)·g(z)`.
pub fn sg_derivative<G: Analytic + ?Sized, F: Analytic + ?Sized>(
    g: &G,
    f: &F,
    z: Complex64,
) -> Complex64 {
    f.deriv(z) * g.eval(z)
}

/// `S_g f(z)` by composite Gauss–Legendre along the segment `[0, z]`.
pub fn sg_apply<G: Analytic + ?Sized, F: Analytic + ?Sized>(
    g: &G,
    f: &F,
    z: Complex64,
    panels: usize,
) -> Result<Complex64> {
    integrate_segment(|w| f.deriv(w) * g.eval(w), z, panels)
}

/// `S_g f` as an analytic function: exact derivative, values by path
/// integration.
pub struct SgImage<'a, G: Analytic + ?Sized, F: Analytic + ?Sized> {
    pub g: &'a G,
    pub f: &'a F,
    pub panels: usize,
}

impl<'a, G: Analytic + ?Sized, F: Analytic + ?Sized> Analytic for SgImage<'a, G, F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        match sg_apply(self.g, self.f, z, self.panels) {
            Ok(v) => v,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        sg_derivative(self.g, self.f, z)
    }
}

/// `f − f(0)`, the representative with value 0 at the origin.
pub struct ShiftedToZero<F: Analytic> {
    f: F,
    f0: Complex64,
}

impl<F: Analytic> ShiftedToZero<F> {
    pub fn new(f: F) -> Self {
        let f0 = f.eval(Complex64::new(0.0, 0.0));
        ShiftedToZero { f, f0 }
    }
}

impl<F: Analytic> Analytic for ShiftedToZero<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.f.eval(z) - self.f0
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        self.f.deriv(z)
    }
}

/// The Möbius test function `ψ_α − α` as an expression tree.
pub fn moebius_test(alpha: UnitDiskPoint) -> SymbolExpr {
    SymbolExpr::Sum(vec![
        SymbolExpr::BlaschkeProduct(vec![alpha.c()]),
        SymbolExpr::Const(-alpha.c()),
    ])
}

/// Besov test function: value `(p/(2ᾱ))(1−|α|²)^{2/p} [(1−ᾱz)^{−2/p} − 1]`,
/// derivative `(1−|α|²)^{2/p} (1−ᾱz)^{−(2/p+1)}` (principal branch;
/// `Re(1−ᾱz) > 0` on the disk keeps it single-valued). Vanishes at 0.
pub struct BesovTestFn {
    alpha_conj: Complex64,
    scale: Complex64,
    amp: f64,
    exponent: f64,
}

/// Build the Besov test function; α = 0 is rejected (the value formula
/// divides by ᾱ).
pub fn besov_test(alpha: UnitDiskPoint, p: f64) -> Result<BesovTestFn> {
    if !(p > 1.0) {
        return Err(Error::config("p", "Besov test needs 1 < p < ∞"));
    }
    let a = alpha.c();
    if a.norm() == 0.0 {
        return Err(Error::config("alpha", "Besov test needs α ≠ 0"));
    }
    let amp = (1.0 - a.norm_sqr()).powf(2.0 / p);
    Ok(BesovTestFn {
        alpha_conj: a.conj(),
        scale: Complex64::new(p, 0.0) / (2.0 * a.conj()),
        amp,
        exponent: 2.0 / p,
    })
}

impl Analytic for BesovTestFn {
    fn eval(&self, z: Complex64) -> Complex64 {
        let base = Complex64::new(1.0, 0.0) - self.alpha_conj * z;
        self.scale * self.amp * (base.powf(-self.exponent) - 1.0)
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        let base = Complex64::new(1.0, 0.0) - self.alpha_conj * z;
        base.powf(-(self.exponent + 1.0)) * self.amp
    }
}

/// 64-bit linear congruential generator used for reproducible random
/// polynomials:
///
/// `state_{k+1} = state_k · 6364136223846793005 + 1442695040888963407 (mod 2⁶⁴)`,
/// `u_k = (state_{k+1} >> 11) / 2⁵³ ∈ [0, 1)`.
///
/// The seed is the initial state; the draw sequence is the contract, so
/// any implementation of this recurrence reproduces the same families.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_f64(&mut self) -> f64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.state >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Complex draw from the unit square `[0,1) × [0,1)`.
    pub fn next_complex(&mut self) -> Complex64 {
        let re = self.next_f64();
        let im = self.next_f64();
        Complex64::new(re, im)
    }
}

/// Random polynomial of the given degree, coefficients from the unit
/// square (ascending degree, constant first).
pub fn random_polynomial(rng: &mut Lcg, maxdeg: usize) -> SymbolExpr {
    let coeffs: Vec<Complex64> = (0..=maxdeg).map(|_| rng.next_complex()).collect();
    SymbolExpr::Polynomial(coeffs)
}

/// One test function with a human-readable label.
#[derive(Clone)]
pub struct FamilyMember {
    pub label: String,
    pub f: Arc<dyn Analytic + Send + Sync>,
}

/// The families used to probe bounded-below behavior.
#[derive(Debug, Clone)]
pub enum TestFamily {
    /// `ψ_α − α` over an α-net (the Hardy/BMOA extremal family).
    MoebiusHardy { alpha_net: Vec<UnitDiskPoint> },
    /// The Besov extremal family with exponent p.
    BesovTest { p: f64, alpha_net: Vec<UnitDiskPoint> },
    /// Monomials z, z², …, z^maxdeg.
    Monomials { maxdeg: usize },
    /// Reproducible random polynomials (see [`Lcg`]).
    RandomPolynomials {
        count: usize,
        maxdeg: usize,
        seed: u64,
    },
}

impl TestFamily {
    pub fn resolve(&self) -> Result<Vec<FamilyMember>> {
        match self {
            TestFamily::MoebiusHardy { alpha_net } => {
                if alpha_net.is_empty() {
                    return Err(Error::config("alpha_net", "must be nonempty"));
                }
                Ok(alpha_net
                    .iter()
                    .map(|a| FamilyMember {
                        label: format!("psi({:.6},{:.6})-a", a.re, a.im),
                        f: Arc::new(moebius_test(*a)),
                    })
                    .collect())
            }
            TestFamily::BesovTest { p, alpha_net } => {
                if alpha_net.is_empty() {
                    return Err(Error::config("alpha_net", "must be nonempty"));
                }
                alpha_net
                    .iter()
                    .map(|a| {
                        Ok(FamilyMember {
                            label: format!("besov(p={p},a={:.6},{:.6})", a.re, a.im),
                            f: Arc::new(besov_test(*a, *p)?) as Arc<dyn Analytic + Send + Sync>,
                        })
                    })
                    .collect()
            }
            TestFamily::Monomials { maxdeg } => {
                if *maxdeg == 0 {
                    return Err(Error::config("maxdeg", "monomial family needs maxdeg ≥ 1"));
                }
                Ok((1..=*maxdeg)
                    .map(|k| {
                        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
                        coeffs[k] = Complex64::new(1.0, 0.0);
                        FamilyMember {
                            label: format!("z^{k}"),
                            f: Arc::new(SymbolExpr::Polynomial(coeffs)),
                        }
                    })
                    .collect())
            }
            TestFamily::RandomPolynomials {
                count,
                maxdeg,
                seed,
            } => {
                if *count == 0 {
                    return Err(Error::config("count", "random family needs count ≥ 1"));
                }
                let mut rng = Lcg::new(*seed);
                Ok((0..*count)
                    .map(|i| FamilyMember {
                        label: format!("random#{i}(seed={seed},deg={maxdeg})"),
                        f: Arc::new(random_polynomial(&mut rng, *maxdeg)),
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRatio {
    pub label: String,
    pub ratio: f64,
    pub norm_f: f64,
    pub norm_sg_f: f64,
}

/// Result of an infimum scan of `‖S_g f‖/‖f‖` over a family.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub inf_ratio: f64,
    /// Label of the minimizing member.
    pub witness: String,
    pub per_sample: Vec<SampleRatio>,
    pub space: SpaceSpec,
}

const SEGMENT_PANELS: usize = 24;

/// Infimum of `‖S_g f‖ / ‖f‖` over the family in the given space.
///
/// Members are shifted to f(0) = 0 first (the operator kills constants).
/// Derivative-based norms see `(S_g f)′ = f′g` exactly; the classical
/// Hardy and Bergman norms evaluate `S_g f` by the segment rule.
pub fn lower_bound_estimate<G: Analytic + ?Sized>(
    g: &G,
    space: &SpaceSpec,
    family: &TestFamily,
    ctx: &NormContext,
) -> Result<LowerBoundReport> {
    space.validate()?;
    let members = family.resolve()?;
    let mut per_sample = Vec::with_capacity(members.len());
    for member in &members {
        let f = ShiftedToZero::new(member.f.as_ref());
        let norm_f = space_norm(&f, space, ctx)?.value;
        if !(norm_f > 1e-12) {
            return Err(Error::degenerate(format!(
                "family member {} has zero norm in {}",
                member.label,
                space.label()
            )));
        }
        let image = SgImage {
            g,
            f: &f,
            panels: SEGMENT_PANELS,
        };
        let norm_sg_f = space_norm(&image, space, ctx)?.value;
        per_sample.push(SampleRatio {
            label: member.label.clone(),
            ratio: norm_sg_f / norm_f,
            norm_f,
            norm_sg_f,
        });
    }
    let mut best = 0usize;
    for (i, s) in per_sample.iter().enumerate() {
        if s.ratio < per_sample[best].ratio {
            best = i;
        }
    }
    Ok(LowerBoundReport {
        inf_ratio: per_sample[best].ratio,
        witness: per_sample[best].label.clone(),
        per_sample,
        space: *space,
    })
}

/// Min over the members of
/// `∬_G |f|^p (1−|z|²)^γ dA / ∬_𝔻 |f|^p (1−|z|²)^γ dA`
/// — the measured dominating-set constant for the region.
pub fn reverse_carleson_ratio_members(
    region: &RegionIndicator,
    p: f64,
    gamma: f64,
    members: &[FamilyMember],
    grid: &PolarGrid,
) -> Result<LowerBoundReport> {
    let spec = SpaceSpec::bergman(p, gamma);
    spec.validate()?;
    if members.is_empty() {
        return Err(Error::config("family", "must be nonempty"));
    }
    let mut per_sample = Vec::with_capacity(members.len());
    for member in members {
        let f = member.f.as_ref();
        let weight = |z: Complex64| f.eval(z).norm().powf(p) * (1.0 - z.norm_sqr()).powf(gamma);
        let den = integrate_disk(weight, grid)?;
        if !(den > 1e-14) {
            return Err(Error::degenerate(format!(
                "family member {} has zero Bergman mass",
                member.label
            )));
        }
        let num = integrate_region(weight, region, grid)?;
        per_sample.push(SampleRatio {
            label: member.label.clone(),
            ratio: num / den,
            norm_f: den,
            norm_sg_f: num,
        });
    }
    let mut best = 0usize;
    for (i, s) in per_sample.iter().enumerate() {
        if s.ratio < per_sample[best].ratio {
            best = i;
        }
    }
    Ok(LowerBoundReport {
        inf_ratio: per_sample[best].ratio,
        witness: per_sample[best].label.clone(),
        per_sample,
        space: spec,
    })
}

/// [`reverse_carleson_ratio_members`] with a named family.
pub fn reverse_carleson_ratio(
    region: &RegionIndicator,
    p: f64,
    gamma: f64,
    family: &TestFamily,
    grid: &PolarGrid,
) -> Result<LowerBoundReport> {
    let members = family.resolve()?;
    reverse_carleson_ratio_members(region, p, gamma, &members, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{default_beta_net, DEFAULT_N_BOUNDARY};
    use crate::quadrature::{make_grid, DEFAULT_R_MAX};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn udp(re: f64, im: f64) -> UnitDiskPoint {
        UnitDiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn sg_derivative_values() {
        let one = SymbolExpr::constant(c(1.0, 0.0));
        let z = SymbolExpr::identity();
        let z2 = SymbolExpr::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let at = c(0.5, 0.0);
        assert_relative_eq!(sg_derivative(&one, &z2, at).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(sg_derivative(&z, &z, at).re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(sg_derivative(&z, &z2, at).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn sg_apply_values() {
        let one = SymbolExpr::constant(c(1.0, 0.0));
        let z = SymbolExpr::identity();
        let z2 = SymbolExpr::polynomial(vec![c(0.3, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let at = c(0.4, 0.3);
        // g ≡ 1: S_g f = f − f(0)
        let v = sg_apply(&one, &z2, at, 2).unwrap();
        assert!((v - (z2.eval(at) - c(0.3, 0.0))).norm() < 1e-14);
        // f = z, g = z: z²/2 exactly
        let v = sg_apply(&z, &z, at, 1).unwrap();
        assert!((v - at * at / 2.0).norm() < 1e-15);
        // f = z, g = 1/(1−z/2) at 0.5 → −2 ln(0.75)
        let g = SymbolExpr::rational(vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
        let v = sg_apply(&g, &z, c(0.5, 0.0), 4).unwrap();
        assert!((v.re + 2.0 * (0.75f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn fundamental_theorem_of_calculus() {
        let g = SymbolExpr::rational(vec![c(1.0, 0.0), c(0.5, 0.2)], vec![c(2.0, 0.0), c(0.3, 0.0)])
            .unwrap();
        let f = SymbolExpr::polynomial(vec![c(0.1, 0.0), c(1.0, -0.5), c(0.0, 0.7)]).unwrap();
        let mut rng = Lcg::new(7);
        for _ in 0..100 {
            let r = 0.8 * rng.next_f64();
            let th = std::f64::consts::TAU * rng.next_f64();
            let z = Complex64::from_polar(r, th);
            let h = 1e-5;
            let hp = sg_apply(&g, &f, z + c(h, 0.0), 16).unwrap();
            let hm = sg_apply(&g, &f, z - c(h, 0.0), 16).unwrap();
            let fd = (hp - hm) / (2.0 * h);
            let exact = sg_derivative(&g, &f, z);
            assert!(
                (fd - exact).norm() <= 1e-5 * exact.norm().max(1e-3),
                "z={z}: {fd} vs {exact}"
            );
        }
    }

    #[test]
    fn moebius_test_values() {
        // α = 0 → −z
        let f = moebius_test(udp(0.0, 0.0));
        assert_relative_eq!(f.eval(c(0.3, 0.0)).re, -0.3, epsilon = 1e-15);
        // f(0) = 0 and f'(0) = −(1−|α|²)
        let f = moebius_test(udp(0.6, 0.0));
        assert!(f.eval(c(0.0, 0.0)).norm() < 1e-15);
        assert_relative_eq!(f.deriv(c(0.0, 0.0)).re, -0.64, epsilon = 1e-15);
        // ‖ψ_α−α‖²_{H²} = 1 − |α|² (series oracle)
        let n = crate::norms::hardy_classical(&f, 2.0, 16384).unwrap();
        assert!((n.value * n.value - 0.64).abs() < 0.01 * 0.64);
    }

    #[test]
    fn besov_test_values() {
        assert!(besov_test(udp(0.0, 0.0), 2.0).is_err());
        let f = besov_test(udp(0.6, 0.0), 2.0).unwrap();
        assert!(f.eval(c(0.0, 0.0)).norm() < 1e-15);
        assert_relative_eq!(f.deriv(c(0.0, 0.0)).norm(), 0.64, epsilon = 1e-12);
        // p = 2: f_α' = (1−|α|²)/(1−ᾱz)², a plain rational — check against it
        let a = 0.6;
        for th in [0.0, 1.0, 3.0] {
            let z = Complex64::from_polar(0.7, th);
            let exact = c(1.0 - a * a, 0.0) / ((c(1.0, 0.0) - a * z) * (c(1.0, 0.0) - a * z));
            assert!((f.deriv(z) - exact).norm() < 1e-12);
        }
        // ‖f_α‖_{B²}² → series oracle: (1−|α|²)² Σ (k+1)|α|^{2k} = 1
        let g = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
        let n = crate::norms::besov_norm(&f, 2.0, &g).unwrap();
        let mut series = 0.0;
        for k in 0..4000 {
            series += ((k + 1) as f64) * (a * a).powi(k as i32);
        }
        let oracle = ((1.0 - a * a) * (1.0 - a * a) * series).sqrt();
        assert!((n.value - oracle).abs() < 0.02 * oracle, "{} vs {oracle}", n.value);
    }

    #[test]
    fn lower_bound_constant_symbols() {
        let grid = make_grid(8, 16, DEFAULT_R_MAX).unwrap();
        let net = default_beta_net();
        let ctx = NormContext {
            grid: &grid,
            beta_net: &net,
            n_boundary: 1024,
            n_circle: 8192,
        };
        let family = TestFamily::MoebiusHardy {
            alpha_net: vec![udp(0.0, 0.0), udp(0.5, 0.0), udp(0.8, 0.0)],
        };
        let one = SymbolExpr::constant(c(1.0, 0.0));
        for spec in [
            SpaceSpec::hardy(2.0),
            SpaceSpec::bmoa(),
            SpaceSpec::besov(2.0),
        ] {
            let rep = lower_bound_estimate(&one, &spec, &family, &ctx).unwrap();
            for s in &rep.per_sample {
                assert!((s.ratio - 1.0).abs() < 1e-6, "{}: {}", s.label, s.ratio);
            }
        }
        let lam = SymbolExpr::constant(c(0.0, 0.35));
        let rep = lower_bound_estimate(&lam, &SpaceSpec::hardy(2.0), &family, &ctx).unwrap();
        assert!((rep.inf_ratio - 0.35).abs() < 1e-6);
    }

    #[test]
    fn lower_bound_scale_invariant() {
        let grid = make_grid(7, 16, DEFAULT_R_MAX).unwrap();
        let net: Vec<UnitDiskPoint> = default_beta_net()
            .into_iter()
            .filter(|b| b.abs() < 0.7)
            .collect();
        let ctx = NormContext {
            grid: &grid,
            beta_net: &net,
            n_boundary: 512,
            n_circle: 4096,
        };
        let g = SymbolExpr::rational(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        let base = TestFamily::MoebiusHardy {
            alpha_net: vec![udp(0.5, 0.0)],
        };
        let rep = lower_bound_estimate(&g, &SpaceSpec::besov(2.0), &base, &ctx).unwrap();
        // scaled member by hand: Scale(2, ψ_α − α)
        let scaled = ShiftedToZero::new(SymbolExpr::Scale {
            factor: c(2.0, 0.0),
            child: Box::new(moebius_test(udp(0.5, 0.0))),
        });
        let nf = crate::norms::besov_norm(&scaled, 2.0, &grid).unwrap().value;
        let img = SgImage {
            g: &g,
            f: &scaled,
            panels: 8,
        };
        let ns = crate::norms::besov_norm(&img, 2.0, &grid).unwrap().value;
        assert!((ns / nf - rep.inf_ratio).abs() < 1e-12 * rep.inf_ratio.max(1e-9));
    }

    #[test]
    fn lower_bound_detects_boundary_degeneracy() {
        // g = (1−z)/2 kills mass near z = 1, where ψ_α − α concentrates
        let grid = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
        let net = default_beta_net();
        let ctx = NormContext {
            grid: &grid,
            beta_net: &net,
            n_boundary: DEFAULT_N_BOUNDARY,
            n_circle: 65536,
        };
        let g = SymbolExpr::rational(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        let family = TestFamily::MoebiusHardy {
            alpha_net: vec![udp(0.0, 0.0), udp(0.9, 0.0), udp(0.99, 0.0), udp(0.999, 0.0)],
        };
        let rep = lower_bound_estimate(&g, &SpaceSpec::hardy(2.0), &family, &ctx).unwrap();
        let ratios: Vec<f64> = rep.per_sample.iter().map(|s| s.ratio).collect();
        for w in ratios.windows(2) {
            assert!(w[1] < w[0], "ratios should decrease toward the boundary: {ratios:?}");
        }
        assert!(ratios[3] < 0.15, "{ratios:?}");
        assert_eq!(rep.witness, rep.per_sample[3].label);
    }

    #[test]
    fn zero_norm_member_rejected() {
        let grid = make_grid(6, 16, DEFAULT_R_MAX).unwrap();
        let net = vec![udp(0.0, 0.0)];
        let ctx = NormContext {
            grid: &grid,
            beta_net: &net,
            n_boundary: 256,
            n_circle: 1024,
        };
        // the constant family member shifts to 0
        let family = TestFamily::RandomPolynomials {
            count: 1,
            maxdeg: 0,
            seed: 3,
        };
        let g = SymbolExpr::identity();
        let err = lower_bound_estimate(&g, &SpaceSpec::hardy(2.0), &family, &ctx).unwrap_err();
        assert!(err.to_string().contains("zero norm"));
    }

    #[test]
    fn reverse_carleson_basic_regions() {
        // ring boundaries at multiples of 0.05 keep the |z| = 0.25 circle
        // on a cell edge, so the annulus value is clean
        let grid = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
        let one = FamilyMember {
            label: "1".into(),
            f: Arc::new(SymbolExpr::constant(c(1.0, 0.0))),
        };
        let full = RegionIndicator::full();
        let rep = reverse_carleson_ratio_members(&full, 2.0, 0.0, &[one.clone()], &grid).unwrap();
        assert!((rep.inf_ratio - 1.0).abs() < 1e-12);

        let annulus = RegionIndicator::new(|z| z.norm() > 0.25);
        let rep = reverse_carleson_ratio_members(&annulus, 2.0, 0.0, &[one], &grid).unwrap();
        let exact = (DEFAULT_R_MAX * DEFAULT_R_MAX - 0.0625) / (DEFAULT_R_MAX * DEFAULT_R_MAX);
        assert!((rep.inf_ratio - exact).abs() < 0.01 * exact, "{}", rep.inf_ratio);
    }

    #[test]
    fn reverse_carleson_peaked_family_on_level_set() {
        // G = {|g| > 1/4} for g = (1−z)/2 excludes a neighborhood of 1.
        // The Cauchy-factor construction applied to the matching Möbius
        // extremal gives |h_β| = (1−β²)^{3/2}/|1−βz|³, whose weighted
        // Bergman mass localizes at scale 1−β near z = β/|β|, so the
        // G-ratio collapses as β → 1 along the real axis.
        let grid = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
        let g = SymbolExpr::rational(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        let region = RegionIndicator::new(|z| g.eval(z).norm() > 0.25);
        let peaked = |b: f64| -> FamilyMember {
            // (1−βz)³ = 1 − 3βz + 3β²z² − β³z³
            FamilyMember {
                label: format!("h({b})"),
                f: Arc::new(
                    SymbolExpr::rational(
                        vec![c((1.0 - b * b).powf(1.5), 0.0)],
                        vec![
                            c(1.0, 0.0),
                            c(-3.0 * b, 0.0),
                            c(3.0 * b * b, 0.0),
                            c(-b * b * b, 0.0),
                        ],
                    )
                    .unwrap(),
                ),
            }
        };
        let members = vec![peaked(0.9), peaked(0.99), peaked(0.999)];
        let rep = reverse_carleson_ratio_members(&region, 2.0, 1.0, &members, &grid).unwrap();
        assert!(rep.per_sample[2].ratio < 0.2, "{:?}", rep.per_sample);
        assert!(rep.per_sample[0].ratio > rep.per_sample[2].ratio);
    }
}
