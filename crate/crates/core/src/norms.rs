//! Numerical evaluation of the disk-space norms: classical and
//! square-function Hardy norms, an exact Littlewood–Paley H² identity
//! used as an independent oracle, BMOA, Q_p, Besov and weighted Bergman
//! norms.
//!
//! The BMOA/Q_p suprema over the Möbius parameter are taken over a finite
//! pseudo-hyperbolically equispaced net; the Calderon norm's inner Stolz
//! integrals for all boundary vertices are assembled in a single sweep
//! over the grid (each cell lies in the Stolz angle of an arc of
//! vertices, so cells scatter into per-vertex accumulators).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{pseudo_net, StolzAngle, UnitDiskPoint};
use crate::quadrature::{integrate_circle, integrate_disk, PolarGrid, DEFAULT_R_MAX};
use crate::symbols::Analytic;

/// The function spaces with a computable norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// `sup_r` of circle means of `|f|^p` (evaluated at the truncation
    /// radius; means are nondecreasing in r).
    HardyClassical,
    /// Square-function norm: `|f(0)|^p + ∫_𝕋 (∬_{Γ_β(ζ)} |f′|² dA)^{p/2} dm`.
    HardyCalderon,
    Bmoa,
    Qp,
    Besov,
    BergmanWeighted,
}

/// A space together with its numeric parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpaceSpec {
    pub space: Space,
    pub p: f64,
    /// Bergman weight exponent (γ > −1); ignored elsewhere.
    pub gamma: f64,
    /// Stolz aperture for the Calderon norm; ignored elsewhere.
    pub aperture: f64,
}

impl SpaceSpec {
    pub fn hardy_classical(p: f64) -> Self {
        SpaceSpec {
            space: Space::HardyClassical,
            p,
            gamma: 0.0,
            aperture: 0.5,
        }
    }

    /// Aperture defaults to 1/2.
    pub fn hardy(p: f64) -> Self {
        SpaceSpec {
            space: Space::HardyCalderon,
            p,
            gamma: 0.0,
            aperture: 0.5,
        }
    }

    pub fn bmoa() -> Self {
        SpaceSpec {
            space: Space::Bmoa,
            p: 2.0,
            gamma: 0.0,
            aperture: 0.5,
        }
    }

    pub fn qp(p: f64) -> Self {
        SpaceSpec {
            space: Space::Qp,
            p,
            gamma: 0.0,
            aperture: 0.5,
        }
    }

    pub fn besov(p: f64) -> Self {
        SpaceSpec {
            space: Space::Besov,
            p,
            gamma: 0.0,
            aperture: 0.5,
        }
    }

    pub fn bergman(p: f64, gamma: f64) -> Self {
        SpaceSpec {
            space: Space::BergmanWeighted,
            p,
            gamma,
            aperture: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.space {
            Space::HardyClassical | Space::HardyCalderon => {
                if !(self.p >= 1.0) {
                    return Err(Error::config("p", "Hardy norms need p ≥ 1"));
                }
            }
            Space::Besov => {
                if !(self.p > 1.0) {
                    return Err(Error::config("p", "Besov norms need 1 < p < ∞"));
                }
            }
            Space::Qp => {
                if !(self.p > 0.0) {
                    return Err(Error::config("p", "Q_p norms need p > 0"));
                }
            }
            Space::BergmanWeighted => {
                if !(self.p >= 1.0) {
                    return Err(Error::config("p", "Bergman norms need p ≥ 1"));
                }
                if !(self.gamma > -1.0) {
                    return Err(Error::config("gamma", "Bergman norms need γ > −1"));
                }
            }
            Space::Bmoa => {}
        }
        if !(self.aperture > 0.0 && self.aperture < 1.0) {
            return Err(Error::config("aperture", "β must lie in (0,1)"));
        }
        Ok(())
    }

    /// True when the norm depends on f only through f′ and f(0).
    pub fn derivative_based(&self) -> bool {
        !matches!(self.space, Space::HardyClassical | Space::BergmanWeighted)
    }

    pub fn label(&self) -> String {
        match self.space {
            Space::HardyClassical => format!("hardy-classical(p={})", self.p),
            Space::HardyCalderon => format!("hardy(p={}, beta={})", self.p, self.aperture),
            Space::Bmoa => "bmoa".to_string(),
            Space::Qp => format!("qp(p={})", self.p),
            Space::Besov => format!("besov(p={})", self.p),
            Space::BergmanWeighted => format!("bergman(p={}, gamma={})", self.p, self.gamma),
        }
    }
}

/// Quadrature metadata recorded with every norm value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridMeta {
    pub levels: u32,
    pub r_max: f64,
    pub net_size: usize,
}

/// A computed norm with its quadrature metadata and, for the sup-type
/// norms, the maximizing Möbius parameter.
#[derive(Debug, Clone, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub space: SpaceSpec,
    pub grid_meta: GridMeta,
    pub sup_witness: Option<UnitDiskPoint>,
}

/// Everything the norm dispatcher needs besides the function itself.
pub struct NormContext<'a> {
    pub grid: &'a PolarGrid,
    pub beta_net: &'a [UnitDiskPoint],
    /// Vertex count for the Calderon outer integral.
    pub n_boundary: usize,
    /// Circle sample count for the classical Hardy norm.
    pub n_circle: usize,
}

pub const DEFAULT_N_BOUNDARY: usize = 8192;
pub const DEFAULT_N_CIRCLE: usize = 65536;

/// Default Möbius-parameter net: pseudo-hyperbolic separation 0.2 out to
/// `|β| = 1 − 2⁻⁷`. The sup kernels of the test families peak well inside
/// this radius; refinement is a config knob (`--beta-sep`,
/// `--beta-rlimit`).
pub fn default_beta_net() -> Vec<UnitDiskPoint> {
    pseudo_net(0.2, 1.0 - 1.0 / 128.0).expect("default net parameters are valid")
}

/// Classical Hardy norm via the circle mean at radius `r`.
pub fn hardy_classical_at<F: Analytic + ?Sized>(
    f: &F,
    p: f64,
    n: usize,
    r: f64,
) -> Result<NormResult> {
    let spec = SpaceSpec::hardy_classical(p);
    spec.validate()?;
    let mean = integrate_circle(
        |th| f.eval(Complex64::from_polar(r, th)).norm().powf(p),
        r,
        n,
    );
    if !mean.is_finite() {
        return Err(Error::numerical("classical Hardy mean is not finite"));
    }
    Ok(NormResult {
        value: mean.powf(1.0 / p),
        space: spec,
        grid_meta: GridMeta {
            levels: 0,
            r_max: r,
            net_size: n,
        },
        sup_witness: None,
    })
}

/// Classical Hardy norm at the default truncation radius. Circle means of
/// analytic functions are nondecreasing in the radius, so the single
/// evaluation at `r_max` realizes the sup up to truncation bias.
pub fn hardy_classical<F: Analytic + ?Sized>(f: &F, p: f64, n: usize) -> Result<NormResult> {
    hardy_classical_at(f, p, n, DEFAULT_R_MAX)
}

/// Inner Stolz integrals `∬_{Γ_β(ζ_j)} |f′|² dA` for all `n_boundary`
/// uniformly spaced vertices in one pass over the grid.
///
/// A point of modulus r lies in the Stolz angles of an arc of vertices
/// (half-width given by the aperture geometry), so each cell scatters
/// its mass into the per-vertex accumulator over that index range; a
/// prefix sum finishes the job. Agrees with per-vertex
/// `integrate_stolz` up to index-rounding of arc endpoints.
pub fn stolz_boundary_profile<F: Analytic + ?Sized>(
    f: &F,
    beta: f64,
    grid: &PolarGrid,
    n_boundary: usize,
) -> Result<Vec<f64>> {
    let n = n_boundary.max(1);
    let probe = StolzAngle::new(crate::geometry::BoundaryPoint::new(0.0)?, beta)?;

    // per-ring mass rows evaluated in parallel
    let rows: Result<Vec<Vec<f64>>> = grid
        .rings()
        .par_iter()
        .map(|ring| {
            let mut row = Vec::with_capacity(ring.n);
            for k in 0..ring.n {
                let d = f.deriv(ring.node(k));
                if !d.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite derivative at r={}",
                        ring.r
                    )));
                }
                row.push(d.norm_sqr() * ring.cell_weight);
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;

    let step = std::f64::consts::TAU / (n as f64);
    let mut diff = vec![0.0f64; n + 1];
    let mut everywhere = 0.0f64;
    for (ring, row) in grid.rings().iter().zip(rows.iter()) {
        let omega = probe.arc_halfwidth(ring.r);
        if omega >= std::f64::consts::PI {
            everywhere += row.iter().sum::<f64>();
            continue;
        }
        for (k, &mass) in row.iter().enumerate() {
            let theta = ring.theta(k);
            let lo = ((theta - omega) / step).ceil() as i64;
            let hi = ((theta + omega) / step).floor() as i64;
            if hi < lo {
                continue;
            }
            if (hi - lo + 1) as usize >= n {
                everywhere += mass;
                continue;
            }
            let a = lo.rem_euclid(n as i64) as usize;
            let b = hi.rem_euclid(n as i64) as usize;
            if a <= b {
                diff[a] += mass;
                diff[b + 1] -= mass;
            } else {
                diff[0] += mass;
                diff[b + 1] -= mass;
                diff[a] += mass;
            }
        }
    }

    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    for d in diff.iter().take(n) {
        acc += d;
        out.push(everywhere + acc);
    }
    Ok(out)
}

/// Square-function Hardy norm (aperture β): trapezoid over the boundary
/// vertices of the inner Stolz integrals, p-th root of
/// `|f(0)|^p + mean`.
pub fn hardy_calderon<F: Analytic + ?Sized>(
    f: &F,
    p: f64,
    beta: f64,
    grid: &PolarGrid,
    n_boundary: usize,
) -> Result<NormResult> {
    let mut spec = SpaceSpec::hardy(p);
    spec.aperture = beta;
    spec.validate()?;
    let profile = stolz_boundary_profile(f, beta, grid, n_boundary)?;
    let half = p / 2.0;
    let mean = profile
        .iter()
        .map(|&v| if half == 1.0 { v } else { v.powf(half) })
        .sum::<f64>()
        / (profile.len() as f64);
    let value = (f.eval(Complex64::new(0.0, 0.0)).norm().powf(p) + mean).powf(1.0 / p);
    if !value.is_finite() {
        return Err(Error::numerical("Calderon norm is not finite"));
    }
    Ok(NormResult {
        value,
        space: spec,
        grid_meta: GridMeta {
            levels: grid.levels(),
            r_max: grid.r_max(),
            net_size: n_boundary,
        },
        sup_witness: None,
    })
}

/// Exact H² identity `‖f‖² = |f(0)|² + 2∬ |f′|² log(1/|z|) dA`,
/// used as an independent oracle against the circle-mean norm.
pub fn h2_littlewood_paley<F: Analytic + ?Sized>(f: &F, grid: &PolarGrid) -> Result<f64> {
    let integral = integrate_disk(|z| f.deriv(z).norm_sqr() * (-z.norm().ln()), grid)?;
    Ok(f.eval(Complex64::new(0.0, 0.0)).norm_sqr() + 2.0 * integral)
}

/// Per-cell `field(z) · cell_weight` flattened ring-major, with node
/// coordinates, for the Möbius-kernel sweeps.
struct WeightedNodes {
    x: Vec<f64>,
    y: Vec<f64>,
    g: Vec<f64>,
}

fn weighted_nodes<F>(grid: &PolarGrid, field: F) -> Result<WeightedNodes>
where
    F: Fn(Complex64, f64) -> f64 + Sync,
{
    let rows: Result<Vec<Vec<(f64, f64, f64)>>> = grid
        .rings()
        .par_iter()
        .map(|ring| {
            let mut row = Vec::with_capacity(ring.n);
            for k in 0..ring.n {
                let z = ring.node(k);
                let v = field(z, ring.r) * ring.cell_weight;
                if !v.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite integrand at r={}",
                        ring.r
                    )));
                }
                row.push((z.re, z.im, v));
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let total: usize = rows.iter().map(Vec::len).sum();
    let mut nodes = WeightedNodes {
        x: Vec::with_capacity(total),
        y: Vec::with_capacity(total),
        g: Vec::with_capacity(total),
    };
    for row in rows {
        for (x, y, g) in row {
            nodes.x.push(x);
            nodes.y.push(y);
            nodes.g.push(g);
        }
    }
    Ok(nodes)
}

enum KernelPower {
    One,
    Int(i32),
    Frac(f64),
}

/// `Σ_i g_i · [(1−|β|²)/|1−β̄ z_i|²]^pow` for one β.
fn kernel_sum(nodes: &WeightedNodes, beta: Complex64, pow: &KernelPower) -> f64 {
    let br = beta.re;
    let bi = beta.im;
    let b2 = 1.0 - beta.norm_sqr();
    let mut acc = 0.0;
    for i in 0..nodes.g.len() {
        let x = nodes.x[i];
        let y = nodes.y[i];
        // β̄z = (br·x + bi·y) + i(br·y − bi·x)
        let re = 1.0 - (br * x + bi * y);
        let im = br * y - bi * x;
        let k = b2 / (re * re + im * im);
        acc += nodes.g[i]
            * match pow {
                KernelPower::One => k,
                KernelPower::Int(n) => k.powi(*n),
                KernelPower::Frac(p) => k.powf(*p),
            };
    }
    acc
}

/// Max of `kernel_sum` over the net; ties keep the earliest net point so
/// the witness never depends on evaluation order.
fn kernel_sup(
    nodes: &WeightedNodes,
    beta_net: &[UnitDiskPoint],
    pow: KernelPower,
) -> Result<(f64, UnitDiskPoint)> {
    if beta_net.is_empty() {
        return Err(Error::config("beta net", "must be nonempty"));
    }
    let values: Vec<f64> = beta_net
        .par_iter()
        .map(|b| kernel_sum(nodes, b.c(), &pow))
        .collect();
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::numerical("kernel sweep produced non-finite value"));
        }
        if *v > values[best] {
            best = i;
        }
    }
    Ok((values[best], beta_net[best]))
}

/// BMOA kernel integral at a single β (series-testable piece of the norm).
pub fn bmoa_kernel_integral<F: Analytic + ?Sized>(
    f: &F,
    beta: UnitDiskPoint,
    grid: &PolarGrid,
) -> Result<f64> {
    let nodes = weighted_nodes(grid, |z, r| f.deriv(z).norm_sqr() * (-r.ln()))?;
    Ok(kernel_sum(&nodes, beta.c(), &KernelPower::One))
}

/// BMOA norm: `(|f(0)|² + sup_β ∬ (1−|β|²)/|1−β̄z|² |f′|² log(1/|z|) dA)^{1/2}`
/// with the sup over the given finite net; reports the maximizing β.
pub fn bmoa_norm<F: Analytic + ?Sized>(
    f: &F,
    beta_net: &[UnitDiskPoint],
    grid: &PolarGrid,
) -> Result<NormResult> {
    let nodes = weighted_nodes(grid, |z, r| f.deriv(z).norm_sqr() * (-r.ln()))?;
    let (sup, witness) = kernel_sup(&nodes, beta_net, KernelPower::One)?;
    let value = (f.eval(Complex64::new(0.0, 0.0)).norm_sqr() + sup).sqrt();
    Ok(NormResult {
        value,
        space: SpaceSpec::bmoa(),
        grid_meta: GridMeta {
            levels: grid.levels(),
            r_max: grid.r_max(),
            net_size: beta_net.len(),
        },
        sup_witness: Some(witness),
    })
}

/// Q_p kernel integral at a single β.
pub fn qp_kernel_integral<F: Analytic + ?Sized>(
    f: &F,
    p: f64,
    beta: UnitDiskPoint,
    grid: &PolarGrid,
) -> Result<f64> {
    let nodes = weighted_nodes(grid, |z, r| {
        f.deriv(z).norm_sqr() * (1.0 - r * r).powf(p)
    })?;
    Ok(kernel_sum(&nodes, beta.c(), &kernel_power(p)))
}

fn kernel_power(p: f64) -> KernelPower {
    if p == 1.0 {
        KernelPower::One
    } else if p.fract() == 0.0 && p.abs() < 16.0 {
        KernelPower::Int(p as i32)
    } else {
        KernelPower::Frac(p)
    }
}

/// Q_p norm (with the `|f(0)|²` term so representatives get a true norm):
/// `(|f(0)|² + sup_β ∬ [(1−|β|²)/|1−β̄z|²]^p |f′|² (1−|z|²)^p dA)^{1/2}`.
pub fn qp_norm<F: Analytic + ?Sized>(
    f: &F,
    p: f64,
    beta_net: &[UnitDiskPoint],
    grid: &PolarGrid,
) -> Result<NormResult> {
    let spec = SpaceSpec::qp(p);
    spec.validate()?;
    let nodes = weighted_nodes(grid, |z, r| {
        f.deriv(z).norm_sqr() * (1.0 - r * r).powf(p)
    })?;
    let (sup, witness) = kernel_sup(&nodes, beta_net, kernel_power(p))?;
    let value = (f.eval(Complex64::new(0.0, 0.0)).norm_sqr() + sup).sqrt();
    Ok(NormResult {
        value,
        space: spec,
        grid_meta: GridMeta {
            levels: grid.levels(),
            r_max: grid.r_max(),
            net_size: beta_net.len(),
        },
        sup_witness: Some(witness),
    })
}

/// Besov norm `(|f(0)|^p + ∬ |f′|^p (1−|z|²)^{p−2} dA)^{1/p}`.
///
/// The weight is singular at the boundary for p < 2; the dyadic banding
/// resolves it, at roughly doubled tolerances there.
pub fn besov_norm<F: Analytic + ?Sized>(f: &F, p: f64, grid: &PolarGrid) -> Result<NormResult> {
    let spec = SpaceSpec::besov(p);
    spec.validate()?;
    let half = p / 2.0;
    let integral = integrate_disk(
        |z| {
            let d2 = f.deriv(z).norm_sqr();
            let w = (1.0 - z.norm_sqr()).powf(p - 2.0);
            if half == 1.0 {
                d2 * w
            } else {
                d2.powf(half) * w
            }
        },
        grid,
    )?;
    let value = (f.eval(Complex64::new(0.0, 0.0)).norm().powf(p) + integral).powf(1.0 / p);
    Ok(NormResult {
        value,
        space: spec,
        grid_meta: GridMeta {
            levels: grid.levels(),
            r_max: grid.r_max(),
            net_size: 0,
        },
        sup_witness: None,
    })
}

/// Weighted Bergman norm `(∬ |f|^p (1−|z|²)^γ dA)^{1/p}`.
pub fn bergman_norm<F: Analytic + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    grid: &PolarGrid,
) -> Result<NormResult> {
    let spec = SpaceSpec::bergman(p, gamma);
    spec.validate()?;
    let integral = integrate_disk(
        |z| f.eval(z).norm().powf(p) * (1.0 - z.norm_sqr()).powf(gamma),
        grid,
    )?;
    Ok(NormResult {
        value: integral.powf(1.0 / p),
        space: spec,
        grid_meta: GridMeta {
            levels: grid.levels(),
            r_max: grid.r_max(),
            net_size: 0,
        },
        sup_witness: None,
    })
}

/// Dispatch a [`SpaceSpec`] to the corresponding norm.
pub fn space_norm<F: Analytic + ?Sized>(
    f: &F,
    spec: &SpaceSpec,
    ctx: &NormContext,
) -> Result<NormResult> {
    spec.validate()?;
    match spec.space {
        Space::HardyClassical => hardy_classical(f, spec.p, ctx.n_circle),
        Space::HardyCalderon => {
            hardy_calderon(f, spec.p, spec.aperture, ctx.grid, ctx.n_boundary)
        }
        Space::Bmoa => bmoa_norm(f, ctx.beta_net, ctx.grid),
        Space::Qp => qp_norm(f, spec.p, ctx.beta_net, ctx.grid),
        Space::Besov => besov_norm(f, spec.p, ctx.grid),
        Space::BergmanWeighted => bergman_norm(f, spec.p, spec.gamma, ctx.grid),
    }
}
