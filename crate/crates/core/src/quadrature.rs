//! Deterministic quadrature on the disk.
//!
//! The global grid uses dyadic radial bands accumulating at the boundary
//! (band boundaries `1 − 2⁻ʲ`), each subdivided into `levels` sub-rings,
//! with angular counts doubling per band so cells stay near-square. This
//! matches the `(1−|z|)`-type weights of the integrands: refinement lands
//! where the mass concentrates.
//!
//! Summation order is part of the contract: cell values are reduced
//! ring-major (rings in increasing radius, angular index ascending within
//! a ring). Rings may be evaluated on any number of workers, but ring
//! subtotals are folded in ring order, so results are bit-identical
//! across runs and across worker counts.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{EuclideanSubdisk, PseudoDisk, StolzAngle};

/// Default truncation radius `1 − 2⁻¹⁴` for global grids.
pub const DEFAULT_R_MAX: f64 = 1.0 - 1.0 / 16384.0;

/// Default cap on the total number of grid cells.
pub const DEFAULT_CELL_CAP: u64 = 10_000_000;

/// One ring of cells: radial band `[r_lo, r_hi]` sampled at the midpoint
/// radius with `n` equally spaced angular midpoints.
#[derive(Debug, Clone)]
pub struct Ring {
    pub r_lo: f64,
    pub r_hi: f64,
    /// Midpoint radius; all nodes of the ring sit on this circle.
    pub r: f64,
    /// Angular cell count.
    pub n: usize,
    /// Normalized-area weight of one cell: `(r_hi² − r_lo²)/n`.
    pub cell_weight: f64,
}

impl Ring {
    /// Angle of the k-th node (cell midpoints, half-step offset).
    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        std::f64::consts::TAU * (k as f64 + 0.5) / (self.n as f64)
    }

    #[inline]
    pub fn node(&self, k: usize) -> Complex64 {
        Complex64::from_polar(self.r, self.theta(k))
    }
}

/// Boundary-refined polar grid for the normalized area measure.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    rings: Vec<Ring>,
    levels: u32,
    base_angular: u32,
    r_max: f64,
    cells: usize,
}

impl PolarGrid {
    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn base_angular(&self) -> u32 {
        self.base_angular
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }
}

/// Build the global grid.
///
/// Radial bands: `[0, 1−2⁻¹], [1−2⁻¹, 1−2⁻²], …` with the last band
/// ending at `r_max` (so `levels = 1` is a single band `[0, r_max]`).
/// Each band is split into `levels` equal sub-rings; the band at dyadic
/// depth `j` carries `base_angular · 2ʲ` angular cells (at least 8).
pub fn make_grid(levels: u32, base_angular: u32, r_max: f64) -> Result<PolarGrid> {
    make_grid_with_cap(levels, base_angular, r_max, DEFAULT_CELL_CAP)
}

pub fn make_grid_with_cap(
    levels: u32,
    base_angular: u32,
    r_max: f64,
    cell_cap: u64,
) -> Result<PolarGrid> {
    if levels == 0 {
        return Err(Error::config("levels", "must be at least 1"));
    }
    if base_angular == 0 {
        return Err(Error::config("angular-base", "must be at least 1"));
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::config(
            "rmax",
            format!("{r_max} must lie in (0,1)"),
        ));
    }

    let mut boundaries = vec![0.0f64];
    for j in 1..levels {
        let v = 1.0 - f64::powi(2.0, -(j as i32));
        if v < r_max {
            boundaries.push(v);
        } else {
            break;
        }
    }
    boundaries.push(r_max);

    // cheap size estimate before allocating
    let mut estimate: u64 = 0;
    for j in 1..boundaries.len() {
        let n_ang = angular_count(base_angular, j as u32);
        estimate = estimate.saturating_add(levels as u64 * n_ang as u64);
    }
    if estimate > cell_cap {
        return Err(Error::ResourceLimit {
            what: "grid cells".into(),
            limit: cell_cap,
            requested: estimate,
        });
    }

    let mut rings = Vec::new();
    let mut cells = 0usize;
    for j in 1..boundaries.len() {
        let lo = boundaries[j - 1];
        let hi = boundaries[j];
        let n = angular_count(base_angular, j as u32);
        let sub = levels as usize;
        for s in 0..sub {
            let a = lo + (hi - lo) * (s as f64) / (sub as f64);
            let b = lo + (hi - lo) * ((s + 1) as f64) / (sub as f64);
            rings.push(Ring {
                r_lo: a,
                r_hi: b,
                r: 0.5 * (a + b),
                n,
                cell_weight: (b * b - a * a) / (n as f64),
            });
            cells += n;
        }
    }

    Ok(PolarGrid {
        rings,
        levels,
        base_angular,
        r_max,
        cells,
    })
}

fn angular_count(base: u32, band: u32) -> usize {
    let doubling = band.min(24);
    ((base as u64) << doubling).max(8) as usize
}

/// Membership predicate defining an integration domain; must be pure and
/// deterministic.
pub struct RegionIndicator<'a> {
    pred: Box<dyn Fn(Complex64) -> bool + Sync + 'a>,
}

impl<'a> RegionIndicator<'a> {
    pub fn new(pred: impl Fn(Complex64) -> bool + Sync + 'a) -> Self {
        RegionIndicator {
            pred: Box::new(pred),
        }
    }

    /// The whole disk.
    pub fn full() -> Self {
        RegionIndicator::new(|_| true)
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        (self.pred)(z)
    }
}

fn sum_rings<F>(rings: &[Ring], per_ring: F) -> Result<f64>
where
    F: Fn(&Ring) -> Result<f64> + Sync,
{
    let partials: Result<Vec<f64>> = rings.par_iter().map(&per_ring).collect();
    // fold in ring order; the parallel step only evaluates
    Ok(partials?.iter().sum())
}

/// `∬ field dA` over the truncated disk. Midpoint rule, ring-major order.
pub fn integrate_disk<F>(field: F, grid: &PolarGrid) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    sum_rings(grid.rings(), |ring| {
        let mut acc = 0.0;
        for k in 0..ring.n {
            let v = field(ring.node(k));
            if !v.is_finite() {
                return Err(Error::numerical(format!(
                    "non-finite field value at r={}, k={k}",
                    ring.r
                )));
            }
            acc += v;
        }
        Ok(acc * ring.cell_weight)
    })
}

/// `∬_G field dA` with G given by an indicator; cells are counted by
/// their midpoints (no partial-cell clipping).
pub fn integrate_region<F>(field: F, region: &RegionIndicator, grid: &PolarGrid) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    sum_rings(grid.rings(), |ring| {
        let mut acc = 0.0;
        for k in 0..ring.n {
            let z = ring.node(k);
            if region.contains(z) {
                let v = field(z);
                if !v.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite field value at r={}, k={k}",
                        ring.r
                    )));
                }
                acc += v;
            }
        }
        Ok(acc * ring.cell_weight)
    })
}

/// Anything realizable as a Euclidean disk inside the unit disk.
pub trait AsEuclideanDisk {
    fn euclidean(&self) -> (Complex64, f64);
}

impl AsEuclideanDisk for PseudoDisk {
    fn euclidean(&self) -> (Complex64, f64) {
        self.as_euclidean()
    }
}

impl AsEuclideanDisk for EuclideanSubdisk {
    fn euclidean(&self) -> (Complex64, f64) {
        (self.center.c(), self.euclidean_radius())
    }
}

/// Ring/angular resolution of the local subdisk grids.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SubdiskResolution {
    pub rings: usize,
    /// Angular cells on the outermost ring; inner rings scale down
    /// proportionally to stay near-square.
    pub angular: usize,
}

impl Default for SubdiskResolution {
    fn default() -> Self {
        // outer arc 2πR/402 ≈ radial width R/64
        SubdiskResolution {
            rings: 64,
            angular: 402,
        }
    }
}

/// Integrate over a subdisk on a local polar grid centered at its
/// Euclidean center. Avoids global-grid aliasing for small disks near
/// the boundary. Same ordering contract as the global grid.
pub fn integrate_subdisk<F, D>(field: F, disk: &D, res: SubdiskResolution) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
    D: AsEuclideanDisk,
{
    let (center, radius) = disk.euclidean();
    let kr = res.rings.max(1);
    let rings: Vec<(f64, f64, usize)> = (0..kr)
        .map(|i| {
            let a = radius * (i as f64) / (kr as f64);
            let b = radius * ((i + 1) as f64) / (kr as f64);
            let n = ((res.angular as f64) * ((2 * i + 1) as f64) / ((2 * kr - 1) as f64))
                .ceil()
                .max(8.0) as usize;
            (a, b, n)
        })
        .collect();
    let partials: Result<Vec<f64>> = rings
        .par_iter()
        .map(|&(a, b, n)| {
            let rm = 0.5 * (a + b);
            let w = (b * b - a * a) / (n as f64);
            let mut acc = 0.0;
            for k in 0..n {
                let th = std::f64::consts::TAU * (k as f64 + 0.5) / (n as f64);
                let z = center + Complex64::from_polar(rm, th);
                let v = field(z);
                if !v.is_finite() {
                    return Err(Error::numerical(format!(
                        "non-finite field value on subdisk ring r={rm}"
                    )));
                }
                acc += v;
            }
            Ok(acc * w)
        })
        .collect();
    Ok(partials?.iter().sum())
}

/// `∫_𝕋 field(θ) dm` on the circle of the given radius: the trapezoid
/// rule on `n` uniform angles (equal to the node mean for a periodic
/// integrand), normalized length measure.
pub fn integrate_circle<F>(field: F, _radius: f64, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = n.max(1);
    let mut acc = 0.0;
    for k in 0..n {
        acc += field(std::f64::consts::TAU * (k as f64) / (n as f64));
    }
    acc / (n as f64)
}

/// `∬_{Γ_β(ζ)} field dA` via the Stolz indicator on the global grid.
pub fn integrate_stolz<F>(field: F, s: &StolzAngle, grid: &PolarGrid) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let region = RegionIndicator::new(|z| s.contains(z));
    integrate_region(field, &region, grid)
}

// 8-point Gauss–Legendre nodes/weights on [−1, 1].
const GL8_NODES: [f64; 8] = [
    -0.960289856497536232,
    -0.796666477413626740,
    -0.525532409916328986,
    -0.183434642495649805,
    0.183434642495649805,
    0.525532409916328986,
    0.796666477413626740,
    0.960289856497536232,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101228536290376259,
    0.222381034453374471,
    0.313706645877887287,
    0.362683783378361983,
    0.362683783378361983,
    0.313706645877887287,
    0.222381034453374471,
    0.101228536290376259,
];

/// `∫₀ᶻ field(w) dw` along the straight segment, composite 8-point
/// Gauss–Legendre with `panels` panels. Exact for polynomial integrands
/// up to degree 15 per panel.
pub fn integrate_segment<F>(field: F, endpoint: Complex64, panels: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let panels = panels.max(1);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let t0 = (p as f64) / (panels as f64);
        let t1 = ((p + 1) as f64) / (panels as f64);
        let mid = 0.5 * (t0 + t1);
        let half = 0.5 * (t1 - t0);
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            let t = mid + half * x;
            let v = field(endpoint * t);
            if !v.is_finite() {
                return Err(Error::numerical(
                    "non-finite integrand on segment".to_string(),
                ));
            }
            panel += v * *w;
        }
        acc += panel * half;
    }
    Ok(acc * endpoint)
}
