//! Geometry of the unit disk: the pseudo-hyperbolic metric, Möbius
//! involutions, the three region types used throughout the crate
//! (pseudo-hyperbolic disks, boundary-scaled Euclidean subdisks, Stolz
//! angles), their closed-form normalized areas, and pseudo-hyperbolically
//! equispaced nets.
//!
//! All areas are relative to the normalized area measure on the disk
//! (total mass 1). Region membership is strict: points on a region's
//! boundary count as outside.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitDiskPoint {
    pub re: f64,
    pub im: f64,
}

impl UnitDiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::config("point", "coordinates must be finite"));
        }
        if re * re + im * im >= 1.0 {
            return Err(Error::config(
                "point",
                format!("({re}, {im}) is not inside the open unit disk"),
            ));
        }
        Ok(UnitDiskPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.c().norm()
    }
}

impl From<UnitDiskPoint> for Complex64 {
    fn from(p: UnitDiskPoint) -> Complex64 {
        p.c()
    }
}

/// A point of the unit circle, stored as its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    theta: f64,
}

impl BoundaryPoint {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::config("boundary point", "angle must be finite"));
        }
        let two_pi = std::f64::consts::TAU;
        let mut t = theta % two_pi;
        if t < 0.0 {
            t += two_pi;
        }
        Ok(BoundaryPoint { theta: t })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Pseudo-hyperbolic distance `|z−w| / |1−z̄w|`.
///
/// Symmetric and invariant under disk automorphisms.
pub fn pseudo_distance(z: UnitDiskPoint, w: UnitDiskPoint) -> f64 {
    pseudo_distance_c(z.c(), w.c())
}

pub(crate) fn pseudo_distance_c(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    num / den
}

/// The Möbius involution `ψ_α(z) = (α−z)/(1−ᾱz)`.
///
/// Swaps 0 and α; an isometry of the pseudo-hyperbolic metric.
pub fn moebius_psi(alpha: UnitDiskPoint, z: UnitDiskPoint) -> Complex64 {
    moebius_psi_c(alpha.c(), z.c())
}

pub(crate) fn moebius_psi_c(alpha: Complex64, z: Complex64) -> Complex64 {
    (alpha - z) / (Complex64::new(1.0, 0.0) - alpha.conj() * z)
}

/// Pseudo-hyperbolic disk `D_η(a) = {z : ρ(a,z) < η}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PseudoDisk {
    pub center: UnitDiskPoint,
    pub radius: f64,
}

impl PseudoDisk {
    pub fn new(center: UnitDiskPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::config(
                "pseudo disk radius",
                format!("η = {radius} must lie in (0,1)"),
            ));
        }
        Ok(PseudoDisk { center, radius })
    }

    /// Strict membership; boundary points are outside.
    pub fn contains(&self, z: Complex64) -> bool {
        pseudo_distance_c(self.center.c(), z) < self.radius
    }

    /// The same set as a Euclidean disk `(center, radius)`.
    ///
    /// center = a(1−η²)/(1−η²|a|²), radius = η(1−|a|²)/(1−η²|a|²).
    pub fn as_euclidean(&self) -> (Complex64, f64) {
        let a = self.center.c();
        let eta2 = self.radius * self.radius;
        let a2 = a.norm_sqr();
        let denom = 1.0 - eta2 * a2;
        let center = a * ((1.0 - eta2) / denom);
        let radius = self.radius * (1.0 - a2) / denom;
        (center, radius)
    }

    /// Normalized area, `η²(1−|a|²)²/(1−η²|a|²)²`.
    pub fn area(&self) -> f64 {
        let a2 = self.center.c().norm_sqr();
        let eta2 = self.radius * self.radius;
        let q = self.radius * (1.0 - a2) / (1.0 - eta2 * a2);
        q * q
    }
}

/// Membership in a pseudo-hyperbolic disk (strict).
pub fn in_pseudo_disk(d: &PseudoDisk, z: UnitDiskPoint) -> bool {
    d.contains(z.c())
}

/// Euclidean realization of a pseudo-hyperbolic disk.
pub fn pseudo_disk_as_euclidean(d: &PseudoDisk) -> (Complex64, f64) {
    d.as_euclidean()
}

/// Closed-form normalized area of a pseudo-hyperbolic disk.
pub fn pseudo_disk_area_exact(d: &PseudoDisk) -> f64 {
    d.area()
}

/// Euclidean disk `Δ_η(α) = {z : |z−α| < η(1−|α|)}`; always inside the
/// unit disk since η < 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EuclideanSubdisk {
    pub center: UnitDiskPoint,
    pub factor: f64,
}

impl EuclideanSubdisk {
    pub fn new(center: UnitDiskPoint, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor < 1.0) {
            return Err(Error::config(
                "euclidean subdisk factor",
                format!("η = {factor} must lie in (0,1)"),
            ));
        }
        Ok(EuclideanSubdisk { center, factor })
    }

    pub fn euclidean_radius(&self) -> f64 {
        self.factor * (1.0 - self.center.abs())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center.c()).norm() < self.euclidean_radius()
    }

    /// Normalized area, `η²(1−|α|)²`.
    pub fn area(&self) -> f64 {
        let r = self.euclidean_radius();
        r * r
    }
}

/// Closed-form normalized area of `Δ_η(α)`.
pub fn euclidean_subdisk_area(d: &EuclideanSubdisk) -> f64 {
    d.area()
}

/// Stolz angle `Γ_β(ζ)`: the union of the ball `{|z| < β}` with all
/// segments `[w, ζ)` from that ball to the boundary point ζ. Equivalently
/// the open convex hull of the ball and ζ (minus ζ itself).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StolzAngle {
    pub vertex: BoundaryPoint,
    pub aperture: f64,
}

impl StolzAngle {
    pub fn new(vertex: BoundaryPoint, aperture: f64) -> Result<Self> {
        if !(aperture > 0.0 && aperture < 1.0) {
            return Err(Error::config(
                "stolz aperture",
                format!("β = {aperture} must lie in (0,1)"),
            ));
        }
        Ok(StolzAngle { vertex, aperture })
    }

    /// Strict membership, decided by minimizing
    /// `φ(t) = |z − (1−t)ζ|²/t²` over `t ∈ (0,1]` in closed form:
    /// z lies on a segment [w, ζ) with |w| < β iff min φ < β².
    pub fn contains(&self, z: Complex64) -> bool {
        stolz_min_aperture_sq(self.vertex.c(), z) < self.aperture * self.aperture
    }

    /// Half-width of the arc of vertices ζ whose Stolz angle contains a
    /// point of modulus `r`: `z = r·e^{iθ} ∈ Γ_β(e^{iφ})` iff the angular
    /// distance between θ and φ is below this value.
    pub fn arc_halfwidth(&self, r: f64) -> f64 {
        let beta = self.aperture;
        if r < beta {
            return std::f64::consts::PI;
        }
        let b2 = beta * beta;
        let x = (b2 + ((1.0 - b2) * (r * r - b2)).sqrt()) / r;
        x.clamp(-1.0, 1.0).acos()
    }
}

/// Minimum of `|z − (1−t)ζ|²/t²` over `t ∈ (0,1]`.
///
/// The square root of this value is the smallest aperture whose Stolz
/// angle at ζ contains z. Writing u = z−ζ, a = |u|², b = Re(u·ζ̄), the
/// function is a/t² + 2b/t + 1 with critical point t* = −a/b; the
/// minimum is 1 − b²/a when b < 0 and t* ≤ 1, else the endpoint value
/// |z|² at t = 1.
pub(crate) fn stolz_min_aperture_sq(vertex: Complex64, z: Complex64) -> f64 {
    let u = z - vertex;
    let a = u.norm_sqr();
    let b = (u * vertex.conj()).re;
    if b < 0.0 && a <= -b {
        1.0 - b * b / a
    } else {
        z.norm_sqr()
    }
}

/// Strict Stolz-angle membership.
pub fn in_stolz_angle(s: &StolzAngle, z: UnitDiskPoint) -> bool {
    s.contains(z.c())
}

/// Radius `r = 2η/(1+η²)` for which `Δ_η(α) ⊆ D_r(α)` for every α.
pub fn inclusion_radius(eta: f64) -> f64 {
    2.0 * eta / (1.0 + eta * eta)
}

/// A pseudo-hyperbolically equispaced net of disk points.
///
/// Ring radii advance from 0 by pseudo-hyperbolic steps of `separation`
/// (so the radii are near-dyadic for separation ≈ 1/3), the last ring is
/// placed at `r_limit`, and angular spacing on each ring keeps adjacent
/// points within half a step. Every point of `{|a| ≤ r_limit}` is within
/// pseudo-hyperbolic distance `separation` of some net point.
///
/// Points are emitted ring-major, angles ascending, starting with the
/// origin; the order is part of the contract (sweeps report the first
/// minimizer in this order).
pub fn pseudo_net(separation: f64, r_limit: f64) -> Result<Vec<UnitDiskPoint>> {
    if !(separation > 0.0 && separation < 1.0) {
        return Err(Error::config(
            "separation",
            format!("{separation} must lie in (0,1)"),
        ));
    }
    if !(r_limit > 0.0 && r_limit < 1.0) {
        return Err(Error::config(
            "r_limit",
            format!("{r_limit} must lie in (0,1)"),
        ));
    }

    // Half-step in the metric: tanh(atanh(s)/2). Two half-steps compose to
    // s/(1+s²/4) < s, which is what makes the covering radius ≤ separation.
    let half = (separation.atanh() / 2.0).tanh();

    let mut radii = vec![0.0];
    let mut r = 0.0f64;
    loop {
        let next = (r + separation) / (1.0 + r * separation);
        if next >= r_limit {
            break;
        }
        radii.push(next);
        r = next;
    }
    if pseudo_distance_c(Complex64::new(r, 0.0), Complex64::new(r_limit, 0.0))
        > half
    {
        radii.push(r_limit);
    }

    let mut net = Vec::new();
    for &rho in &radii {
        if rho == 0.0 {
            net.push(UnitDiskPoint { re: 0.0, im: 0.0 });
            continue;
        }
        // sin(Δθ/2) giving pseudo-hyperbolic spacing `half` along the ring.
        let s = half * (1.0 - rho * rho) / (2.0 * rho * (1.0 - half * half).sqrt());
        let n = if s >= 1.0 {
            4
        } else {
            (std::f64::consts::PI / s.asin()).ceil().max(4.0) as usize
        };
        for j in 0..n {
            let th = std::f64::consts::TAU * (j as f64) / (n as f64);
            net.push(UnitDiskPoint {
                re: rho * th.cos(),
                im: rho * th.sin(),
            });
        }
    }
    Ok(net)
}
