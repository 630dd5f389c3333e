//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured values. Tolerances are pinned here, in code.
//!
//! Run with `cargo test -p disklab --test acceptance -- --nocapture`
//! to see every line.

use num_complex::Complex64;

use disklab::criteria::{
    cross_validate, density_ratio, density_search, density_sweep, luecking_lemma_check,
    CrossValidateParams, DiskKind, LemmaSample, NetParams, Verdict,
};
use disklab::geometry::{
    in_pseudo_disk, inclusion_radius, EuclideanSubdisk, PseudoDisk, UnitDiskPoint,
};
use disklab::norms::{
    bmoa_norm, default_beta_net, h2_littlewood_paley, hardy_classical, besov_norm, NormContext,
    SpaceSpec,
};
use disklab::operator::{
    besov_test, lower_bound_estimate, moebius_test, random_polynomial, Lcg, TestFamily,
};
use disklab::quadrature::{
    integrate_subdisk, make_grid, AsEuclideanDisk, PolarGrid, SubdiskResolution, DEFAULT_R_MAX,
};
use disklab::symbols::SymbolExpr;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn udp(re: f64, im: f64) -> UnitDiskPoint {
    UnitDiskPoint::new(re, im).unwrap()
}

fn report(criterion: &str, pass: bool, details: &str) {
    println!(
        "acceptance {criterion}: {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {details}");
}

/// Concentric covering disk used to measure region areas by indicator
/// quadrature on an independent grid.
struct CoverDisk {
    center: Complex64,
    radius: f64,
}

impl AsEuclideanDisk for CoverDisk {
    fn euclidean(&self) -> (Complex64, f64) {
        (self.center, self.radius)
    }
}

fn indicator_area<P: Fn(Complex64) -> bool + Sync>(
    center: Complex64,
    radius: f64,
    rings: usize,
    pred: P,
) -> f64 {
    let cover = CoverDisk {
        center,
        radius: radius * 1.37,
    };
    integrate_subdisk(
        |z| if pred(z) { 1.0 } else { 0.0 },
        &cover,
        SubdiskResolution { rings, angular: 64 },
    )
    .unwrap()
}

#[test]
fn criterion_1_geometry_closed_forms() {
    let mut worst_pseudo = 0.0f64;
    let mut worst_euclid = 0.0f64;
    for &a in &[0.0, 0.5, 0.9] {
        for &eta in &[0.3, 0.5, 0.7] {
            let d = PseudoDisk::new(udp(a, 0.0), eta).unwrap();
            let (ce, re) = d.as_euclidean();
            let measured = indicator_area(ce, re, 1000, |z| d.contains(z));
            let exact = d.area();
            worst_pseudo = worst_pseudo.max((measured - exact).abs() / exact);

            let e = EuclideanSubdisk::new(udp(a, 0.0), eta).unwrap();
            let measured = indicator_area(e.center.c(), e.euclidean_radius(), 4000, |z| {
                e.contains(z)
            });
            let exact = e.area();
            worst_euclid = worst_euclid.max((measured - exact).abs() / exact);
        }
    }
    report(
        "criterion 1 (geometry closed forms)",
        worst_pseudo < 0.01 && worst_euclid < 0.001,
        &format!(
            "pseudo-disk area rel err {worst_pseudo:.2e} (tol 1e-2), subdisk rel err {worst_euclid:.2e} (tol 1e-3)"
        ),
    );
}

#[test]
fn criterion_2_inclusion_relation() {
    let mut rng = Lcg::new(0x1234_5678);
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let ra = 0.995 * rng.next_f64().sqrt();
        let ta = std::f64::consts::TAU * rng.next_f64();
        let alpha = udp(ra * ta.cos(), ra * ta.sin());
        let eta = 0.02 + 0.96 * rng.next_f64();
        let delta = EuclideanSubdisk::new(alpha, eta).unwrap();
        // z uniform in Δ_η(α)
        let rz = delta.euclidean_radius() * rng.next_f64().sqrt() * 0.9999;
        let tz = std::f64::consts::TAU * rng.next_f64();
        let z = alpha.c() + Complex64::from_polar(rz, tz);
        if z.norm() >= 1.0 {
            continue;
        }
        let big = PseudoDisk::new(alpha, inclusion_radius(eta)).unwrap();
        if !in_pseudo_disk(&big, UnitDiskPoint::from_complex(z).unwrap()) {
            violations += 1;
        }
    }
    report(
        "criterion 2 (inclusion of subdisks in pseudo-disks)",
        violations == 0,
        &format!("{violations} violations in 10000 samples"),
    );
}

#[test]
fn criterion_3_h2_oracle_triangle() {
    let grid = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
    let mut rng = Lcg::new(0xabcd);
    let mut worst_pair = 0.0f64;
    for deg in 1..=8 {
        let base = random_polynomial(&mut rng, deg);
        // center the coefficients so the family is not sign-biased
        let f = SymbolExpr::Sum(vec![
            base,
            SymbolExpr::Const(c64(-0.5 * (deg as f64 + 1.0).sqrt(), -0.3)),
        ]);
        let classical = hardy_classical(&f, 2.0, 32768).unwrap().value;
        let lp = h2_littlewood_paley(&f, &grid).unwrap().sqrt();
        worst_pair = worst_pair.max((classical - lp).abs() / lp);
    }

    let mut worst_moebius = 0.0f64;
    for &alpha in &[0.0, 0.3, 0.6, 0.9, 0.95] {
        let f = moebius_test(udp(alpha, 0.0));
        let n = hardy_classical(&f, 2.0, 65536).unwrap().value;
        let exact = 1.0 - alpha * alpha;
        worst_moebius = worst_moebius.max((n * n - exact).abs() / exact);
    }
    report(
        "criterion 3 (H² oracle triangle)",
        worst_pair < 0.02 && worst_moebius < 0.02,
        &format!(
            "classical vs square-function rel err {worst_pair:.2e}, Möbius-family rel err {worst_moebius:.2e} (tol 2e-2)"
        ),
    );
}

fn band_ratio(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(0.0f64, f64::max);
    hi / lo
}

#[test]
fn criterion_4_extremal_family_bands() {
    // Hardy: ‖ψ_α − α‖^p / (1−α) bands
    let mut hardy_bands = Vec::new();
    for &p in &[1.5, 2.0, 3.0] {
        let mut vals = Vec::new();
        for &alpha in &[0.3, 0.6, 0.9, 0.99] {
            let f = moebius_test(udp(alpha, 0.0));
            let n = hardy_classical(&f, p, 65536).unwrap().value;
            vals.push(n.powf(p) / (1.0 - alpha));
        }
        hardy_bands.push(band_ratio(&vals));
    }

    // BMOA band for ψ_α − α
    let grid = make_grid(8, 16, DEFAULT_R_MAX).unwrap();
    let net = default_beta_net();
    let mut bmoa_vals = Vec::new();
    for &alpha in &[0.0, 0.5, 0.9, 0.99] {
        let f = moebius_test(udp(alpha, 0.0));
        bmoa_vals.push(bmoa_norm(&f, &net, &grid).unwrap().value);
    }
    let bmoa_band = band_ratio(&bmoa_vals);

    // Besov band for f_α
    let grid10 = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
    let mut besov_bands = Vec::new();
    for &p in &[2.0, 3.0] {
        let mut vals = Vec::new();
        for &alpha in &[0.3, 0.6, 0.9] {
            let f = besov_test(udp(alpha, 0.0), p).unwrap();
            vals.push(besov_norm(&f, p, &grid10).unwrap().value);
        }
        besov_bands.push(band_ratio(&vals));
    }

    // bmoa(z)² = 1/2
    let z = SymbolExpr::identity();
    let bz = bmoa_norm(&z, &net, &grid).unwrap().value;
    let bz_err = (bz * bz - 0.5).abs() / 0.5;

    let pass = hardy_bands.iter().all(|&b| b <= 4.0)
        && bmoa_band <= 4.0
        && besov_bands.iter().all(|&b| b <= 4.0)
        && bz_err < 0.02;
    report(
        "criterion 4 (extremal-family bands)",
        pass,
        &format!(
            "hardy bands {hardy_bands:.3?}, bmoa band {bmoa_band:.3}, besov bands {besov_bands:.3?} (tol ≤ 4), bmoa(z)² rel err {bz_err:.2e} (tol 2e-2)"
        ),
    );
}

#[test]
fn criterion_5_lemma_suite() {
    let res = SubdiskResolution {
        rings: 32,
        angular: 201,
    };
    let mut rng = Lcg::new(0x5eed);
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut min_margin = f64::INFINITY;
    while checked < 1000 {
        let f = random_polynomial(&mut rng, 6);
        let r = 0.9 * rng.next_f64().sqrt();
        let th = std::f64::consts::TAU * rng.next_f64();
        let alpha = udp(r * th.cos(), r * th.sin());
        let eta = 0.1 + 0.4 * rng.next_f64();
        let lambda = 0.05 + 0.4 * rng.next_f64();
        let sample = LemmaSample::new(f, alpha, eta, lambda, 0.5).unwrap();
        let check = luecking_lemma_check(&sample, res).unwrap();
        if check.degenerate {
            continue;
        }
        checked += 1;
        min_margin = min_margin.min(check.lhs - check.rhs);
        if !check.holds {
            violations += 1;
        }
    }
    report(
        "criterion 5 (sub-mean-value lemma suite)",
        violations == 0,
        &format!("{violations} violations in {checked} non-degenerate samples (tol 1e-3), min margin {min_margin:.2e}"),
    );
}

#[test]
fn criterion_6_density_ground_truth() {
    let res_fine = SubdiskResolution {
        rings: 96,
        angular: 603,
    };
    let res_sweep = SubdiskResolution {
        rings: 24,
        angular: 151,
    };
    let g_z = SymbolExpr::identity();
    let g_half =
        SymbolExpr::rational(vec![c64(1.0, 0.0), c64(-1.0, 0.0)], vec![c64(2.0, 0.0)]).unwrap();

    // ratio at the origin
    let d0 = PseudoDisk::new(udp(0.0, 0.0), 0.5).unwrap();
    let r0 = density_ratio(&g_z, 0.25, &d0, res_fine).unwrap();
    let origin_ok = (r0 - 0.75).abs() <= 0.01 * 0.75;

    // sweep infimum for g = z
    let net = NetParams::default().build().unwrap();
    let sweep = density_sweep(&g_z, 0.25, 0.5, &net, res_sweep, DiskKind::Pseudo).unwrap();
    let sweep_ok = sweep.inf_ratio >= 0.5;

    // deep center for g = (1−z)/2
    let deep = udp(1.0 - f64::powi(2.0, -10), 0.0);
    let d_deep = PseudoDisk::new(deep, 0.5).unwrap();
    let r_deep = density_ratio(&g_half, 0.25, &d_deep, res_fine).unwrap();
    let deep_ok = r_deep < 0.05;

    // verdicts in both disk families
    let mut verdicts = Vec::new();
    for kind in [DiskKind::Pseudo, DiskKind::Euclidean] {
        let hold = density_search(
            &g_z,
            &disklab::criteria::default_c_grid_for(&g_z),
            &[0.5, 0.7, 0.9],
            NetParams::default(),
            0.01,
            res_sweep,
            kind,
        )
        .unwrap()
        .verdict;
        let fail = density_search(
            &g_half,
            &disklab::criteria::default_c_grid_for(&g_half),
            &[0.5, 0.7, 0.9],
            NetParams::default(),
            0.01,
            res_sweep,
            kind,
        )
        .unwrap()
        .verdict;
        verdicts.push((kind, hold, fail));
    }
    let verdicts_ok = verdicts
        .iter()
        .all(|&(_, h, f)| h == Verdict::Holds && f == Verdict::Fails);

    report(
        "criterion 6 (density checker ground truth)",
        origin_ok && sweep_ok && deep_ok && verdicts_ok,
        &format!(
            "ratio(0) = {r0:.4} (want 0.75±1%), sweep inf = {:.4} (≥0.5), deep ratio = {r_deep:.4} (<0.05), verdicts {verdicts:?}",
            sweep.inf_ratio
        ),
    );
}

fn canonical_symbols() -> Vec<(&'static str, SymbolExpr)> {
    vec![
        ("const-1", SymbolExpr::constant(c64(1.0, 0.0))),
        ("z", SymbolExpr::identity()),
        (
            "blaschke-half",
            SymbolExpr::blaschke(vec![c64(0.5, 0.0)]).unwrap(),
        ),
        (
            "blaschke-pair",
            SymbolExpr::blaschke(vec![c64(0.5, 0.0), c64(-0.5, 0.0)]).unwrap(),
        ),
        (
            "one-minus-z-over-2",
            SymbolExpr::rational(vec![c64(1.0, 0.0), c64(-1.0, 0.0)], vec![c64(2.0, 0.0)])
                .unwrap(),
        ),
        (
            "three-plus-z-over-4",
            SymbolExpr::rational(vec![c64(3.0, 0.0), c64(1.0, 0.0)], vec![c64(4.0, 0.0)])
                .unwrap(),
        ),
    ]
}

#[test]
fn criterion_7_equivalence_cross_validation() {
    let spaces = [
        SpaceSpec::hardy(2.0),
        SpaceSpec::hardy(3.0),
        SpaceSpec::bmoa(),
        SpaceSpec::besov(2.0),
    ];
    let params = CrossValidateParams::default();
    let mut pairs = 0usize;
    let mut agreements = 0usize;
    let mut lines = Vec::new();
    for (name, g) in canonical_symbols() {
        let rep = cross_validate(&g, &spaces, &params).unwrap();
        let expected = name != "one-minus-z-over-2";
        let density_holds = rep.density.verdict == Verdict::Holds;
        assert_eq!(
            density_holds, expected,
            "{name}: density verdict {:?}",
            rep.density.verdict
        );
        for s in &rep.spaces {
            pairs += 1;
            if s.agrees {
                agreements += 1;
            }
            if name == "z" {
                assert!(
                    s.inf_ratio >= 0.1,
                    "z in {} has inf {}",
                    s.space.label(),
                    s.inf_ratio
                );
            }
        }
        lines.push(format!(
            "{name}: density {:?}, agree {}",
            rep.density.verdict, rep.all_agree
        ));
    }
    report(
        "criterion 7 (equivalence cross-validation)",
        pairs >= 12 && agreements == pairs,
        &format!("{agreements}/{pairs} verdict pairs agree; {}", lines.join("; ")),
    );
}

#[test]
fn criterion_8_positive_lower_bound_witness() {
    // g = (3+z)/4 has inf |g| = 1/2 on the disk
    let g = SymbolExpr::rational(vec![c64(3.0, 0.0), c64(1.0, 0.0)], vec![c64(4.0, 0.0)]).unwrap();
    let grid = make_grid(8, 16, DEFAULT_R_MAX).unwrap();
    let net = default_beta_net();
    let ctx = NormContext {
        grid: &grid,
        beta_net: &net,
        n_boundary: 4096,
        n_circle: 32768,
    };
    let alpha_net: Vec<UnitDiskPoint> = [0.3, 0.6, 0.9, 0.99]
        .iter()
        .flat_map(|&r: &f64| [udp(r, 0.0), udp(-r, 0.0)])
        .collect();
    let families: Vec<(&str, TestFamily)> = vec![
        (
            "moebius",
            TestFamily::MoebiusHardy {
                alpha_net: alpha_net.clone(),
            },
        ),
        ("monomials", TestFamily::Monomials { maxdeg: 4 }),
        (
            "random",
            TestFamily::RandomPolynomials {
                count: 5,
                maxdeg: 4,
                seed: 11,
            },
        ),
    ];
    let besov_family = |p: f64| TestFamily::BesovTest {
        p,
        alpha_net: alpha_net.clone(),
    };
    let derivative_spaces = [
        SpaceSpec::hardy(1.5),
        SpaceSpec::hardy(2.0),
        SpaceSpec::hardy(3.0),
        SpaceSpec::bmoa(),
        SpaceSpec::qp(1.0),
        SpaceSpec::besov(2.0),
        SpaceSpec::besov(3.0),
    ];
    let mut min_ratio = f64::INFINITY;
    let mut worst = String::new();
    for spec in &derivative_spaces {
        let mut fams: Vec<&TestFamily> = families.iter().map(|(_, f)| f).collect();
        let bf;
        if matches!(spec.space, disklab::norms::Space::Besov) {
            bf = besov_family(spec.p);
            fams.push(&bf);
        }
        for family in fams {
            let rep = lower_bound_estimate(&g, spec, family, &ctx).unwrap();
            for s in &rep.per_sample {
                if s.ratio < min_ratio {
                    min_ratio = s.ratio;
                    worst = format!("{} / {}", spec.label(), s.label);
                }
            }
        }
    }
    report(
        "criterion 8 (positive lower bound witness)",
        min_ratio >= 0.48,
        &format!("min family ratio {min_ratio:.4} at {worst} (tol ≥ 0.48)"),
    );
}

/// Shared-grid sanity for the suite itself: the default grid really is
/// the size the criteria assume.
#[test]
fn acceptance_grid_sanity() {
    let grid: PolarGrid = make_grid(10, 32, DEFAULT_R_MAX).unwrap();
    assert!(grid.cell_count() > 500_000 && grid.cell_count() < 1_000_000);
}
