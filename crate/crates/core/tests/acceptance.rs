//! End-to-end checks of the physical claims, one PASS/FAIL line each.
//!
//! Runs as a plain binary so every criterion is reported even when an
//! earlier one fails; the process exits nonzero if any criterion fails.

use latvib::acoustic::{self, random_unit_vectors};
use latvib::bloch;
use latvib::dos::{self, sample_spectrum, spectral_average};
use latvib::lattice::{build_cubic, build_diamond};
use latvib::numerics::{bose_integral, BoseKind};
use latvib::thermo::{self, PhysicalConstants};
use latvib::CrystalSpec;
use std::f64::consts::PI;

const NAT: PhysicalConstants = PhysicalConstants::NATURAL;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn examples() -> Vec<CrystalSpec> {
    vec![build_cubic(1.0, 1.0).unwrap(), build_diamond([1.0, 1.0], 1.0).unwrap()]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for c in examples() {
        for n in [2, 4, 8] {
            let s = sample_spectrum(&c, n).unwrap();
            let total = spectral_average(&s, |_| 1.0);
            pass &= total == c.dof() as f64;
            worst = worst.max((total - c.dof() as f64).abs());
        }
    }
    outcome(pass, format!("max |avg(1) - 3n| = {worst:e} over N in {{2,4,8}}"))
}

fn supercell_oracle() -> Outcome {
    let (cubic, diamond) = (build_cubic(1.0, 1.0).unwrap(), build_diamond([1.0, 1.0], 1.0).unwrap());
    let cases = [(&cubic, 2), (&cubic, 3), (&cubic, 4), (&diamond, 2), (&diamond, 3)];
    let (mut spec_err, mut trace_err): (f64, f64) = (0.0, 0.0);
    for (c, n) in cases {
        let sc = bloch::supercell_spectrum(c, n).unwrap();
        let grid = bloch::grid_union(c, n).unwrap();
        spec_err = spec_err.max(bloch::multiset_discrepancy(&sc, &grid));
        let cells = (n * n * n) as f64;
        let lhs: f64 = sc.iter().map(|l| (-l).exp()).sum::<f64>() / cells;
        let rhs = spectral_average(&sample_spectrum(c, n).unwrap(), |l| (-l).exp());
        trace_err = trace_err.max(rel(lhs, rhs));
    }
    outcome(
        spec_err <= 1e-9 && trace_err <= 1e-10,
        format!("multiset {spec_err:.2e} (tol 1e-9), trace of e^-lambda {trace_err:.2e} (tol 1e-10)"),
    )
}

fn acoustic_limit() -> Outcome {
    let t = 1e-3;
    let (mut worst, mut worst_ratio) = (0.0f64, f64::INFINITY);
    for (i, c) in examples().iter().enumerate() {
        for chi in random_unit_vectors(100 + i as u64, 20) {
            let exact = acoustic::acoustic_matrix(c, &chi).eigenvalues().unwrap();
            let err = |t: f64| {
                let approx = acoustic::linear_dispersion_limit(c, &chi, t).unwrap();
                (0..3).map(|a| rel(approx[a], exact[a])).fold(0.0, f64::max)
            };
            let (e0, e2) = (err(t), err(t / 4.0));
            worst = worst.max(e0);
            if e0 > 1e-12 {
                worst_ratio = worst_ratio.min(e0 / e2);
            }
        }
    }
    outcome(
        worst <= 1e-3 && worst_ratio >= 4.0,
        format!("max rel error {worst:.2e} at t=1e-3 (tol 1e-3), min improvement {worst_ratio:.1}x over two halvings (need 4x)"),
    )
}

fn trace_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, c) in examples().iter().enumerate() {
        for chi in random_unit_vectors(200 + i as u64, 100) {
            let chi = latvib::geom::scale(&chi, 0.5 + (chi[0] + 1.0));
            let ev = acoustic::acoustic_matrix(c, &chi).eigenvalues().unwrap();
            let sum: f64 = ev.iter().sum();
            worst = worst.max(rel(sum, acoustic::acoustic_trace_sum(c, &chi)));
        }
    }
    outcome(worst <= 1e-12, format!("max rel deviation {worst:.2e} (tol 1e-12)"))
}

fn debye_constant() -> Outcome {
    let targets = [1.0 / (2.0 * PI * PI), 2.0 * 2f64.sqrt() / (PI * PI)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, want) in examples().iter().zip(targets) {
        let quad = acoustic::c0_quadrature(c, 16).unwrap();
        let fit = dos::fit_c0(c, 40, None).unwrap();
        pass &= (quad - want).abs() <= 1e-10 && rel(fit, quad) <= 0.05;
        parts.push(format!(
            "{}: quad {quad:.10} (|d| {:.1e}), fit {fit:.5} ({:+.2}%)",
            c.name,
            (quad - want).abs(),
            100.0 * (fit / quad - 1.0)
        ));
    }
    outcome(pass, parts.join("; "))
}

fn isotropic_closed_form() -> Outcome {
    let cubic = build_cubic(1.0, 1.0).unwrap();
    let iso = acoustic::c0_isotropic(1.0, 1.0, 1.0).unwrap();
    let quad = acoustic::c0_quadrature(&cubic, 16).unwrap();
    outcome((iso - quad).abs() <= 1e-10, format!("isotropic {iso:.12} vs quadrature {quad:.12}"))
}

fn t3_law() -> Outcome {
    let s = sample_spectrum(&build_cubic(1.0, 1.0).unwrap(), 32).unwrap();
    let want = 0.4 * PI * PI;
    let mut pass = true;
    let mut parts = Vec::new();
    for t in [0.02, 0.03, 0.05] {
        let ratio = thermo::specific_heat(&s, t, &NAT).unwrap() / t.powi(3);
        pass &= rel(ratio, want) <= 0.03;
        parts.push(format!("T={t}: {ratio:.4}"));
    }
    outcome(pass, format!("C/T^3 at N=32 vs {want:.4} (tol 3%): {}", parts.join(", ")))
}

fn dulong_petit() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for c in examples() {
        let s = sample_spectrum(&c, 8).unwrap();
        let t = 100.0 * s.max_lambda().sqrt();
        let heat = thermo::specific_heat(&s, t, &NAT).unwrap();
        let want = c.dof() as f64;
        pass &= rel(heat, want) <= 5e-3;
        parts.push(format!("{}: C={heat:.6} vs {want}", c.name));
    }
    outcome(pass, parts.join("; "))
}

fn debye_vs_exact() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, grid) in examples().iter().zip([32, 24]) {
        let n = c.vertex_count();
        let c0 = acoustic::c0_quadrature(c, 16).unwrap();
        let theta = thermo::debye_temperature(thermo::debye_lambda(c0, n).unwrap(), &NAT).unwrap();
        let s = sample_spectrum(c, grid).unwrap();
        let mut worst: f64 = 0.0;
        for div in [20.0, 30.0, 50.0] {
            let t = theta / div;
            let exact = thermo::specific_heat(&s, t, &NAT).unwrap();
            let model = thermo::debye_specific_heat(theta, n, t, &NAT).unwrap();
            worst = worst.max(rel(model, exact));
        }
        let t = theta / 50.0;
        let low = thermo::debye_specific_heat(theta, n, t, &NAT).unwrap();
        let law = 12.0 / 5.0 * PI.powi(4) * n as f64 * (t / theta).powi(3);
        let law_err = rel(low, law);
        pass &= worst <= 0.02 && law_err <= 0.01;
        parts.push(format!(
            "{}: max |Debye/exact - 1| {:.2}% (tol 2%), low-T law {:.3}% (tol 1%)",
            c.name,
            100.0 * worst,
            100.0 * law_err
        ));
    }
    outcome(pass, parts.join("; "))
}

fn einstein_decay() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for c in examples() {
        let n = c.vertex_count();
        let c0 = acoustic::c0_quadrature(&c, 16).unwrap();
        let ld = thermo::debye_lambda(c0, n).unwrap();
        let theta = thermo::debye_temperature(ld, &NAT).unwrap();
        let (_, coeff) = thermo::t3_coefficients(c0, &NAT).unwrap();
        let t = theta / 50.0;
        let ratio = thermo::einstein_specific_heat(ld, n, t, &NAT).unwrap() / t.powi(3) / coeff;
        pass &= ratio < 1e-3;
        parts.push(format!("{}: C_E/(coeff T^3) = {ratio:.2e}", c.name));
    }
    outcome(pass, parts.join("; "))
}

fn bose_integrals() -> Outcome {
    let plain = bose_integral(3, BoseKind::Plain).unwrap();
    let squared = bose_integral(4, BoseKind::Squared).unwrap();
    let (e1, e2) = (rel(plain, PI.powi(4) / 15.0), rel(squared, 4.0 * PI.powi(4) / 15.0));
    outcome(e1 <= 1e-8 && e2 <= 1e-8, format!("rel errors {e1:.1e}, {e2:.1e} (tol 1e-8)"))
}

fn continuum_heat_trace() -> Outcome {
    let (mut closed, mut laplace): (f64, f64) = (0.0, 0.0);
    for c in examples() {
        let c0 = acoustic::c0_quadrature(&c, 16).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let q = acoustic::continuum_heat_trace(&c, t, 16).unwrap();
            closed = closed.max(rel(q, acoustic::heat_trace_closed_form(c0, t)));
            laplace = laplace.max(rel(q, acoustic::continuum_laplace(c0, t).unwrap()));
        }
    }
    outcome(
        closed <= 1e-10 && laplace <= 1e-8,
        format!("closed form {closed:.1e} (tol 1e-10), Laplace {laplace:.1e} (tol 1e-8)"),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("normalization", normalization),
        ("bloch-supercell oracle", supercell_oracle),
        ("acoustic matrix limit", acoustic_limit),
        ("trace-sum identity", trace_sum),
        ("debye constant", debye_constant),
        ("isotropic closed form", isotropic_closed_form),
        ("T^3 law at N=32", t3_law),
        ("dulong-petit", dulong_petit),
        ("debye vs exact", debye_vs_exact),
        ("einstein decay", einstein_decay),
        ("bose integrals", bose_integrals),
        ("continuum heat trace", continuum_heat_trace),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {} [{:.1}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
