use latvib::acoustic;
use latvib::bloch::{self, dispersion_at};
use latvib::dos::{ids, sample_spectrum};
use latvib::lattice::{build_diamond, is_admissible, parse_crystal, serialize_crystal};
use proptest::prelude::*;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diamond_family_is_admissible(m1 in 0.2f64..5.0, m2 in 0.2f64..5.0, k in 0.1f64..10.0) {
        let d = build_diamond([m1, m2], k).unwrap();
        prop_assert!(is_admissible(&d));
        let back = parse_crystal(&serialize_crystal(&d)).unwrap();
        prop_assert_eq!(back.edges.len(), d.edges.len());
    }

    #[test]
    fn force_scaling_scales_spectrum(
        m1 in 0.2f64..5.0, m2 in 0.2f64..5.0, s in 0.1f64..10.0,
        k1 in 0.0f64..1.0, k2 in 0.0f64..1.0, k3 in 0.0f64..1.0,
    ) {
        let d = build_diamond([m1, m2], 1.0).unwrap();
        let base = dispersion_at(&d, [k1, k2, k3]).unwrap();
        let stiff = dispersion_at(&d.with_scaled_forces(s).unwrap(), [k1, k2, k3]).unwrap();
        let want: Vec<f64> = base.iter().map(|l| l * s).collect();
        prop_assert!(close(&stiff, &want, 1e-10));
    }

    #[test]
    fn inversion_symmetry(m1 in 0.2f64..5.0, m2 in 0.2f64..5.0, k1 in -1.0f64..1.0, k2 in -1.0f64..1.0, k3 in -1.0f64..1.0) {
        let d = build_diamond([m1, m2], 1.0).unwrap();
        let plus = dispersion_at(&d, [k1, k2, k3]).unwrap();
        let minus = dispersion_at(&d, [-k1, -k2, -k3]).unwrap();
        prop_assert!(close(&plus, &minus, 1e-10));
    }

    #[test]
    fn acoustic_speeds_sum_to_trace(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, m2 in 0.2f64..5.0) {
        let d = build_diamond([1.0, m2], 2.0).unwrap();
        let chi = [x, y, z];
        let ev = acoustic::acoustic_matrix(&d, &chi).eigenvalues().unwrap();
        let sum: f64 = ev.iter().sum();
        prop_assert!((sum - acoustic::acoustic_trace_sum(&d, &chi)).abs() <= 1e-12 * sum.abs().max(1.0));
    }
}

#[test]
fn unequal_masses_optical_top() {
    let d = build_diamond([1.0, 3.0], 1.0).unwrap();
    let s = sample_spectrum(&d, 8).unwrap();
    assert_eq!(ids(&s, f64::INFINITY), 6.0);
    let top = s.max_lambda();
    // reduced-mass optical level 4(1/m₁ + 1/m₂) at Γ is the top of the spectrum
    assert!((top - 4.0 * (1.0 + 1.0 / 3.0)).abs() < 1e-9, "{top}");
    let union = bloch::grid_union(&d, 2).unwrap();
    assert_eq!(union.len(), 6 * 8);
}
