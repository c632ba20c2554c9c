use std::f64::consts::PI;
use std::sync::Arc;

use starpf_core::derham::assemble_complex;
use starpf_core::geometry::{centered_square, StarDomain};
use starpf_core::special::{disk_pf_gradient, disk_pf_rotation};
use starpf_core::spectra::{domain_mesh, pencil_spectrum, spectrum_report, ComplexSpectra};

fn assert_refines(domain: StarDomain, oracle: [f64; 2]) {
    let domain = Arc::new(domain);
    let reports: Vec<_> = [8, 16, 32].iter().map(|&r| spectrum_report(domain.clone(), r).unwrap()).collect();
    for k in 0..2 {
        let errors: Vec<f64> = reports.iter().map(|r| (r.pf(k) - oracle[k]).abs()).collect();
        assert!(errors[1] < errors[0] && errors[2] < errors[1], "k={k}: {errors:?}");
        let steps = [reports[1].pf(k) - reports[0].pf(k), reports[2].pf(k) - reports[1].pf(k)];
        assert!(steps[1].abs() < steps[0].abs(), "k={k}: {steps:?}");
    }
}

#[test]
fn disk_constants_converge_under_refinement() {
    assert_refines(StarDomain::ball(1.0).unwrap(), [disk_pf_gradient(), disk_pf_rotation()]);
}

#[test]
fn square_constants_converge_under_refinement() {
    assert_refines(centered_square(PI / 2.0).unwrap(), [1.0, 0.5f64.sqrt()]);
}

#[test]
fn first_hodge_eigenvalue_is_the_smaller_branch_minimum() {
    let complex = assemble_complex(&domain_mesh(Arc::new(centered_square(1.0).unwrap()), 10).unwrap()).unwrap();
    let spectra = ComplexSpectra::compute(&complex, 5).unwrap();
    let (g, r) = (spectra.gradient.nonzero[0], spectra.rotation.nonzero[0]);
    let h = spectra.hodge(1, 5).unwrap();
    assert!((h[0] - g.min(r)).abs() <= 1e-10 * h[0]);
    assert_eq!(spectra.hodge(0, 5).unwrap()[0], g);
    assert_eq!(spectra.hodge(2, 5).unwrap()[0], r);
    let c = [spectra.pf_constant(0).unwrap(), spectra.pf_constant(1).unwrap()];
    assert!((h[0] - c[0].max(c[1]).powi(-2)).abs() <= 1e-10 * h[0]);
    assert!(spectra.hodge(3, 5).is_err());
}

#[test]
fn ordering_and_bounds_hold_on_a_disk() {
    let report = spectrum_report(Arc::new(StarDomain::ball(2.0).unwrap()), 12).unwrap();
    assert!(report.ordering_pass);
    assert!(report.bounds.iter().all(|b| b.pass), "{:?}", report.bounds);
    // the equal-area disk is the domain itself
    assert!((report.bounds[0].lower / report.pf(0) - 1.0).abs() < 0.01);
}

#[test]
fn spectrum_report_serializes_with_string_keys() {
    let report = spectrum_report(Arc::new(StarDomain::ball(1.0).unwrap()), 4).unwrap();
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert!(v["pf"]["0"].is_f64() && v["pf"]["1"].is_f64());
    assert_eq!(v["hodge"]["2"].as_array().unwrap().len(), 5);
    assert!(v["ordering_pass"].as_bool().unwrap());
}

#[test]
fn scaling_doubles_the_constants() {
    let square = centered_square(1.0).unwrap();
    let a = pencil_spectrum(&assemble_complex(&domain_mesh(Arc::new(square.clone()), 6).unwrap()).unwrap(), 1, 1)
        .unwrap();
    let b = pencil_spectrum(
        &assemble_complex(&domain_mesh(Arc::new(square.scaled(2.0).unwrap()), 6).unwrap()).unwrap(),
        1,
        1,
    )
    .unwrap();
    assert!((a.nonzero[0] / b.nonzero[0] - 4.0).abs() < 1e-8);
}
