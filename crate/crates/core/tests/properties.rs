use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use univalence_core::chain::{chain_eval, pde_residual, transfer_from_g, transfer_functions, transfer_sup};
use univalence_core::criterion::{criterion_check, Variant};
use univalence_core::extension::{becker_extend, beltrami_samples, extension_constants, ring_points};
use univalence_core::oracle::{covering_counts_on_circle, injectivity_scan, SampleCloud};
use univalence_core::{
    catalog, example31_closed_form, operator_eval, DiskGrid, FunctionSet, Functions32, Functions64, Params32, Params64,
    Quadrature32, Quadrature64, SeriesFunction, C64,
};

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn example31_functions() -> Functions64 {
    FunctionSet::new(catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity())
}

fn random_disk_point(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn identity_functions_reduce_operator_and_chain() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let fs = FunctionSet::identity();
    let q = Quadrature64::default();
    for gamma in [c(1.0, 0.0), c(2.0, 1.0), c(0.5, 0.8)] {
        let p = Params64::new(c(0.7, 0.1), c(-0.4, 0.3), gamma).unwrap().with_m(1.5).unwrap().with_a(0.8).unwrap();
        for _ in 0..50 {
            let z = random_disk_point(&mut rng, 0.95);
            let t = rng.gen_range(0.0..3.0);
            let f = operator_eval(z, &p, &fs, &q).unwrap().value;
            assert!((f - z).norm() <= 1e-12 * z.norm());
            let l = chain_eval(z, t, &p, &fs, &q).unwrap().value;
            let expected = z * (1.5 * 0.8 * t).exp();
            assert!((l - expected).norm() <= 1e-12 * expected.norm());
        }
    }
}

#[test]
fn operator_matches_hypergeometric_closed_form() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    let fs = example31_functions();
    let q = Quadrature64::default();
    for (alpha, beta, gamma) in [(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)), (c(0.3, 0.0), c(0.2, 0.0), c(1.2, 0.5))] {
        let p = Params64::new(alpha, beta, gamma).unwrap();
        for _ in 0..100 {
            let z = random_disk_point(&mut rng, 0.9);
            let numeric = operator_eval(z, &p, &fs, &q).unwrap().value;
            let closed = example31_closed_form(z, &p).unwrap();
            assert!((numeric - closed).norm() <= 1e-9 * z.norm(), "z = {z}");
        }
    }
}

#[test]
fn complex_gamma_reference_value() {
    let p = Params64::new(c(0.3, 0.0), c(0.2, 0.0), c(1.2, 0.5)).unwrap();
    let q = Quadrature64::default();
    let z = c(0.5, 0.0);
    let numeric = operator_eval(z, &p, &example31_functions(), &q).unwrap().value;
    let closed = example31_closed_form(z, &p).unwrap();
    assert!((numeric - closed).norm() < 1e-9);
}

#[test]
fn loewner_equation_on_a_grid() {
    let fs = example31_functions();
    let p = Params64::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
    let q = Quadrature64::default();
    for i in 0..20 {
        let z = Complex::from_polar(0.9 * (i % 5 + 1) as f64 / 5.0, std::f64::consts::TAU * i as f64 / 20.0 + 0.1);
        for j in 0..10 {
            let t = 0.01 + (2.0 - 0.01) * j as f64 / 9.0;
            let r = pde_residual(z, t, &p, &fs, &q).unwrap();
            assert!(r < 1e-6, "z = {z}, t = {t}, residual = {r}");
        }
    }
}

#[test]
fn chain_growth_is_exponential() {
    let q = Quadrature64::default();
    let p = Params64::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
    for f in catalog::all_default::<f64>() {
        if f.label().starts_with("koebe") {
            continue;
        }
        let fs = FunctionSet::new(f, SeriesFunction::identity(), SeriesFunction::identity());
        for k in 0..=10 {
            let t = 0.5 * k as f64;
            let ratio = chain_eval(c(0.5, 0.0), t, &p, &fs, &q).unwrap().value.norm() / t.exp();
            assert!((0.1..=10.0).contains(&ratio));
        }
    }
}

proptest! {
    #[test]
    fn transfer_disk_equivalence(gr in -5.0..5.0f64, gi in -5.0..5.0f64, m in 0.0..4.0f64, a in 0.05..5.0f64) {
        let g = c(gr, gi);
        let inside_disk = (g - (m - 1.0) / 2.0).norm() - (m + 1.0) / 2.0;
        prop_assume!(inside_disk.abs() > 1e-10);
        if let Ok(tr) = transfer_from_g(g, m, a) {
            prop_assume!((tr.w.norm() - 1.0).abs() > 1e-10);
            prop_assert_eq!(tr.w.norm() < 1.0, inside_disk < 0.0);
            // the identity behind it: |num|^2 - |den|^2 = 4a(|G|^2 - (m-1) Re G - m)
            let num = g * (1.0 + a) + 1.0 - m * a;
            let den = g * (1.0 - a) + 1.0 + m * a;
            let lhs = num.norm_sqr() - den.norm_sqr();
            let rhs = 4.0 * a * (g.norm_sqr() - (m - 1.0) * g.re - m);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + num.norm_sqr() + den.norm_sqr()));
        }
    }
}

#[test]
fn thm41_pass_bounds_the_transfer_and_the_dilatation() {
    let fs = example31_functions();
    let k = 0.3;
    let p = Params64::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap().with_k(k).unwrap();
    let report = criterion_check(Variant::Thm41, &p, &fs, &DiskGrid::default()).unwrap();
    assert!(report.passed);
    let (sup_w, _, _) = transfer_sup(&p, &fs, 0.95, 16, 3.0, 8).unwrap();
    assert!(sup_w <= k + 1e-8);
    let l = extension_constants(k, p.a).unwrap().l;
    let q = Quadrature64::default();
    let samples = beltrami_samples(&ring_points(1.05, 2.0, 4, 16), 1e-5, &p, &fs, &q).unwrap();
    assert!(samples.iter().all(|s| s.modulus <= l + 1e-3));
}

#[test]
fn passing_configuration_is_injective_on_samples() {
    let fs = example31_functions();
    let p = Params64::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
    let q = Quadrature64::default();
    let cloud = SampleCloud::polar(60, 60, 0.99, |z| {
        let r = operator_eval(z, &p, &fs, &q)?;
        Ok((!r.branch_crossing).then_some(r.value))
    })
    .unwrap();
    assert_eq!(injectivity_scan(&cloud, cloud.default_tolerance()).unwrap(), None);
    let targets: Vec<_> = (1..8).map(|j| operator_eval(c(0.1 * j as f64, 0.05), &p, &fs, &q).unwrap().value).collect();
    let counts = covering_counts_on_circle(|z| operator_eval(z, &p, &fs, &q).map(|r| r.value), 0.9, &targets).unwrap();
    assert!(counts.iter().all(|&w| w == 1));
}

#[test]
fn seam_is_continuous_for_catalog_functions() {
    let q = Quadrature64::default();
    let p = Params64::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    for f in [catalog::quadratic(0.25), catalog::exponential(0.5, 64)] {
        let fs = FunctionSet::new(f, SeriesFunction::identity(), SeriesFunction::identity());
        for j in 0..32 {
            let u = Complex::from_polar(1.0, std::f64::consts::TAU * j as f64 / 32.0);
            let jump = becker_extend(u * 1.001, &p, &fs, &q).unwrap() - becker_extend(u * 0.999, &p, &fs, &q).unwrap();
            assert!(jump.norm() < 1e-2);
        }
    }
}

#[test]
fn single_precision_smoke() {
    let fs = Functions32::new(catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity());
    let p = Params32::new(Complex::new(0.5, 0.0), Complex::new(0.5, 0.0), Complex::new(1.0, 0.0)).unwrap();
    let q = Quadrature32::new(16, 32, 1e-5).unwrap();
    let z = Complex::new(0.0f32, 0.8);
    let v = operator_eval(z, &p, &fs, &q).unwrap().value;
    assert!((v - Complex::new(-0.16, 0.8)).norm() < 1e-4);
    let closed = example31_closed_form(Complex::new(0.4f32, 0.3), &p).unwrap();
    let numeric = operator_eval(Complex::new(0.4f32, 0.3), &p, &fs, &q).unwrap().value;
    assert!((closed - numeric).norm() < 1e-4);
    let grid = DiskGrid::<f32>::dyadic(6, 64, 5).unwrap();
    assert!(criterion_check(Variant::Thm32, &p, &fs, &grid).unwrap().passed);
    let e = extension_constants(0.5f32, 0.5).unwrap();
    assert!((e.l - 5.0 / 7.0).abs() < 1e-6);
    let tr = transfer_functions(Complex::new(0.5f32, 0.0), 0.2, &p, &fs).unwrap();
    assert!(tr.w.norm() < 1.0);
}
