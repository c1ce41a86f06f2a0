use std::collections::BTreeMap;

use finsler::error::FinslerError;
use finsler::jets::{lift, MultiIndex};
use finsler::metrics::*;
use proptest::prelude::*;

fn fixture(name: &str, dim: usize, params: &[(&str, f64)]) -> MetricFixture {
    let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    builtin_fixture(name, dim, &map).unwrap()
}

fn pt(x: &[f64], y: &[f64]) -> ChartPoint {
    ChartPoint::new(x.to_vec(), y.to_vec()).unwrap()
}

#[test]
fn closed_forms() {
    assert_eq!(fixture("euclidean", 3, &[]).finsler_value(&pt(&[0.0; 3], &[3.0, 4.0, 0.0])).unwrap(), 5.0);
    assert_eq!(fixture("funk", 2, &[]).finsler_value(&pt(&[0.0; 2], &[1.0, 0.0])).unwrap(), 1.0);
    let q = fixture("quartic-minkowski", 2, &[("c", 1.0)]).finsler_value(&pt(&[0.4, 9.0], &[1.0, 1.0])).unwrap();
    assert!((q - 6f64.powf(0.25)).abs() < 1e-15);

    // Funk at a general point against the textbook formula.
    let (x, y) = ([0.3, -0.2, 0.1], [0.5, 1.0, -0.7]);
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let want = (((1.0 - x2) * y2 + xy * xy).sqrt() + xy) / (1.0 - x2);
    let got = fixture("funk", 3, &[]).finsler_value(&pt(&x, &y)).unwrap();
    assert!((got - want).abs() < 1e-14);

    let k = -0.5;
    let got = fixture("riemann-const-k", 3, &[("k", k)]).finsler_value(&pt(&x, &y)).unwrap();
    assert!((got - 2.0 * y2.sqrt() / (1.0 + k * x2)).abs() < 1e-14);
}

#[test]
fn randers_matches_its_definition() {
    // a_ij = (1 + σ|x|²)δ_ij + τ x_i x_j, b ∝ u = (1, x_1, …) with ‖b‖_a = β.
    let (sigma, tau, beta) = (0.3, 0.2, 0.5);
    let f = fixture("randers-generic", 3, &[("sigma", sigma), ("tau", tau), ("b-norm", beta)]);
    let (x, y) = ([0.2, -0.1, 0.3], [0.4, 0.9, -0.3]);
    let s = 1.0 + sigma * x.iter().map(|v| v * v).sum::<f64>();
    let a = |i: usize, j: usize| if i == j { s } else { 0.0 } + tau * x[i] * x[j];
    let form = |u: &[f64], v: &[f64]| -> f64 {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| a(i, j) * u[i] * v[j]).sum()
    };
    let u = [1.0, x[0], x[1]];
    // b_i = β u_i / ‖u‖, with the norm of the covector u taken in a^{-1}.
    let alpha = form(&y, &y).sqrt();
    let got = f.finsler_value(&pt(&x, &y)).unwrap();
    let u_norm_inv: f64 = {
        let m = nalgebra::Matrix3::from_fn(|i, j| a(i, j));
        let w = m.try_inverse().unwrap() * nalgebra::Vector3::from_row_slice(&u);
        (w.dot(&nalgebra::Vector3::from_row_slice(&u))).sqrt()
    };
    let b_y: f64 = u.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>() * beta / u_norm_inv;
    assert!((got - (alpha + b_y)).abs() < 1e-14, "{got} vs {}", alpha + b_y);
}

#[test]
fn parameter_errors() {
    let err = |name: &str, dim: usize, params: &[(&str, f64)]| {
        let map: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        builtin_fixture(name, dim, &map).unwrap_err()
    };
    assert!(matches!(err("nosuch", 3, &[]), FinslerError::UnknownFixture { .. }));
    for (name, dim, params) in [
        ("euclidean", 1, vec![]),
        ("euclidean", MAX_DIM + 1, vec![]),
        ("euclidean", 3, vec![("k", 1.0)]),
        ("riemann-const-k", 3, vec![("c", 1.0)]),
        ("riemann-const-k", 3, vec![("k", f64::NAN)]),
        ("quartic-minkowski", 3, vec![("c", -0.1)]),
        ("randers-generic", 3, vec![("b-norm", 1.0)]),
        ("randers-generic", 3, vec![("sigma", -1.0)]),
    ] {
        assert!(
            matches!(err(name, dim, &params), FinslerError::InvalidParams { .. }),
            "{name} {dim} {params:?}"
        );
    }
}

#[test]
fn defaults_are_reported() {
    let f = fixture("randers-generic", 2, &[("tau", 0.0)]);
    assert_eq!(f.params()["tau"], 0.0);
    assert_eq!(f.params()["sigma"], 0.3);
    assert_eq!(fixture("riemann-const-k", 2, &[]).params()["k"], 1.0);
    for name in FIXTURE_NAMES {
        assert!(fixture_defaults(name).is_some());
        assert!(fixture_summary(name).is_some());
    }
}

#[test]
fn points_outside_the_domain_are_rejected() {
    let funk = fixture("funk", 2, &[]);
    assert!(matches!(funk.finsler_value(&pt(&[0.8, 0.8], &[1.0, 0.0])), Err(FinslerError::OutsideDomain { .. })));
    let sphere = fixture("riemann-const-k", 2, &[("k", -1.0)]);
    assert!(matches!(sphere.finsler_value(&pt(&[1.0, 0.5], &[1.0, 0.0])), Err(FinslerError::OutsideDomain { .. })));
    assert!(ChartPoint::new(vec![0.0], vec![0.0]).is_err());
    assert!(ChartPoint::new(vec![0.0], vec![1.0, 0.0]).is_err());
    assert!(ChartPoint::new(vec![f64::NAN], vec![1.0]).is_err());
}

#[test]
fn sampling_is_deterministic_and_in_domain() {
    let e = fixture("euclidean", 3, &[]);
    let a = sample_points(&e, &SampleSpec::new(10, 7)).unwrap();
    assert_eq!(a.len(), 10);
    assert_eq!(a, sample_points(&e, &SampleSpec::new(10, 7)).unwrap());
    assert_ne!(a, sample_points(&e, &SampleSpec::new(10, 8)).unwrap());
    for p in &a {
        let norm: f64 = p.y.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    let funk = fixture("funk", 2, &[]);
    let wide = SampleSpec::new(200, 3).with_x_box(-0.9, 0.9);
    for p in sample_points(&funk, &wide).unwrap() {
        assert!(p.x.iter().map(|v| v * v).sum::<f64>() < 1.0);
    }

    let mut impossible = SampleSpec::new(5, 1).with_x_box(2.0, 3.0);
    impossible.max_tries = 50;
    assert!(matches!(sample_points(&funk, &impossible), Err(FinslerError::SamplingExhausted { .. })));
    assert!(sample_points(&funk, &SampleSpec::new(0, 1)).is_err());
}

#[test]
fn validation() {
    let r = validate_fixture(&fixture("euclidean", 3, &[]), &SampleSpec::new(20, 1)).unwrap();
    assert!((r.min_eigenvalue - 1.0).abs() < 1e-12);
    assert!(r.max_homogeneity_error < 1e-14);

    let q = fixture("quartic-minkowski", 3, &[]);
    for p in sample_points(&q, &SampleSpec::new(30, 5)).unwrap() {
        let g = q.fundamental_tensor_raw(&p).unwrap();
        assert!(Spectrum::of(&g).min > 0.0);
    }

    let near_boundary = fixture("randers-generic", 3, &[("b-norm", 0.99)]);
    let r = validate_fixture(&near_boundary, &SampleSpec::new(30, 2)).unwrap();
    assert!(r.min_eigenvalue > 0.0);

    let flat_quartic = fixture("quartic-minkowski", 3, &[("c", 0.0)]);
    match validate_fixture(&flat_quartic, &SampleSpec::new(10, 1)) {
        Err(FinslerError::FixtureInvalid { witness, .. }) => {
            // The failure is on a coordinate axis.
            assert_eq!(witness.y.iter().filter(|v| **v != 0.0).count(), 1, "{witness}");
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}

fn any_fixture() -> impl Strategy<Value = (MetricFixture, u64)> {
    (0usize..FIXTURE_NAMES.len(), 2usize..5, any::<u64>())
        .prop_map(|(i, n, seed)| (fixture(FIXTURE_NAMES[i], n, &[]), seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn positive_and_homogeneous((f, seed) in any_fixture(), lambda in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        for p in sample_points(&f, &SampleSpec::new(4, seed)).unwrap() {
            let l = f.finsler_value(&p).unwrap();
            prop_assert!(l > 0.0);
            let scaled = f.finsler_value(&p.scaled(lambda)).unwrap();
            prop_assert!((scaled - lambda * l).abs() <= 1e-10 * lambda * l);
        }
    }

    #[test]
    fn riemannian_energy_is_quadratic(k in -0.8f64..2.0, seed in any::<u64>(), n in 2usize..4) {
        for f in [fixture("euclidean", n, &[]), fixture("riemann-const-k", n, &[("k", k)])] {
            for p in sample_points(&f, &SampleSpec::new(3, seed)).unwrap() {
                let e = lift(|x, y| { let l = f.finsler_jet(x, y)?; Ok(&l * &l) }, &p, 3).unwrap();
                for i in 0..n { for j in 0..n { for l in 0..n {
                    let mut ex = vec![0u32; 2 * n];
                    ex[n + i] += 1; ex[n + j] += 1; ex[n + l] += 1;
                    let d3 = e.partial(&MultiIndex::new(ex)).unwrap();
                    prop_assert!(d3.abs() < 1e-9, "{d3}");
                }}}
            }
        }
    }

    #[test]
    fn samples_satisfy_the_domain((f, seed) in any_fixture(), count in 1usize..20) {
        let pts = sample_points(&f, &SampleSpec::new(count, seed)).unwrap();
        prop_assert_eq!(pts.len(), count);
        for p in &pts {
            prop_assert!(f.in_domain(p));
            prop_assert!(p.y.iter().any(|v| *v != 0.0));
        }
    }
}
