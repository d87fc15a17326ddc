use std::f64::consts::PI;

use fourier_tauber::laplace::{
    berezin_liyau, counting_bounds, lambda_grid, layer_data, loglog_slope, optimal_theta,
    remainder_scan, spectral_bounds, BoxConstants, BoxDomain, Spectrum,
};
use fourier_tauber::quadrature::Adaptive;
use fourier_tauber::Error;
use proptest::prelude::*;

fn spectrum(domain: BoxDomain, cutoff: f64) -> (Spectrum, BoxConstants) {
    let c = BoxConstants::new(domain.dim()).unwrap();
    (Spectrum::new(domain, cutoff).unwrap(), c)
}

#[test]
fn spectral_function_examples() {
    let (s, _) = spectrum(BoxDomain::interval_pi(), 400.0);
    let e = s.spectral_function(&[PI / 2.0], 100.0).unwrap();
    assert!((e - 10.0 / PI).abs() < 1e-13);
    for x in [0.3, 1.1, 2.0] {
        let a = s.spectral_function(&[x], 57.3).unwrap();
        let b = s.spectral_function(&[PI - x], 57.3).unwrap();
        assert!((a - b).abs() < 1e-13);
    }
    assert_eq!(s.spectral_function(&[1.0], 0.99).unwrap(), 0.0);
    assert!(matches!(
        s.spectral_function(&[PI], 10.0),
        Err(Error::OutsideDomain(_))
    ));
}

#[test]
fn midpoint_convention_at_eigenvalues() {
    let (s, _) = spectrum(BoxDomain::unit_cube(2), 500.0);
    let lambda = 5.0 * PI * PI;
    let below = s.counting(lambda * (1.0 - 1e-9)).unwrap();
    let above = s.counting(lambda * (1.0 + 1e-9)).unwrap();
    assert_eq!(above - below, 2.0);
    assert_eq!(s.counting(lambda).unwrap(), 0.5 * (below + above));
    let x = [0.3, 0.6];
    let e = s.spectral_function(&x, lambda).unwrap();
    let eb = s.spectral_function(&x, lambda * (1.0 - 1e-9)).unwrap();
    let ea = s.spectral_function(&x, lambda * (1.0 + 1e-9)).unwrap();
    assert!((e - 0.5 * (ea + eb)).abs() < 1e-12);
}

#[test]
fn spectral_function_integrates_to_the_count() {
    let (s, _) = spectrum(BoxDomain::interval_pi(), 400.0);
    for lambda in [3.5, 50.5, 301.0] {
        let total = Adaptive::new(1e-13, 1e-12)
            .integrate(0.0, PI, |x| {
                if x > 0.0 && x < PI {
                    s.spectral_function(&[x], lambda).unwrap()
                } else {
                    0.0
                }
            })
            .unwrap()
            .value;
        assert!((total - s.counting(lambda).unwrap()).abs() < 1e-9);
    }
    let (sq, _) = spectrum(BoxDomain::new(vec![1.0, 1.7]).unwrap(), 800.0);
    for lambda in [100.0, 777.0] {
        let n = sq.counting(lambda).unwrap();
        assert!((sq.interior_count(lambda, 0.0).unwrap() - n).abs() < 1e-10);
        let ni = sq.interior_count(lambda, 0.1).unwrap();
        let nb = n - ni;
        assert!(ni > 0.0 && nb > 0.0);
    }
}

#[test]
fn interior_count_matches_cubature() {
    let (s, _) = spectrum(BoxDomain::unit_cube(2), 300.0);
    let (eps, lambda) = (0.15, 250.0);
    let q = Adaptive::new(1e-12, 1e-11);
    let direct = q
        .integrate(eps, 1.0 - eps, |x| {
            q.integrate(eps, 1.0 - eps, |y| {
                s.spectral_function(&[x, y], lambda).unwrap()
            })
            .unwrap()
            .value
        })
        .unwrap()
        .value;
    assert!((direct - s.interior_count(lambda, eps).unwrap()).abs() < 1e-8);
}

#[test]
fn pointwise_plug_in_values() {
    let (s, c) = spectrum(BoxDomain::interval_pi(), 400.0);
    let r = spectral_bounds(&s, &c, &[PI / 2.0], 100.0).unwrap();
    let lower = r.rows.iter().find(|r| r.paper_eq == "3.2").unwrap();
    let upper = r.rows.iter().find(|r| r.paper_eq == "3.3").unwrap();
    assert!((lower.lower.unwrap() - 6.0 / PI).abs() < 1e-12);
    assert!((upper.upper.unwrap() - 16.0 / PI).abs() < 1e-12);
    assert!(r.violations().is_empty());
    let tiny = spectral_bounds(&s, &c, &[PI / 2.0], 1e-6).unwrap();
    assert!(tiny.rows[0].lower.unwrap() < 0.0 && tiny.rows[0].exact == 0.0);
}

#[test]
fn berezin_and_li_yau_examples() {
    let (s, c) = spectrum(BoxDomain::interval_pi(), 100.0);
    let r = berezin_liyau(&s, &c, 10.0, None).unwrap();
    let b = r.find("riesz_mean").unwrap();
    assert_eq!(b.exact, 16.0);
    assert!((b.upper.unwrap() - 2.0 / 3.0 * 10f64.powf(1.5)).abs() < 1e-12);

    let (sq, c2) = spectrum(BoxDomain::unit_cube(2), 2500.0);
    let r = berezin_liyau(&sq, &c2, 1000.0, None).unwrap();
    let ly = r.rows.iter().find(|r| r.paper_eq == "3.7").unwrap();
    assert_eq!(ly.exact, 71.0);
    assert!((ly.upper.unwrap() - 2000.0 / (4.0 * PI)).abs() < 1e-10);
    assert!(r.violations().is_empty());

    for n in 1..=4 {
        assert!((optimal_theta(n) - 2.0 / n as f64).abs() < 1e-6);
    }
}

#[test]
fn theta_chain_reduces_to_li_yau() {
    for n in 1..=3 {
        let c = BoxConstants::new(n).unwrap();
        for lambda in lambda_grid(0.5, 5e3, 20) {
            let a = c.theta_bound(2.0 / n as f64, 1.3, lambda);
            let b = c.li_yau(1.3, lambda);
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }
}

#[test]
fn layer_identity() {
    // ∫_{d>ε} d^{-j} = j∫_ε^∞ s^{-j-1}|Ω_s^b| ds - ε^{-j}|Ω_ε^b|, right side by quadrature
    let sq = BoxDomain::unit_cube(2);
    for eps in [0.05, 0.1, 0.2] {
        let layer = layer_data(&sq, eps).unwrap();
        for j in [1, 2] {
            let h = sq.inradius();
            let jf = j as f64;
            let near = Adaptive::new(1e-14, 1e-13)
                .integrate(eps, h, |s| jf * s.powf(-jf - 1.0) * sq.boundary_volume(s))
                .unwrap()
                .value;
            let rhs = near + sq.volume() * h.powf(-jf) - eps.powf(-jf) * layer.boundary_volume;
            assert!(
                (layer.inverse_distance(j) - rhs).abs() < 1e-8,
                "ε={eps} j={j}"
            );
        }
    }
    // direct cubature of d^{-1} over the interior square
    let eps = 0.1;
    let q = Adaptive::new(1e-12, 1e-11);
    let direct = q
        .integrate_breaks(&[eps, 0.5, 1.0 - eps], |x| {
            let kinks = [eps, x.min(1.0 - x), 0.5, 1.0 - x.min(1.0 - x), 1.0 - eps];
            q.integrate_breaks(&kinks, |y| 1.0 / x.min(1.0 - x).min(y).min(1.0 - y))
                .unwrap()
                .value
        })
        .unwrap()
        .value;
    assert!((direct - layer_data(&sq, eps).unwrap().inverse_distance(1)).abs() < 1e-8);

    let cube = BoxDomain::unit_cube(3);
    let mut prev = 0.0;
    for eps in [0.01, 0.1, 0.3, 0.49] {
        let v = layer_data(&cube, eps).unwrap().boundary_volume;
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn counting_bound_examples() {
    let (s, c) = spectrum(BoxDomain::unit_cube(2), 2e4);
    let r = counting_bounds(&s, &c, 1000.0, 0.1).unwrap();
    assert!(r.violations().is_empty(), "{:?}", r.violations());

    let wide = counting_bounds(&s, &c, 1000.0, 5.0).unwrap();
    let row = wide.find("normalized_remainder").unwrap();
    let li_yau = c.li_yau(1.0, 1000.0);
    let as_count = (row.upper.unwrap() + c.c_n) * 1000.0;
    assert!((as_count - li_yau).abs() < 1e-10);

    for lambda in [1e2, 1e3, 1e4] {
        let r = counting_bounds(&s, &c, lambda, lambda.powf(-0.5)).unwrap();
        assert!(r.find("normalized_remainder").unwrap().contained());
    }
    assert!(counting_bounds(&s, &c, 0.0, 0.1).is_err());
    assert!(matches!(
        counting_bounds(&s, &c, 3e4, 0.1),
        Err(Error::AboveCutoff { .. })
    ));
}

#[test]
fn remainder_scans() {
    let (sq, c) = spectrum(BoxDomain::unit_cube(2), 1.01e4);
    let rows = remainder_scan(&sq, &c, &lambda_grid(1e2, 1e4, 40), 0.5).unwrap();
    let last = rows.last().unwrap();
    assert!((last.count / last.weyl_term - 1.0).abs() <= 0.05);
    let pts: Vec<_> = rows.iter().map(|r| (r.lambda, r.riesz_remainder)).collect();
    assert!(loglog_slope(&pts) <= 0.5 + 0.15);
    assert!(rows
        .iter()
        .all(|r| r.interval_lower <= r.count / r.lambda - c.c_n + 1e-9));
    assert!(remainder_scan(&sq, &c, &[100.0], 0.7).is_err());

    let (iv, c1) = spectrum(BoxDomain::interval_pi(), 1.01e4);
    let rows = remainder_scan(&iv, &c1, &lambda_grid(1e2, 1e4, 40), 0.25).unwrap();
    for r in &rows {
        assert_eq!(r.count, r.lambda.sqrt().floor());
        assert!((r.count - r.weyl_term).abs() <= 1.0);
    }
}

#[test]
fn cutoff_and_step_form() {
    let (s, _) = spectrum(BoxDomain::unit_cube(2), 200.0);
    let step = s.as_step().unwrap();
    assert_eq!(step.degree(), 2);
    for lambda in [21.0f64, 60.0, 150.5] {
        assert_eq!(step.eval(lambda.sqrt()), s.counting(lambda).unwrap());
    }
}

fn unit_square_spectrum() -> &'static (Spectrum, BoxConstants) {
    static CELL: std::sync::OnceLock<(Spectrum, BoxConstants)> = std::sync::OnceLock::new();
    CELL.get_or_init(|| spectrum(BoxDomain::new(vec![1.0, 1.4]).unwrap(), 5e3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pointwise_bounds_contain(x in 0.01f64..0.99, y in 0.01f64..1.39, lambda in 1.0f64..5e3) {
        let (s, c) = unit_square_spectrum();
        let r = spectral_bounds(s, c, &[x, y], lambda).unwrap();
        prop_assert!(r.violations().is_empty());
    }

    #[test]
    fn spectral_function_is_monotone(x in 0.01f64..0.99, y in 0.01f64..1.39, a in 0.0f64..4e3, h in 0.0f64..500.0) {
        let (s, _) = unit_square_spectrum();
        prop_assert!(s.spectral_function(&[x, y], a + h).unwrap() >= s.spectral_function(&[x, y], a).unwrap());
    }

    #[test]
    fn layer_split_is_exact(lambda in 1.0f64..5e3, eps in 0.001f64..1.0) {
        let (s, c) = unit_square_spectrum();
        let r = counting_bounds(s, c, lambda, eps).unwrap();
        prop_assert!(r.violations().is_empty());
        let n = s.counting(lambda).unwrap();
        let ni = s.interior_count(lambda, eps).unwrap();
        let nb = r.find("boundary_count").unwrap().exact;
        prop_assert!((ni + nb - n).abs() < 1e-12 * n.max(1.0));
    }
}
