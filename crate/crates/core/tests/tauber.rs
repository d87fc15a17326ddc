use std::sync::OnceLock;

use fourier_tauber::mollifier::{
    build_gamma, build_rho_from_zeta, solve_zeta, Kernel, TestFunction,
};
use fourier_tauber::quadrature::Adaptive;
use fourier_tauber::tauber::{
    conv_f, conv_fprime, corridor_bounds, evaluate_function, identity_residual, pointwise_bounds,
    random_ensemble, run_suite, smoothed_integral, weighted_defect, weighted_interval_bounds,
    ConstantWeight, EnsembleSpec, FnWeight, LinearWeight, SmoothingParams, StepFunction,
    SuiteConfig,
};
use fourier_tauber::Error;
use proptest::prelude::*;

fn zeta_rho(m: u32) -> &'static TestFunction {
    static CELLS: [OnceLock<TestFunction>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[m as usize - 1].get_or_init(|| build_rho_from_zeta(&solve_zeta(m).unwrap()).unwrap())
}

fn three_jumps() -> StepFunction {
    StepFunction::new(vec![(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)], 0.0, 0).unwrap()
}

fn params(delta: f64, t: f64, epsilon: f64) -> SmoothingParams {
    SmoothingParams::new(delta, t, epsilon, 1.0).unwrap()
}

#[test]
fn unit_jump_smoothing() {
    let rho = zeta_rho(1);
    let h = StepFunction::heaviside(0.0);
    assert!((conv_f(rho, 1.0, &h, 0.0).unwrap() - 0.5).abs() < 1e-14);

    let head = Adaptive::new(1e-15, 1e-14)
        .integrate_breaks(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], |x| rho.density(x))
        .unwrap()
        .value;
    assert!((conv_f(rho, 1.0, &h, 5.0).unwrap() - (0.5 + head)).abs() < 1e-10);
    assert!((conv_f(rho, 1.0, &h, 5.0).unwrap() - (1.0 - rho.rho11(5.0))).abs() < 1e-14);

    let double = StepFunction::new(vec![(0.0, 2.0)], 0.0, 0).unwrap();
    for tau in [-3.0, -0.2, 0.0, 0.7, 4.0] {
        let a = conv_f(rho, 1.5, &double, tau).unwrap();
        let b = conv_f(rho, 1.5, &h, tau).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-14);
    }
}

#[test]
fn derivative_convolutions() {
    let rho = zeta_rho(1);
    let c1 = rho.c1().unwrap();
    let h = StepFunction::heaviside(0.0);
    for delta in [0.5, 1.0, 3.0] {
        let k0 = conv_fprime(rho, delta, Kernel::K0, &h, 0.0).unwrap();
        assert!((k0 - delta * c1 / 2.0).abs() < 1e-12);
        assert_eq!(conv_fprime(rho, delta, Kernel::K1, &h, 0.0).unwrap(), 0.0);
    }
    let direct: f64 = [2.0, 0.0, -2.0]
        .iter()
        .map(|y: &f64| rho.upper_moment(1.0, y.abs()).unwrap())
        .sum();
    let got = conv_fprime(rho, 2.0, Kernel::K0, &three_jumps(), 2.0).unwrap();
    assert!(
        (got - 2.0 * direct).abs() < 1e-10,
        "{got} vs {}",
        2.0 * direct
    );
}

#[test]
fn identity_trivial_cases() {
    let rho = zeta_rho(2);
    assert!(identity_residual(rho, 1.0, &StepFunction::heaviside(0.0), 0.0).unwrap() < 1e-13);
    for tau in [-4.0, 0.0, 2.5] {
        assert_eq!(
            identity_residual(rho, 2.0, &StepFunction::zero(), tau).unwrap(),
            0.0
        );
    }
}

#[test]
fn degree_and_parameter_checks() {
    let rho = zeta_rho(1);
    let quadratic = StepFunction::heaviside(0.0).with_degree(2);
    assert!(conv_f(rho, 1.0, &quadratic, 0.0).is_ok());
    assert!(conv_fprime(rho, 1.0, Kernel::K1, &quadratic, 0.0).is_ok());
    match conv_fprime(rho, 1.0, Kernel::K0, &quadratic, 0.0) {
        Err(Error::DecayTooWeak {
            degree: 2,
            have: 1,
            required: 2,
        }) => {}
        other => panic!("unexpected {other:?}"),
    }
    let cubic = StepFunction::heaviside(0.0).with_degree(3);
    assert!(matches!(
        conv_f(rho, 1.0, &cubic, 0.0),
        Err(Error::DecayTooWeak { required: 2, .. })
    ));
    assert!(SmoothingParams::new(2.0, 1.0, 1.0, 1.0).is_err());
    assert!(SmoothingParams::new(1.0, 1.0, 0.0, 1.0).is_err());
    assert!(SmoothingParams::new(1.0, 1.0, 1.0, -1.0).is_err());
    assert!(SmoothingParams::new(0.0, 1.0, 1.0, 1.0).is_err());

    let flat = build_gamma(1, true).unwrap();
    assert!(pointwise_bounds(
        &flat,
        &params(1.0, 1.0, 1.0),
        &StepFunction::heaviside(0.0),
        0.0
    )
    .is_err());
}

#[test]
fn pointwise_examples() {
    let rho = zeta_rho(1);
    let zero = pointwise_bounds(rho, &params(1.0, 2.0, 1.0), &StepFunction::zero(), 0.3).unwrap();
    assert_eq!((zero.lower, zero.upper), (0.0, 0.0));

    let f = three_jumps();
    assert_eq!(f.eval(2.0), 1.5);
    let b = pointwise_bounds(rho, &params(2.0, 2.0, 1.0), &f, 2.0).unwrap();
    assert!(b.contains(1.5, 0.0));
    let (plus, minus) = b.signed_kernels.unwrap();
    assert!(plus <= 1.5 && 1.5 <= minus);
    assert!((plus - b.lower).abs() < 1e-14 && (minus - b.upper).abs() < 1e-14);

    for delta in [0.5, 1.0, 4.0] {
        let b = pointwise_bounds(
            rho,
            &params(delta, delta, 1.0),
            &StepFunction::heaviside(0.0),
            0.0,
        )
        .unwrap();
        assert!((b.error_term - 0.5).abs() < 1e-12);
        assert!((b.smoothed - 0.5).abs() < 1e-14);
    }
    let wide = pointwise_bounds(rho, &params(1.0, 3.0, 1.0), &f, 2.0).unwrap();
    assert!(wide.signed_kernels.is_none());
}

#[test]
fn weighted_interval_examples() {
    let rho = zeta_rho(1);
    let f = three_jumps();
    let p = params(1.0, 2.0, 1.0);
    let scale = 1.0 / (p.t * p.delta);

    let ones = weighted_interval_bounds(rho, &p, &f, 0.5, 2.5, &ConstantWeight(1.0)).unwrap();
    let ga = conv_fprime(rho, 1.0, Kernel::K0, &f, 0.5).unwrap();
    let gb = conv_fprime(rho, 1.0, Kernel::K0, &f, 2.5).unwrap();
    assert!((ones.upper - scale * ga).abs() < 1e-14);
    assert!((ones.lower + scale * gb).abs() < 1e-14);
    let defect = weighted_defect(rho, p.t, &f, 0.5, 2.5, &ConstantWeight(1.0)).unwrap();
    assert!(ones.contains(defect, 1e-9));

    let exact = f.integral(0.5, 2.5) - smoothed_integral(rho, p.t, &f, 0.5, 2.5).unwrap();
    assert!((exact - defect).abs() < 1e-9);

    let lambda = 4.0;
    let linear = LinearWeight {
        slope: 1.0,
        origin: 0.0,
    };
    let b = weighted_interval_bounds(rho, &p, &f, 0.0, lambda, &linear).unwrap();
    let defect = weighted_defect(rho, p.t, &f, 0.0, lambda, &linear).unwrap();
    assert!(
        b.contains(defect, 1e-9),
        "{defect} not in [{}, {}]",
        b.lower,
        b.upper
    );

    let zero = weighted_interval_bounds(rho, &p, &StepFunction::zero(), 0.0, 1.0, &linear).unwrap();
    assert_eq!((zero.lower, zero.upper), (0.0, 0.0));

    let decreasing = FnWeight {
        value: |x: f64| 2.0 - x,
        derivative: |_| -1.0,
    };
    assert!(weighted_interval_bounds(rho, &p, &f, 0.0, 1.0, &decreasing).is_err());
    assert!(weighted_interval_bounds(rho, &p, &f, 1.0, 1.0, &ConstantWeight(1.0)).is_err());
}

#[test]
fn corridor_examples() {
    let rho = zeta_rho(1);
    let zero = corridor_bounds(rho, &params(1.0, 1.0, 1.0), &StepFunction::zero(), 0.0).unwrap();
    assert_eq!((zero.lower, zero.upper), (0.0, 0.0));

    let c = corridor_bounds(
        rho,
        &params(1.0, 1.0, 1.0),
        &StepFunction::heaviside(0.0),
        1.0,
    )
    .unwrap();
    assert!(c.contains(1.0, 0.0));
    assert!(c.lower_shifted <= c.lower_average + 1e-14);
    assert!(c.upper_average <= c.upper_shifted + 1e-14);
}

#[test]
fn smoothed_integral_matches_quadrature() {
    let rho = zeta_rho(2);
    let f = three_jumps();
    for (t, a, b) in [(1.0, -2.0, 0.5), (2.0, 1.5, 2.5), (5.0, 0.0, 6.0)] {
        let q = Adaptive::new(1e-14, 1e-13)
            .integrate(a, b, |x| conv_f(rho, t, &f, x).unwrap())
            .unwrap()
            .value;
        assert!((smoothed_integral(rho, t, &f, a, b).unwrap() - q).abs() < 1e-10);
    }
}

#[test]
fn seeded_suite_first_order() {
    let report = run_suite(zeta_rho(1), &SuiteConfig::default()).unwrap();
    assert_eq!(report.functions, 200);
    assert_eq!(report.evaluations, 200 * 41 * 3);
    assert!(report.passed(), "{report:?}");
    assert!(report.max_identity_residual < 1e-10);
}

#[test]
fn higher_orders_on_a_smaller_ensemble() {
    let config = SuiteConfig {
        seed: 7,
        ensemble: EnsembleSpec {
            count: 20,
            ..EnsembleSpec::default()
        },
        ..SuiteConfig::default()
    };
    for m in [2, 3] {
        let report = run_suite(zeta_rho(m), &config).unwrap();
        assert!(report.passed(), "m = {m}: {report:?}");
    }
    let gamma = build_gamma(2, true).unwrap();
    assert!(run_suite(&gamma, &config).unwrap().passed());
}

#[test]
fn ensemble_is_reproducible() {
    let spec = EnsembleSpec::default();
    assert_eq!(random_ensemble(3, &spec), random_ensemble(3, &spec));
    assert_ne!(random_ensemble(3, &spec), random_ensemble(4, &spec));
}

fn step_strategy() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((-5.0f64..5.0, 0.01f64..2.0), 1..12)
        .prop_map(|j| StepFunction::new(j, 0.0, 0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_holds_off_grid(f in step_strategy(), tau in -8.0f64..8.0, t in 0.5f64..6.0) {
        prop_assert!(identity_residual(zeta_rho(1), t, &f, tau).unwrap() < 1e-10);
    }

    #[test]
    fn smoothing_is_monotone(f in step_strategy(), tau in -8.0f64..8.0, h in 0.0f64..1.0) {
        let rho = zeta_rho(2);
        let a = conv_f(rho, 2.0, &f, tau).unwrap();
        let b = conv_f(rho, 2.0, &f, tau + h).unwrap();
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn smoothing_is_linear(f in step_strategy(), g in step_strategy(), tau in -6.0f64..6.0) {
        let rho = zeta_rho(1);
        let mut jumps = f.jumps().to_vec();
        jumps.extend_from_slice(g.jumps());
        let sum = StepFunction::new(jumps, 0.0, 0).unwrap();
        let lhs = conv_f(rho, 1.0, &sum, tau).unwrap();
        let rhs = conv_f(rho, 1.0, &f, tau).unwrap() + conv_f(rho, 1.0, &g, tau).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn random_functions_are_sandwiched(f in step_strategy(), delta in 0.3f64..3.0, ratio in 1.0f64..4.0) {
        let config = SuiteConfig {
            taus: vec![-6.0, -1.3, 0.0, 0.4, 2.2, 5.5],
            pairs: vec![(delta * ratio, delta)],
            epsilon: 0.7,
            ..SuiteConfig::default()
        };
        let r = evaluate_function(zeta_rho(1), &f, &config).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}
