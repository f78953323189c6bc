mod common;

use common::*;
use memres::dynsys::{lorenz_rhs, LorenzParams, LorenzState};
use memres::tasks::*;
use num::BigRational;

#[test]
fn poly5_matches_exact_and_factored_forms() {
    let n = 100_000;
    assert!(worst_poly_ulps(poly5, |x| poly_exact(&POLY5, x), &POLY5, POLY5_RANGE, n) <= 4.0);
    assert!(worst_poly_ulps(poly5, poly5_factored, &POLY5, POLY5_RANGE, n) <= 4.0);
    assert!(worst_poly_ulps(poly5, |x| poly_power_sum(&POLY5, x), &POLY5, POLY5_RANGE, n) <= 4.0);
}

#[test]
fn poly9_matches_exact_and_power_sum() {
    let n = 100_000;
    assert!(worst_poly_ulps(poly9, |x| poly_exact(&POLY9, x), &POLY9, POLY9_RANGE, n) <= 4.0);
    assert!(worst_poly_ulps(poly9, |x| poly_power_sum(&POLY9, x), &POLY9, POLY9_RANGE, n) <= 4.0);
}

#[test]
fn factored_form_worked_value() {
    // 0.5·(−0.5)·1.5·(−1.5)·(−2.5) − 1
    assert_eq!(poly5_factored(0.5), -2.40625);
    assert_eq!(poly5(0.5), poly5_factored(0.5));
}

#[test]
fn unit_grid_is_uniform_to_one_ulp() {
    let n = 10_000;
    let d = gen_poly_dataset(5, n).unwrap();
    let step = BigRational::new(1.into(), ((n - 1) as i64).into());
    for w in d.u.windows(2) {
        let err = num::ToPrimitive::to_f64(&(rat(w[1]) - rat(w[0]) - &step)).unwrap().abs();
        assert!(err <= ulp(w[1]), "{w:?}");
    }
}

#[test]
fn lorenz_initial_derivative_is_exact() {
    let d = lorenz_rhs(LorenzState::TASK_INITIAL, &LorenzParams::default());
    assert_eq!((d.x, d.y, d.z), (5.0, 12.0, -4.834));
}

#[test]
fn lorenz_trace_is_bounded_and_deterministic() {
    let s = LorenzTaskSettings::default();
    let a = gen_lorenz_dataset(10_000, &s).unwrap();
    assert!(a.target.iter().all(|x| x.abs() < 30.0));
    assert_eq!(a, gen_lorenz_dataset(10_000, &s).unwrap());
    // Must actually be on the attractor, swinging between both lobes.
    assert!(a.target.iter().any(|&x| x > 5.0) && a.target.iter().any(|&x| x < -5.0));
}
