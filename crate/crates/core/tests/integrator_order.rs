use memres::dynsys::integrate;

/// Observed order from errors at successive halvings of h.
fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn rk4_is_fourth_order_on_exponential_decay() {
    let rhs = |_t: f64, s: &[f64; 1]| [-s[0]];
    let errors: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h| {
            let traj = integrate(&rhs, [1.0], 0.0, 1.0, h).unwrap();
            let (t, s) = traj.last().unwrap();
            assert_eq!(t, 1.0);
            (s[0] - (-1.0f64).exp()).abs()
        })
        .collect();
    for p in observed_orders(&errors) {
        assert!(p >= 3.9, "order {p}, errors {errors:?}");
    }
}
