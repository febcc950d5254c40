use num_rational::BigRational;
use spikelab::genfun::{
    a_direct_sum, coeffs_a, growth_rate, normalized_sequence, parse_rational, series_f, series_g, series_g_tilde,
    series_h, series_u_algebraic,
};
use std::time::Instant;

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

#[test]
fn residuals_through_order_200() {
    let t = Instant::now();
    let (pi, gamma) = (q("3"), q("2"));
    let g = series_g(&gamma, 200).unwrap();
    let gt = series_g_tilde(&gamma, 200).unwrap();
    let f = series_f(&pi, &gamma, 200).unwrap();
    let one = g.constant(q("1"));
    assert!(gt.sub(&one).sub(&g.mul(&gt).shift()).is_zero());
    assert!(g.sub(&one).sub(&gt.mul(&g).shift().scale(&gamma.recip())).is_zero());
    assert!(f.sub(&f.constant(pi.clone())).sub(&g.mul(&f).shift().scale(&pi)).is_zero());
    for gamma in ["1", "2", "4"] {
        let gamma = q(gamma);
        assert_eq!(series_u_algebraic(&gamma, 30).unwrap().coeffs, series_g(&gamma, 30).unwrap().shift().coeffs);
    }
    println!("residuals: {:?}", t.elapsed());
}

#[test]
fn direct_sum_matches_product_series() {
    for (pi, gamma) in [("3", "2"), ("1", "2"), ("3/2", "1"), ("5/4", "7/3")] {
        let (pi, gamma) = (q(pi), q(gamma));
        let h = series_h(&pi, &gamma, 8).unwrap();
        for n in 1..=8 {
            assert_eq!(a_direct_sum(&pi, &gamma, n), h.coeff(n), "n = {n}");
        }
    }
}

#[test]
fn supercritical_growth() {
    let c = coeffs_a(&q("3"), &q("1"), 1.0, 300).unwrap();
    let r = growth_rate(&c, 10).unwrap();
    println!("supercritical ratio {r}");
    assert!((r / 4.5 - 1.0).abs() < 0.02);
}

#[test]
fn critical_growth() {
    let c = coeffs_a(&q("2"), &q("1"), 1.0, 300).unwrap();
    let r = growth_rate(&c, 10).unwrap();
    println!("critical ratio {r}");
    assert!((r / 4.0 - 1.0).abs() < 0.02);
}

#[test]
fn subcritical_growth() {
    let c = coeffs_a(&q("3/2"), &q("1"), 1.0, 300).unwrap();
    let r = growth_rate(&c, 10).unwrap();
    println!("subcritical ratio {r}");
    assert!((r / 4.0 - 1.0).abs() < 0.02);
    let norm = normalized_sequence(&c, 4.0);
    for n in 200..300 {
        let (a, b) = (norm[n - 1], norm[n]);
        assert!(a > 0.0 && (b / a - 1.0).abs() < 0.05);
    }
    let (lo, hi) = (norm[199], norm[299]);
    println!("sub-critical normalized: {lo} .. {hi}");
    assert!((hi / lo - 1.0).abs() < 0.05);
}
