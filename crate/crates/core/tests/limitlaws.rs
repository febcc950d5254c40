use spikelab::limitlaws::fredholm::{airy_determinant, DOUBLING_TOL};
use spikelab::limitlaws::painleve::tw_cdfs;
use spikelab::limitlaws::{bbp_f1_cdf, tw_gue_cdf, DistributionCurve, FredholmConfig, LimitLaw};

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

#[test]
fn fredholm_and_painleve_agree() {
    let cfg = FredholmConfig::default();
    let xs = grid(-8.0, 4.0, 0.05);
    let pii = tw_cdfs(&xs).unwrap();
    let worst = xs.iter().zip(&pii).map(|(&x, p)| (tw_gue_cdf(x, &cfg).unwrap() - p.1).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-5, "max deviation {worst:e}");
}

#[test]
fn gue_moments() {
    let (m, s) = LimitLaw::TracyWidomGue.mean_sd(&FredholmConfig::default()).unwrap();
    assert!((m + 1.7710868074).abs() < 1e-3, "{m}");
    assert!((s - 0.9017731).abs() < 1e-3, "{s}");
}

#[test]
fn goe_moments() {
    let (m, s) = LimitLaw::TracyWidomGoe.mean_sd(&FredholmConfig::default()).unwrap();
    assert!((m + 1.2065335746).abs() < 1e-3, "{m}");
    assert!((s - 1.2679830).abs() < 1e-3, "{s}");
}

#[test]
fn doubling_the_order_is_harmless_on_the_grid() {
    let cfg = FredholmConfig::default();
    for x in grid(-8.0, 5.0, 0.25) {
        let a = airy_determinant(x, cfg.domain_cut, cfg.quad_order);
        let b = airy_determinant(x, cfg.domain_cut, 2 * cfg.quad_order);
        assert!((a - b).abs() < DOUBLING_TOL, "{x}");
        bbp_f1_cdf(x, &cfg).unwrap();
    }
}

#[test]
fn critical_law_is_goe_squared() {
    let cfg = FredholmConfig::default();
    let xs = grid(-6.0, 4.0, 0.25);
    let goe = tw_cdfs(&xs).unwrap();
    for (x, p) in xs.iter().zip(goe) {
        let f1 = bbp_f1_cdf(*x, &cfg).unwrap();
        assert!((f1 - p.0 * p.0).abs() < 1e-7, "{x}: {f1} vs {}", p.0 * p.0);
        // the spike only pushes the edge out
        assert!(f1 <= tw_gue_cdf(*x, &cfg).unwrap() + 1e-12);
    }
}

#[test]
fn emitted_curves_satisfy_invariants() {
    let cfg = FredholmConfig::default();
    let xs = grid(-8.0, 6.0, 0.1);
    for law in [LimitLaw::TracyWidomGue, LimitLaw::TracyWidomGoe, LimitLaw::BbpF1, LimitLaw::StandardNormal] {
        let c: DistributionCurve = law.tabulate(&xs, &cfg).unwrap();
        c.check_invariants(1e-4).unwrap();
    }
}
