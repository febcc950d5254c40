//! The Airy function Ai and its derivative on [-30, 30].
//!
//! For |u| ≤ 8 the Maclaurin series is summed in double-double arithmetic:
//! its terms reach ~1e5 near the switch point, which would cost too many
//! digits in plain f64. Beyond that the classical asymptotic expansions are
//! accurate to rounding.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DOMAIN: (f64, f64) = (-30.0, 30.0);
const SWITCH: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AiryEval {
    pub u: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

pub fn airy(u: f64) -> Result<AiryEval> {
    if !(DOMAIN.0..=DOMAIN.1).contains(&u) {
        return Err(Error::Domain { what: "u", value: u, domain: "[-30, 30]" });
    }
    let (ai, ai_prime) = airy_pair(u);
    Ok(AiryEval { u, ai, ai_prime })
}

/// `(Ai(u), Ai'(u))` without the domain check; far right values underflow
/// gracefully towards zero, which is what the kernels want.
pub(crate) fn airy_pair(u: f64) -> (f64, f64) {
    if u.abs() <= SWITCH {
        maclaurin(u)
    } else if u > 0.0 {
        asymptotic_right(u)
    } else {
        asymptotic_left(-u)
    }
}

#[cfg(test)]
fn ai(u: f64) -> f64 {
    airy_pair(u).0
}

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd::new(-o.hi, -o.lo))
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from(k))
    }

    fn div(self, d: f64) -> Dd {
        let q = self.hi / d;
        let p = q * d;
        let e = q.mul_add(d, -p);
        let r = ((self.hi - p) - e + self.lo) / d;
        quick_two_sum(q, r)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd::new(s, b - (s - a))
}

// Ai(0) and -Ai'(0)
const C1: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const C2: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

fn maclaurin(u: f64) -> (f64, f64) {
    let x = Dd::from(u);
    let x3 = x.mul(x).mul(x);
    // f = Σ a_k x^{3k}, f' = x² Σ_{k≥1} 3k a_k x^{3(k-1)}
    // g = x Σ b_k x^{3k}, g' = Σ (3k+1) b_k x^{3k}
    let mut f = Dd::from(1.0);
    let mut fp = Dd::from(0.0);
    let mut g = Dd::from(1.0);
    let mut gp = Dd::from(1.0);
    let mut a = Dd::from(1.0); // a_k x^{3k}
    let mut s = Dd::from(1.0).div(6.0); // a_1
    let mut b = Dd::from(1.0); // b_k x^{3k}
    for k in 0..200 {
        let kf = k as f64;
        a = a.mul(x3).div((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        b = b.mul(x3).div((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f = f.add(a);
        g = g.add(b);
        gp = gp.add(b.scale(3.0 * kf + 4.0));
        // s holds a_{k+1} x^{3k}
        fp = fp.add(s.scale(3.0 * (kf + 1.0)));
        s = s.mul(x3).div((3.0 * kf + 5.0) * (3.0 * kf + 6.0));
        let tiny = 1e-34 * (1.0 + f.hi.abs() + g.hi.abs());
        if a.hi.abs() < tiny && b.hi.abs() < tiny && s.hi.abs() < tiny {
            break;
        }
    }
    let fp = fp.mul(x).mul(x);
    let g = g.mul(x);
    let ai = C1.mul(f).sub(C2.mul(g)).to_f64();
    let aip = C1.mul(fp).sub(C2.mul(gp)).to_f64();
    (ai, aip)
}

/// u_k of the asymptotic expansions, and v_k = -(6k+1)/(6k-1) u_k.
fn coefficients() -> &'static ([f64; 40], [f64; 40]) {
    static C: std::sync::OnceLock<([f64; 40], [f64; 40])> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        let mut u = [0.0; 40];
        let mut v = [0.0; 40];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Σ (-1)^k c_k / ζ^k over indices `start, start+2, …`, stopped at the
/// smallest term.
fn alternating(c: &[f64; 40], zeta: f64, start: usize, step: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut k = start;
    let mut sign = 1.0;
    while k < 40 {
        let t = c[k] / zeta.powi(k as i32);
        if t.abs() > last {
            break;
        }
        sum += sign * t;
        if t.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = t.abs();
        sign = -sign;
        k += step;
    }
    sum
}

fn alternating_all(c: &[f64; 40], zeta: f64) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        let t = ck / zeta.powi(k as i32);
        if t.abs() > last {
            break;
        }
        sum += if k % 2 == 0 { t } else { -t };
        if t.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = t.abs();
    }
    sum
}

fn asymptotic_right(u: f64) -> (f64, f64) {
    let (cu, cv) = coefficients();
    let zeta = 2.0 / 3.0 * u * u.sqrt();
    let q = u.sqrt().sqrt();
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    (e / q * alternating_all(cu, zeta), -e * q * alternating_all(cv, zeta))
}

fn asymptotic_left(y: f64) -> (f64, f64) {
    let (cu, cv) = coefficients();
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let q = y.sqrt().sqrt();
    let theta = zeta + PI / 4.0;
    let (sn, cs) = theta.sin_cos();
    let (pu, qu) = (alternating(cu, zeta, 0, 2), alternating(cu, zeta, 1, 2));
    let (pv, qv) = (alternating(cv, zeta, 0, 2), alternating(cv, zeta, 1, 2));
    let ai = (sn * pu - cs * qu) / (PI.sqrt() * q);
    let aip = -q * (cs * pv + sn * qv) / PI.sqrt();
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath at 40 digits
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-30.0, -0.08796818845684216, 1.228620602637485),
        (-25.5, -0.24407246181912132, -0.299550611476149),
        (-20.0, -0.1764061270779847, 0.8928628567364713),
        (-15.0, 0.2782174908708289, 0.272374204308642),
        (-10.3, -0.23210801885482976, 0.6774928295409111),
        (-8.5, -0.33029023763020887, -0.03231334828463914),
        (-8.0, -0.0527050503563862, 0.9355609381983065),
        (-7.9, 0.041701883617386706, 0.9400429980262802),
        (-7.0, 0.18428083525050565, -0.7710081684101265),
        (-6.2, -0.3564210736689614, -0.08106855619630456),
        (-5.0, 0.35076100902411433, 0.32719281855444315),
        (-3.3, -0.41718093737455014, -0.07096361717783588),
        (-1.0, 0.5355608832923521, -0.01016056711664521),
        (0.0, 0.3550280538878172, -0.2588194037928068),
        (0.5, 0.23169360648083348, -0.2249105326646839),
        (1.0, 0.13529241631288141, -0.1591474412967932),
        (2.5, 0.01572592338047049, -0.026250881035903232),
        (4.0, 0.0009515638512048018, -0.001958640950204179),
        (5.5, 3.368531190859981e-05, -8.046339130556515e-05),
        (7.9, 6.239640097283934e-08, -1.7729958329430335e-07),
        (8.0, 4.6922076160992316e-08, -1.3414392979067865e-07),
        (8.1, 3.5224356235735714e-08, -1.0130972032660844e-07),
        (10.0, 1.1047532552898686e-10, -3.5206336767389237e-10),
        (15.0, 2.1649625207379925e-18, -8.420567954017772e-18),
        (22.2, 6.741096105284994e-32, -3.183740491628676e-31),
        (30.0, 3.2082175915504954e-49, -1.759876581432726e-48),
    ];

    #[test]
    fn matches_reference_values() {
        for &(u, ai, aip) in REFERENCE {
            let e = airy(u).unwrap();
            assert!((e.ai - ai).abs() < 1e-13, "Ai({u}) = {} vs {ai}", e.ai);
            assert!((e.ai_prime - aip).abs() < 1e-12, "Ai'({u}) = {} vs {aip}", e.ai_prime);
            assert!((e.ai - ai).abs() <= 1e-10 * ai.abs().max(1e-300) || u < 8.0);
        }
    }

    #[test]
    fn value_at_zero() {
        assert!((airy(0.0).unwrap().ai - 0.3550280539).abs() < 1e-10);
    }

    #[test]
    fn outside_domain() {
        assert!(matches!(airy(30.5), Err(Error::Domain { .. })));
        assert!(matches!(airy(f64::NAN), Err(Error::Domain { .. })));
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        let h = 2e-3;
        for i in 0..100 {
            let u = -29.9 + 59.8 * i as f64 / 99.0;
            let d = |t: f64| airy(t).unwrap().ai_prime;
            let second = (d(u - 2.0 * h) - 8.0 * d(u - h) + 8.0 * d(u + h) - d(u + 2.0 * h)) / (12.0 * h);
            let r = second - u * airy(u).unwrap().ai;
            assert!(r.abs() < 1e-8, "residual {r:e} at {u}");
        }
    }

    #[test]
    fn decays_monotonically_on_the_right() {
        let mut last = ai(1.0);
        for i in 1..=290 {
            let v = ai(1.0 + 0.1 * i as f64);
            assert!(v < last && v > 0.0);
            last = v;
        }
    }
}
