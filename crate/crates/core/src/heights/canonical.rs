use std::collections::HashSet;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::curve::{ECPoint, EllipticCurveQ};
use crate::intmat::resultant;
use crate::rational::{common_denominator, ln_abs, ratio_f64};
use crate::{Error, Result};

/// A height together with an error radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
}

impl HeightValue {
    pub fn exact(value: f64) -> Self {
        HeightValue {
            value,
            error_bound: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeightConfig {
    /// Target accuracy of the returned value.
    pub tol: f64,
    /// Once the x-coordinate of `[2^k]P` exceeds this many bits, exact
    /// doubling stops and the orbit is tracked by residues and floats.
    pub exact_bit_budget: u64,
    pub min_doublings: usize,
    pub max_doublings: usize,
}

impl Default for HeightConfig {
    fn default() -> Self {
        HeightConfig {
            tol: 1e-10,
            exact_bit_budget: 2048,
            min_doublings: 4,
            max_doublings: 60,
        }
    }
}

impl HeightConfig {
    pub fn with_tol(tol: f64) -> Self {
        HeightConfig {
            tol,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TorsionConfig {
    pub n_max: u32,
    pub tau: f64,
    pub height: HeightConfig,
}

impl Default for TorsionConfig {
    fn default() -> Self {
        TorsionConfig {
            n_max: 16,
            tau: 1e-8,
            height: HeightConfig::default(),
        }
    }
}

/// `log max(|num x|, |den x|)`; the identity has height 0.
pub fn naive_height(p: &ECPoint) -> HeightValue {
    match p {
        ECPoint::Infinity => HeightValue::exact(0.0),
        ECPoint::Affine { x, .. } => {
            let h = ln_abs(x.numer()).max(ln_abs(x.denom()));
            HeightValue {
                value: h,
                error_bound: 4.0 * f64::EPSILON * h.abs(),
            }
        }
    }
}

pub fn canonical_height(curve: &EllipticCurveQ, p: &ECPoint, tol: f64) -> Result<HeightValue> {
    canonical_height_with(curve, p, &HeightConfig::with_tol(tol))
}

/// Integral doubling forms for `x -> x(2P)` on `y^2 = x^3 + a x + b` with
/// integer `a, b`, written as `x = A/B`:
///
/// `F = A^4 - 2a A^2 B^2 - 8b A B^3 + a^2 B^4`,
/// `G = 4 A^3 B + 4a A B^3 + 4b B^4`.
struct DoublingForms {
    a: BigInt,
    b: BigInt,
}

impl DoublingForms {
    fn coefficients(&self) -> ([BigInt; 5], [BigInt; 5]) {
        let f = [
            BigInt::one(),
            BigInt::zero(),
            -2 * &self.a,
            -8 * &self.b,
            &self.a * &self.a,
        ];
        let g = [
            BigInt::zero(),
            BigInt::from(4),
            BigInt::zero(),
            4 * &self.a,
            4 * &self.b,
        ];
        (f, g)
    }

    fn eval(&self, x: &BigInt, z: &BigInt) -> (BigInt, BigInt) {
        let x2 = x * x;
        let z2 = z * z;
        let xz = x * z;
        let z3 = &z2 * z;
        let f = &x2 * &x2 - 2 * &self.a * &x2 * &z2 - 8 * &self.b * &xz * &z2 + &self.a * &self.a * &z2 * &z2;
        let g = 4 * z * (&x2 * x + &self.a * x * &z2 + &self.b * &z3);
        (f, g)
    }

    fn eval_f64(&self, a: f64, b: f64, u: f64, v: f64) -> (f64, f64) {
        let f = u.powi(4) - 2.0 * a * u * u * v * v - 8.0 * b * u * v.powi(3) + a * a * v.powi(4);
        let g = 4.0 * v * (u.powi(3) + a * u * v * v + b * v.powi(3));
        (f, g)
    }
}

fn normalize(u: f64, v: f64) -> (f64, f64, f64) {
    let m = u.abs().max(v.abs());
    (u / m, v / m, m.ln())
}

/// Canonical height by the Tate limit `h([2^k]P) / 4^k`.
///
/// With `δ_k = h([2^(k+1)]P) - 4 h([2^k]P)` the limit equals
/// `h(P) + Σ δ_k / 4^(k+1)`. Iteration stops once the latest increment
/// `δ_k / 4^(k+1)` is below `tol` and the geometric tail
/// `D / (3·4^(k+1))` is below `tol / 4`, where `D = 2·max|δ_j| + 1` is a
/// padded estimate of the sup of `|h(2Q) - 4h(Q)|` from the observed orbit.
/// The reported error bound is that tail plus float rounding.
///
/// Doubling acts on x-coordinates of an integral model. While coordinates
/// are small it is exact; beyond `exact_bit_budget` the orbit is carried as
/// residues modulo a power of the resultant `R` of the doubling forms
/// (which recovers the exact cancellation `gcd(F, G)`, a divisor of `R`)
/// together with a normalized floating point representative (which gives
/// the archimedean part of each increment).
pub fn canonical_height_with(curve: &EllipticCurveQ, p: &ECPoint, cfg: &HeightConfig) -> Result<HeightValue> {
    if !(cfg.tol > 0.0) {
        return Err(Error::input(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    curve.validate(p)?;
    let x = match p {
        ECPoint::Infinity => return Ok(HeightValue::exact(0.0)),
        ECPoint::Affine { x, .. } => x,
    };

    // Rescale x -> u^2 x so that a4 u^4 and a6 u^6 are integers. The naive
    // heights of the two models differ by a bounded amount, so the limit is
    // unchanged.
    let u = common_denominator([curve.a4(), curve.a6()]);
    let u2 = &u * &u;
    let scale = |q: &BigRational, k: u32| -> BigInt { (q * BigRational::from_integer(u.pow(k))).to_integer() };
    let forms = DoublingForms {
        a: scale(curve.a4(), 4),
        b: scale(curve.a6(), 6),
    };
    let x = x * BigRational::from_integer(u2);
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();

    let h0 = ln_abs(&num).max(ln_abs(&den));
    let mut value = h0;
    let mut d_obs: f64 = 0.0;
    let mut seen = HashSet::new();
    let mut k = 0usize;
    let mut weight = 1.0f64; // 4^-k

    let converged = |k: usize, delta: f64, weight: f64, d_obs: f64| -> Option<f64> {
        let tail = (2.0 * d_obs + 1.0) * weight / 12.0;
        (k >= cfg.min_doublings && (delta * weight / 4.0).abs() < cfg.tol && tail <= cfg.tol / 4.0).then_some(tail)
    };
    let finish = |value: f64, tail: f64| HeightValue {
        value: value.max(0.0),
        error_bound: tail + 64.0 * f64::EPSILON * (1.0 + value.abs()),
    };

    // Exact phase.
    loop {
        if den.is_zero() {
            // [2^k]P = O: P is torsion.
            return Ok(HeightValue::exact(0.0));
        }
        if !seen.insert((num.clone(), den.clone())) {
            // periodic doubling orbit: P is torsion
            return Ok(HeightValue::exact(0.0));
        }
        if num.bits() + den.bits() > cfg.exact_bit_budget {
            break;
        }
        if k >= cfg.max_doublings {
            return Err(budget_error(value, d_obs, weight, k));
        }
        let h = ln_abs(&num).max(ln_abs(&den));
        let (f, g) = forms.eval(&num, &den);
        let c = f.gcd(&g);
        let (mut f, mut g) = (f / &c, g / &c);
        if g.is_negative() {
            f = -f;
            g = -g;
        }
        let h_next = if g.is_zero() { 0.0 } else { ln_abs(&f).max(ln_abs(&g)) };
        num = f;
        den = g;
        if den.is_zero() {
            return Ok(HeightValue::exact(0.0));
        }
        let delta = h_next - 4.0 * h;
        d_obs = d_obs.max(delta.abs());
        value += delta * weight / 4.0;
        k += 1;
        weight /= 4.0;
        if let Some(tail) = converged(k, delta, weight * 4.0, d_obs) {
            return Ok(finish(value, tail));
        }
    }

    // Tracking phase.
    let (fc, gc) = forms.coefficients();
    let res = resultant(&fc, &gc).abs();
    debug_assert!(!res.is_zero());
    let remaining = cfg.max_doublings.saturating_sub(k);
    let mut modulus = res.pow(remaining as u32 + 1);
    let mut ra = num.mod_floor(&modulus);
    let mut rb = den.mod_floor(&modulus);
    let (mut fu, mut fv) = {
        let r = ratio_f64(&num, &den);
        if r.abs() <= 1.0 {
            (r, 1.0)
        } else {
            (1.0, 1.0 / r)
        }
    };
    let (af, bf) = (
        crate::rational::to_f64(&BigRational::from_integer(forms.a.clone())),
        crate::rational::to_f64(&BigRational::from_integer(forms.b.clone())),
    );
    drop(num);
    drop(den);
    while k < cfg.max_doublings {
        let (f, g) = forms.eval(&ra, &rb);
        let f = f.mod_floor(&modulus);
        let g = g.mod_floor(&modulus);
        let c = f.gcd(&g).gcd(&modulus);
        modulus = &modulus / &c;
        ra = (&f / &c).mod_floor(&modulus);
        rb = (&g / &c).mod_floor(&modulus);
        let (nf, ng) = forms.eval_f64(af, bf, fu, fv);
        let (nu, nv, lambda) = normalize(nf, ng);
        fu = nu;
        fv = nv;
        let delta = lambda - ln_abs(&c);
        if c.sign() == Sign::NoSign || !delta.is_finite() {
            return Err(Error::Diagnostic("degenerate doubling orbit in tracking phase".into()));
        }
        d_obs = d_obs.max(delta.abs());
        value += delta * weight / 4.0;
        k += 1;
        weight /= 4.0;
        if let Some(tail) = converged(k, delta, weight * 4.0, d_obs) {
            return Ok(finish(value, tail));
        }
    }
    Err(budget_error(value, d_obs, weight, k))
}

fn budget_error(value: f64, d_obs: f64, weight: f64, k: usize) -> Error {
    Error::HeightBudget {
        partial: value,
        error_bound: (2.0 * d_obs + 1.0) * weight / 3.0,
        doublings: k,
    }
}

/// `(ĥ(P+Q) - ĥ(P) - ĥ(Q)) / 2`.
pub fn nt_pairing(curve: &EllipticCurveQ, p: &ECPoint, q: &ECPoint, tol: f64) -> Result<f64> {
    let s = curve.add(p, q)?;
    let hs = canonical_height(curve, &s, tol)?;
    let hp = canonical_height(curve, p, tol)?;
    let hq = canonical_height(curve, q, tol)?;
    Ok((hs.value - hp.value - hq.value) / 2.0)
}

/// Smallest `1 <= n <= n_max` with `[n]P = O`.
pub fn torsion_order(curve: &EllipticCurveQ, p: &ECPoint, n_max: u32) -> Result<Option<u32>> {
    curve.validate(p)?;
    let mut acc = ECPoint::Infinity;
    for n in 1..=n_max {
        acc = curve.add_unchecked(&acc, p);
        if acc.is_infinity() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn is_torsion(curve: &EllipticCurveQ, p: &ECPoint) -> Result<bool> {
    is_torsion_with(curve, p, &TorsionConfig::default())
}

/// Torsion test by finite order up to `n_max`, cross-checked against
/// `ĥ(P) < τ`. Disagreement is reported as a diagnostic error.
pub fn is_torsion_with(curve: &EllipticCurveQ, p: &ECPoint, cfg: &TorsionConfig) -> Result<bool> {
    let by_order = torsion_order(curve, p, cfg.n_max)?.is_some();
    let h = canonical_height_with(curve, p, &cfg.height)?;
    let by_height = h.value < cfg.tau;
    if by_order != by_height {
        return Err(Error::Diagnostic(format!(
            "torsion criteria disagree for {p}: finite order {by_order}, ĥ = {} (τ = {})",
            h.value, cfg.tau
        )));
    }
    Ok(by_order)
}

/// Empirical `sup |ĥ(P) - h(P)|` over the given points.
pub fn estimate_c_nt(curve: &EllipticCurveQ, points: &[ECPoint], tol: f64) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for p in points {
        let hc = canonical_height(curve, p, tol)?;
        let hn = naive_height(p);
        sup = sup.max((hc.value - hn.value).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn pt(x: &str, y: &str) -> ECPoint {
        ECPoint::parse(x, y).unwrap()
    }

    #[test]
    fn naive_heights() {
        assert_eq!(naive_height(&pt("0", "1")).value, 0.0);
        assert!((naive_height(&pt("3/2", "0")).value - 3f64.ln()).abs() < 1e-15);
        assert!((naive_height(&pt("-7/5", "0")).value - 7f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&ECPoint::Infinity).value, 0.0);
    }

    #[test]
    fn torsion_point_has_zero_height() {
        let e = EllipticCurveQ::from_ints(0, 1).unwrap();
        let h = canonical_height(&e, &pt("2", "3"), 1e-10).unwrap();
        assert_eq!(h.value, 0.0);
        assert!(is_torsion(&e, &pt("2", "3")).unwrap());
        assert!(is_torsion(&e, &ECPoint::Infinity).unwrap());
        assert_eq!(torsion_order(&e, &pt("2", "3"), 16).unwrap(), Some(6));
    }

    #[test]
    fn doubling_forms_match_group_law() {
        let curve = EllipticCurveQ::from_ints(0, -2).unwrap();
        let p = ECPoint::from_ints(3, 5);
        let forms = DoublingForms {
            a: BigInt::zero(),
            b: BigInt::from(-2),
        };
        let (f, g) = forms.eval(&BigInt::from(3), &BigInt::one());
        let two_p = curve.double(&p);
        assert_eq!(two_p.x().unwrap(), &BigRational::new(f, g),);
    }

    #[test]
    fn resultant_divides_known_discriminant_power() {
        // Res(F, G) = 2^8 (4a^3 + 27b^2)^2 for these forms
        for (a, b) in [(0i64, -2i64), (1, -5), (-7, 6), (3, 17)] {
            let forms = DoublingForms {
                a: BigInt::from(a),
                b: BigInt::from(b),
            };
            let (f, g) = forms.coefficients();
            let r = resultant(&f, &g).abs();
            let disc = BigInt::from(4 * a * a * a + 27 * b * b);
            assert_eq!(r, BigInt::from(256) * &disc * &disc, "a={a} b={b}");
        }
    }

    #[test]
    fn tracking_phase_agrees_with_exact_phase() {
        let e = EllipticCurveQ::from_ints(0, -2).unwrap();
        let p = ECPoint::from_ints(3, 5);
        let exact_heavy = HeightConfig {
            tol: 1e-4,
            exact_bit_budget: 1 << 24,
            ..Default::default()
        };
        let tracked = HeightConfig {
            tol: 1e-4,
            exact_bit_budget: 16,
            ..Default::default()
        };
        let a = canonical_height_with(&e, &p, &exact_heavy).unwrap();
        let b = canonical_height_with(&e, &p, &tracked).unwrap();
        assert!((a.value - b.value).abs() < 1e-4, "{a:?} vs {b:?}");
        assert!(a.error_bound <= 1e-4 && b.error_bound <= 1e-4);
    }

    #[test]
    fn rational_coefficients_are_accepted() {
        // y^2 = x^3 - x/4 + 1/4 contains (0, 1/2)
        let e = EllipticCurveQ::new(parse_rational("-1/4").unwrap(), parse_rational("1/4").unwrap()).unwrap();
        let p = pt("0", "1/2");
        assert!(e.contains(&p));
        let h1 = canonical_height(&e, &p, 1e-10).unwrap();
        let h2 = canonical_height(&e, &e.double(&p), 1e-10).unwrap();
        assert!(h1.value > 0.0);
        assert!((h2.value - 4.0 * h1.value).abs() < 4e-10, "{h1:?} {h2:?}");
    }

    #[test]
    fn budget_exhaustion_reports_partial_estimate() {
        let e = EllipticCurveQ::from_ints(0, -2).unwrap();
        let cfg = HeightConfig {
            tol: 1e-10,
            max_doublings: 3,
            min_doublings: 1,
            ..Default::default()
        };
        match canonical_height_with(&e, &ECPoint::from_ints(3, 5), &cfg) {
            Err(Error::HeightBudget { doublings, partial, .. }) => {
                assert_eq!(doublings, 3);
                assert!(partial > 0.0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
