//! Barnes `G` and `log Γ` at arbitrary precision.
//!
//! Both use their Stirling-type asymptotic expansions after shifting the
//! argument into `Re x ≥ R` with the functional equations. The constant
//! `ζ'(−1)` in the `G` expansion is calibrated once per precision from
//! `G(1 + N) = Π_{k<N} k!`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::Complex;

const GUARD: u32 = 64;
const MIN_PRECISION: u32 = 16;
const MAX_PRECISION: u32 = 4096;

fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut b = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)])).lock().unwrap();
    while b.len() <= n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = b.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * &binom);
            binom = binom * (m + 1 - k) as u64 / (k + 1) as u64;
        }
        b.push(-acc / Rational::from(m as u64 + 1));
    }
    b[n].clone()
}

fn check_precision(prec: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&prec) {
        return Err(Error::Numeric(format!("precision {prec} bits outside [{MIN_PRECISION}, {MAX_PRECISION}]")));
    }
    Ok(())
}

fn shift_radius(w: u32) -> u64 {
    (w as f64 * 0.12).ceil() as u64 + 10
}

fn cst(q: &Rational, w: u32) -> Complex {
    Complex::from_rational(q, w)
}

fn ln_two_pi(w: u32) -> Float {
    Float::with_val(w, Constant::Pi) * 2u32
}

/// Sums `Σ_{k≥1} c_k y^{−e(k)}` until terms fall below `2^{−w}` relative to
/// `scale` or start to grow.
fn asymptotic_tail(y: &Complex, w: u32, coeff: impl Fn(usize) -> Rational, exponent: impl Fn(usize) -> i64) -> Complex {
    let inv = y.recip();
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let mut acc = Complex::zero(w);
    let mut last = Float::with_val(w, f64::INFINITY);
    for k in 1..400 {
        let t = inv.powi(exponent(k)).mul(&cst(&coeff(k), w));
        let m = t.abs();
        if m > last {
            break;
        }
        acc = acc.add(&t);
        if m < eps {
            break;
        }
        last = m;
    }
    acc
}

/// `log Γ(y)` by Stirling's series, for `Re y` large.
fn ln_gamma_stirling(y: &Complex, w: u32) -> Complex {
    let half = cst(&Rational::from((1, 2)), w);
    let main = y.sub(&half).mul(&y.ln()).sub(y);
    let c = Complex::from_real(Float::with_val(w, ln_two_pi(w).ln() / 2u32));
    let tail = asymptotic_tail(y, w, |k| bernoulli(2 * k) / Rational::from((2 * k * (2 * k - 1)) as u64), |k| 2 * k as i64 - 1);
    main.add(&c).add(&tail)
}

/// `log G(1 + z) − ζ'(−1)` by the asymptotic series, for `Re z` large.
fn ln_g1p_without_constant(z: &Complex, w: u32) -> Complex {
    let lz = z.ln();
    let z2 = z.mul(z);
    let mut out = z2.mul(&lz).scale_rational(&Rational::from((1, 2)));
    out = out.sub(&z2.scale_rational(&Rational::from((3, 4))));
    out = out.add(&z.scale(&Float::with_val(w, ln_two_pi(w).ln() / 2u32)));
    out = out.sub(&lz.scale_rational(&Rational::from((1, 12))));
    let tail = asymptotic_tail(z, w, |k| bernoulli(2 * k + 2) / Rational::from((4 * k * (k + 1)) as u64), |k| 2 * k as i64);
    out.add(&tail)
}

fn zeta_prime_minus_one(w: u32) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let n = shift_radius(w) + 1;
    // log G(1 + n) = Σ_{k=1}^{n−1} log k!
    let mut exact = Float::new(w);
    let mut fact = Integer::from(1);
    for k in 1..n {
        fact *= k;
        exact += Float::with_val(w, &fact).ln();
    }
    let approx = ln_g1p_without_constant(&Complex::from_i64(n as i64, w), w);
    let v = Float::with_val(w, &exact - &approx.re);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

fn is_nonpositive_integer(x: &Complex) -> bool {
    x.im.is_zero() && x.re.is_integer() && x.re <= 0
}

/// Number of unit shifts putting `Re(x + N) ≥ R`.
fn shift_count(x: &Complex, w: u32) -> u64 {
    let r = shift_radius(w) as f64;
    let re = x.re.to_f64();
    if re >= r {
        0
    } else {
        (r - re).ceil() as u64
    }
}

/// `log Γ(x)` (a branch of the logarithm; `exp` of it is `Γ(x)`).
pub fn ln_gamma(x: &Complex, prec: u32) -> Result<Complex> {
    check_precision(prec)?;
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Γ at {}", x.re.to_f64())));
    }
    let w = prec + GUARD;
    let x = requant(x, w);
    let n = shift_count(&x, w);
    let y = x.add(&Complex::from_i64(n as i64, w));
    let mut out = ln_gamma_stirling(&y, w);
    for j in 0..n {
        out = out.sub(&x.add(&Complex::from_i64(j as i64, w)).ln());
    }
    Ok(requant(&out, prec))
}

pub fn gamma(x: &Complex, prec: u32) -> Result<Complex> {
    Ok(requant(&ln_gamma(x, prec + 16)?.exp(), prec))
}

/// `log G(x)`; `None` where `G` vanishes (non-positive integers).
pub fn ln_barnes_g(x: &Complex, prec: u32) -> Result<Option<Complex>> {
    check_precision(prec)?;
    if is_nonpositive_integer(x) {
        return Ok(None);
    }
    let w = prec + GUARD;
    let x = requant(x, w);
    let n = shift_count(&x, w);
    // log G(x) = log G(x + N) − N log Γ(x + N) + Σ_{j<N} (j + 1) log(x + j)
    let xn = x.add(&Complex::from_i64(n as i64, w));
    let one = Complex::one(w);
    let mut out = ln_g1p_without_constant(&xn.sub(&one), w).add(&Complex::from_real(zeta_prime_minus_one(w)));
    if n > 0 {
        out = out.sub(&ln_gamma_stirling(&xn, w).scale_rational(&Rational::from(n)));
        for j in 0..n {
            let l = x.add(&Complex::from_i64(j as i64, w)).ln();
            out = out.add(&l.scale_rational(&Rational::from(j + 1)));
        }
    }
    Ok(Some(requant(&out, prec)))
}

/// Barnes `G(x)` with `G(x + 1) = Γ(x) G(x)`, `G(1) = 1`; exactly zero at
/// non-positive integers.
pub fn barnes_g(x: &Complex, prec: u32) -> Result<Complex> {
    Ok(match ln_barnes_g(x, prec + 16)? {
        None => Complex::zero(prec),
        Some(l) => requant(&l.exp(), prec),
    })
}

/// `G(1 + x + y) G(1 + x − y)`.
pub fn barnes_pm(x: &Complex, y: &Complex, prec: u32) -> Result<Complex> {
    let one = Complex::one(prec + GUARD);
    let a = barnes_g(&one.add(x).add(y), prec + 8)?;
    let b = barnes_g(&one.add(x).sub(y), prec + 8)?;
    Ok(requant(&a.mul(&b), prec))
}

fn requant(z: &Complex, prec: u32) -> Complex {
    Complex { re: Float::with_val(prec, &z.re), im: Float::with_val(prec, &z.im) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), Rational::new());
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn glaisher_constant() {
        // ζ'(−1) = 1/12 − log A, A = 1.28242712910062263687534256886979...
        let z = zeta_prime_minus_one(192);
        let a = Float::with_val(192, Float::parse("1.28242712910062263687534256886979172776768892732500").unwrap());
        let want = Float::with_val(192, Float::with_val(192, 1) / 12u32) - a.ln();
        assert!(Float::with_val(192, &z - &want).abs() < 1e-45);
    }
}
