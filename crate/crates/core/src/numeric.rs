//! Arbitrary-precision complex numbers as pairs of MPFR floats.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Complex number `re + i im` with both parts at the same binary precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Complex::from_f64(1.0, 0.0, prec)
    }

    pub fn i(prec: u32) -> Self {
        Complex::from_f64(0.0, 1.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Complex { re, im: Float::new(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Complex::from_real(Float::with_val(prec, q))
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Complex::from_real(Float::with_val(prec, n))
    }

    /// Parses `a`, `a+bi`, `a-bi`, `bi` with decimal or rational parts.
    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        let parse_real = |t: &str| -> Option<Float> {
            if t.is_empty() || t == "+" {
                return Some(Float::with_val(prec, 1));
            }
            if t == "-" {
                return Some(Float::with_val(prec, -1));
            }
            if let Some((a, b)) = t.split_once('/') {
                let a = Float::parse(a).ok()?;
                let b = Float::parse(b).ok()?;
                return Some(Float::with_val(prec, a) / Float::with_val(prec, b));
            }
            Float::parse(t).ok().map(|v| Float::with_val(prec, v))
        };
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not part of an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            match split {
                Some(k) => Some(Complex { re: parse_real(&body[..k])?, im: parse_real(&body[k..])? }),
                None => Some(Complex { re: Float::new(prec), im: parse_real(body)? }),
            }
        } else {
            Some(Complex::from_real(parse_real(&s)?))
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Complex { re, im }
    }

    pub fn scale(&self, k: &Float) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn scale_rational(&self, q: &Rational) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * q), im: Float::with_val(p, &self.im * q) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn recip(&self) -> Complex {
        let d = self.norm_sqr();
        Complex { re: Float::with_val(self.prec(), &self.re / &d), im: Float::with_val(self.prec(), -self.im.clone() / &d) }
    }

    pub fn div(&self, o: &Complex) -> Complex {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Complex {
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(self.prec()));
        Complex { re: Float::with_val(self.prec(), &r * &c), im: Float::with_val(self.prec(), &r * &s) }
    }

    /// Principal logarithm, branch cut on the negative real axis.
    pub fn ln(&self) -> Complex {
        Complex { re: self.abs().ln(), im: self.arg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Complex {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        let half = Complex { re: Float::with_val(self.prec(), 0.5), im: Float::new(self.prec()) };
        self.ln().mul(&half).exp()
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn powc(&self, w: &Complex) -> Complex {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        self.ln().mul(w).exp()
    }

    pub fn powi(&self, n: i64) -> Complex {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Relative distance `|a - b| / max(|a|, |b|, tiny)`.
    pub fn rel_diff(&self, o: &Complex) -> f64 {
        let d = self.sub(o).abs();
        let m = self.abs().max(&o.abs());
        if m.is_zero() {
            return d.to_f64();
        }
        Float::with_val(self.prec(), d / m).to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        let im = self.im.to_string_radix(10, Some(digits));
        if self.im.is_sign_negative() {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_string_digits(digits.max(2)))
    }
}

/// `base^e` for a real float base and real exponent, used for 2^x style constants.
pub fn real_pow(base: &Float, e: &Float) -> Float {
    Float::with_val(base.prec(), base.pow(e))
}

/// Decimal digits carried by a binary precision.
pub fn digits_for(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let p = 128;
        let a = Complex::from_f64(1.0, 2.0, p);
        let b = Complex::from_f64(3.0, -1.0, p);
        assert_eq!(a.mul(&b), Complex::from_f64(5.0, 5.0, p));
        let q = a.div(&b).mul(&b);
        assert!(q.rel_diff(&a) < 1e-35);
    }

    #[test]
    fn exp_log_roundtrip() {
        let p = 128;
        let z = Complex::from_f64(-0.7, 2.9, p);
        assert!(z.ln().exp().rel_diff(&z) < 1e-35);
        let s = z.sqrt();
        assert!(s.mul(&s).rel_diff(&z) < 1e-35);
        assert!(s.re > 0);
    }

    #[test]
    fn parse_forms() {
        let p = 64;
        assert_eq!(Complex::parse("2.5", p).unwrap(), Complex::from_f64(2.5, 0.0, p));
        assert_eq!(Complex::parse("1-2i", p).unwrap(), Complex::from_f64(1.0, -2.0, p));
        assert_eq!(Complex::parse("-i", p).unwrap(), Complex::from_f64(0.0, -1.0, p));
        assert_eq!(Complex::parse("25e-1+4i", p).unwrap(), Complex::from_f64(2.5, 4.0, p));
        assert_eq!(Complex::parse("1/4", p).unwrap(), Complex::from_f64(0.25, 0.0, p));
        assert!(Complex::parse("x", p).is_none());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let p = 128;
        let z = Complex::from_f64(0.3, -1.1, p);
        let mut acc = Complex::one(p);
        for _ in 0..7 {
            acc = acc.mul(&z);
        }
        assert!(z.powi(7).rel_diff(&acc) < 1e-35);
        assert!(z.powi(-2).mul(&z).mul(&z).rel_diff(&Complex::one(p)) < 1e-35);
    }
}
