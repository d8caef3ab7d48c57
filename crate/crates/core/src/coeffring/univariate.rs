//! Dense univariate polynomials over Q: gcd, square-free part and rational
//! roots with multiplicity.

use rug::{Float, Integer, Rational};

use super::poly::Poly;
use crate::numeric::Complex;
use crate::error::{Error, Result};

/// Coefficients `a_0..a_d` of `p` viewed as a polynomial in generator `i`;
/// `None` when other generators or negative powers occur.
pub fn dense_in(p: &Poly, i: usize) -> Option<Vec<Rational>> {
    if p.min_degree_in(i) < 0 {
        return None;
    }
    let d = p.degree_in(i).max(0) as usize;
    (0..=d).map(|e| p.coefficient_of(i, e as i32).as_constant()).collect()
}

pub fn from_dense(params: &super::Params, i: usize, a: &[Rational]) -> Poly {
    let mut out = Poly::zero(params);
    let x = Poly::var_index(params, i);
    for (e, c) in a.iter().enumerate() {
        if *c != 0 {
            out.add_scaled(&Poly::constant(params, c.clone()), &x.pow(e as u32));
        }
    }
    out
}

fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().map_or(false, |c| *c == 0) {
        a.pop();
    }
    a
}

/// Remainder and quotient of `a / b` (`b` nonzero).
pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let mut q = vec![Rational::new(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = Rational::from(r.last().unwrap() / b.last().unwrap());
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= Rational::from(&f * bj);
        }
        q[k] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &l;
        }
    }
    x
}

pub fn derivative(a: &[Rational]) -> Vec<Rational> {
    a.iter().enumerate().skip(1).map(|(e, c)| Rational::from(c * e as u32)).collect()
}

pub fn eval(a: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn complex_roots(a: &[Rational], prec: u32) -> Vec<Complex> {
    let d = a.len() - 1;
    let lead = a.last().unwrap();
    let coef: Vec<Complex> = a.iter().map(|c| Complex::from_rational(&Rational::from(c / lead), prec)).collect();
    let seed = Complex::from_f64(0.4, 0.9, prec);
    let mut z: Vec<Complex> = (0..d).map(|k| seed.powi(k as i64)).collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    for _ in 0..2000 {
        let mut moved = Float::with_val(prec, 0);
        for k in 0..d {
            let mut num = Complex::zero(prec);
            for c in coef.iter().rev() {
                num = num.mul(&z[k]).add(c);
            }
            let mut den = Complex::one(prec);
            for j in 0..d {
                if j != k {
                    den = den.mul(&z[k].sub(&z[j]));
                }
            }
            let step = num.div(&den);
            let m = step.abs();
            if m > moved {
                moved = m;
            }
            z[k] = z[k].sub(&step);
        }
        if moved < tol {
            break;
        }
    }
    z
}

/// Rational roots of `a` with multiplicities, plus the degree of the cofactor
/// without rational roots.
pub fn rational_roots(a: &[Rational]) -> Result<(Vec<(Rational, u32)>, usize)> {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return Err(Error::Degenerate("rational roots of the zero polynomial".into()));
    }
    let sqfree = divrem(&a, &gcd(&a, &derivative(&a))).0;
    let mut roots = Vec::new();
    if sqfree.len() > 1 {
        // every rational root is k/den for the leading coefficient of the primitive integer form
        let den_lcm = sqfree.iter().fold(Integer::from(1), |l, c| l.lcm(c.denom()));
        let ints: Vec<Integer> = sqfree.iter().map(|c| Rational::from(c * &den_lcm).numer().clone()).collect();
        let lead = ints.last().unwrap().clone().abs();
        let prec = 128 + 8 * ints.iter().map(|i| i.significant_bits()).max().unwrap_or(0);
        for z in complex_roots(&sqfree, prec) {
            let re = Float::with_val(prec, &z.re * &lead).round();
            let Some(k) = re.to_integer() else { continue };
            let cand = Rational::from((k, lead.clone()));
            if eval(&sqfree, &cand) == 0 && !roots.iter().any(|(r, _)| *r == cand) {
                roots.push((cand, 0u32));
            }
        }
    }
    let mut rest = a;
    for (x, m) in roots.iter_mut() {
        let lin = vec![Rational::from(-&*x), Rational::from(1)];
        loop {
            let (q, r) = divrem(&rest, &lin);
            if !r.is_empty() {
                break;
            }
            rest = q;
            *m += 1;
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((roots, rest.len() - 1))
}
