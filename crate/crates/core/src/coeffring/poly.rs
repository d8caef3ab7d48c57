use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::Rational;

use super::params::Params;
use crate::error::{Error, Result};
use crate::numeric::Complex;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n].into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<i32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial with rational coefficients over a [`ParamSet`].
///
/// Zero coefficients are never stored and terms are kept in graded-lex order,
/// so structural equality is mathematical equality.
#[derive(Clone)]
pub struct Poly {
    params: Params,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.params, &other.params) || self.params == other.params) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Poly {
    pub fn zero(params: &Params) -> Poly {
        Poly { params: params.clone(), terms: BTreeMap::new() }
    }

    pub fn one(params: &Params) -> Poly {
        Poly::constant(params, Rational::from(1))
    }

    pub fn constant(params: &Params, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::one(params.len()), c);
        }
        Poly { params: params.clone(), terms }
    }

    pub fn from_i64(params: &Params, c: i64) -> Poly {
        Poly::constant(params, Rational::from(c))
    }

    pub fn from_ratio(params: &Params, num: i64, den: i64) -> Poly {
        Poly::constant(params, Rational::from((num, den)))
    }

    /// The generator `name` to the first power.
    pub fn var(params: &Params, name: &str) -> Result<Poly> {
        let i = params.index_of(name).ok_or_else(|| Error::Usage(format!("unknown parameter `{name}`")))?;
        Ok(Poly::var_index(params, i))
    }

    pub fn var_index(params: &Params, i: usize) -> Poly {
        Poly::monomial(params, Rational::from(1), &[(i, 1)])
    }

    /// `c * prod x_i^e_i`; negative exponents on non-invertible generators panic.
    pub fn monomial(params: &Params, c: Rational, powers: &[(usize, i32)]) -> Poly {
        let mut exps = vec![0; params.len()];
        for &(i, e) in powers {
            exps[i] += e;
        }
        for (i, &e) in exps.iter().enumerate() {
            assert!(e >= 0 || params.is_invertible(i), "negative exponent on non-invertible `{}`", params.name(i));
        }
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::from_exps(exps), c);
        }
        Poly { params: params.clone(), terms }
    }

    /// Builds a polynomial from raw terms, dropping zeros and merging repeats.
    pub fn from_terms(params: &Params, raw: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Result<Poly> {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in raw {
            if exps.len() != params.len() {
                return Err(Error::Usage("exponent vector length does not match parameter set".into()));
            }
            for (i, &e) in exps.iter().enumerate() {
                if e < 0 && !params.is_invertible(i) {
                    return Err(Error::Usage(format!("negative exponent on non-invertible `{}`", params.name(i))));
                }
            }
            *terms.entry(Monomial::from_exps(exps)).or_insert_with(|| Rational::from(0)) += c;
        }
        terms.retain(|_, c| *c != 0);
        Ok(Poly { params: params.clone(), terms })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The rational value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::from(0)),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c == 1)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn same_params(&self, o: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.params, &o.params) || self.params == o.params {
            Ok(())
        } else {
            Err(Error::Usage("operands live over different parameter sets".into()))
        }
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly> {
        self.same_params(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m, c);
        }
        Ok(Poly { params: self.params.clone(), terms })
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly> {
        self.same_params(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m, &Rational::from(-c));
        }
        Ok(Poly { params: self.params.clone(), terms })
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly> {
        self.same_params(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Poly::zero(&self.params));
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = Rational::from(ca * cb);
                match terms.get_mut(&m) {
                    Some(acc) => *acc += c,
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(Poly { params: self.params.clone(), terms })
    }

    /// `self += k * o` in place.
    pub fn add_scaled(&mut self, o: &Poly, k: &Poly) {
        if o.is_zero() || k.is_zero() {
            return;
        }
        let prod = o * k;
        for (m, c) in prod.terms {
            match self.terms.get_mut(&m) {
                Some(acc) => {
                    *acc += c;
                    if *acc == 0 {
                        self.terms.remove(&m);
                    }
                }
                None => {
                    self.terms.insert(m, c);
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            add_term(&mut self.terms, m, c);
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if *k == 0 {
            return Poly::zero(&self.params);
        }
        Poly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(c * k))).collect(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Poly {
        self.scale(&Rational::from(k))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.params);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Single-term polynomial whose generators all carry invertible flags (or a
    /// nonzero constant): such elements are units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        if self.terms.len() != 1 {
            return false;
        }
        let (m, _) = self.terms.iter().next().unwrap();
        m.exps().iter().enumerate().all(|(i, &e)| e == 0 || self.params.is_invertible(i))
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Result<Poly> {
        if !self.is_unit() {
            return Err(Error::InexactDivision(format!("`{}` is not a unit", self.to_text())));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let exps: Vec<i32> = m.exps().iter().map(|e| -e).collect();
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::from_exps(exps), Rational::from(c.recip_ref()));
        Ok(Poly { params: self.params.clone(), terms })
    }

    /// Exact quotient `self / b`.
    ///
    /// Succeeds when `b` is a unit or when `b` divides `self` in the Laurent
    /// ring; otherwise reports [`Error::InexactDivision`].
    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        self.same_params(b)?;
        if b.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if b.is_unit() {
            return Ok(self * &b.unit_inverse()?);
        }
        if b.terms.len() == 1 {
            // monomial with non-invertible generators: divide term by term
            let (mb, cb) = b.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                let e: Vec<i32> = m.exps().iter().zip(mb.exps()).map(|(x, y)| x - y).collect();
                if e.iter().enumerate().any(|(i, &x)| x < 0 && !self.params.is_invertible(i)) {
                    return Err(Error::InexactDivision(format!("`{}` does not divide `{}`", b.to_text(), self.to_text())));
                }
                terms.insert(Monomial::from_exps(e), Rational::from(c / cb));
            }
            return Ok(Poly { params: self.params.clone(), terms });
        }
        // shift both operands into the polynomial ring, then long division
        let (a_shift, a_poly) = self.clear_negative();
        let (b_shift, b_poly) = b.clear_negative();
        let (q, r) = a_poly.long_div(&b_poly);
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("`{}` does not divide `{}`", b.to_text(), self.to_text())));
        }
        // self = a_poly / x^a_shift, b = b_poly / x^b_shift
        let shift: Vec<i32> = a_shift.iter().zip(&b_shift).map(|(a, b)| b - a).collect();
        let q = q.shifted(&shift);
        for (m, _) in &q.terms {
            if m.exps().iter().enumerate().any(|(i, &e)| e < 0 && !self.params.is_invertible(i)) {
                return Err(Error::InexactDivision(format!("`{}` does not divide `{}`", b.to_text(), self.to_text())));
            }
        }
        Ok(q)
    }

    /// Multiplies by a monomial in the invertible generators so that every
    /// exponent is non-negative and the minimum per invertible generator is zero.
    fn clear_negative(&self) -> (Vec<i32>, Poly) {
        let n = self.params.len();
        let mut shift = vec![0i32; n];
        for i in 0..n {
            if self.params.is_invertible(i) {
                shift[i] = -self.terms.keys().map(|m| m.exps()[i]).min().unwrap_or(0);
            }
        }
        (shift.clone(), self.shifted(&shift))
    }

    fn shifted(&self, shift: &[i32]) -> Poly {
        Poly {
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.exps().iter().zip(shift).map(|(a, b)| a + b).collect()), c.clone()))
                .collect(),
        }
    }

    /// Multivariate division by leading terms; returns quotient and remainder.
    fn long_div(&self, b: &Poly) -> (Poly, Poly) {
        let (lm_b, lc_b) = b.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut q = Poly::zero(&self.params);
        let mut r = Poly::zero(&self.params);
        let mut p = self.clone();
        while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let e: Vec<i32> = lm.exps().iter().zip(lm_b.exps()).map(|(x, y)| x - y).collect();
            if e.iter().all(|&x| x >= 0) {
                let t = Poly {
                    params: self.params.clone(),
                    terms: std::iter::once((Monomial::from_exps(e), Rational::from(&lc / &lc_b))).collect(),
                };
                p = &p - &(&t * b);
                q = &q + &t;
            } else {
                let t = Poly { params: self.params.clone(), terms: std::iter::once((lm.clone(), lc)).collect() };
                p.terms.remove(&lm);
                r = &r + &t;
            }
        }
        (q, r)
    }

    /// Highest power of generator `i` (negative powers count as their value).
    pub fn degree_in(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.exps()[i]).min().unwrap_or(0)
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps()[i] != 0)
    }

    /// Indices of generators occurring with nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.params.len()).filter(|&i| self.contains_var(i)).collect()
    }

    /// Coefficient of `x_i^e` viewing `self` as a polynomial in `x_i`.
    pub fn coefficient_of(&self, i: usize, e: i32) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps()[i] == e {
                let mut ex = m.exps().to_vec();
                ex[i] = 0;
                terms.insert(Monomial::from_exps(ex), c.clone());
            }
        }
        Poly { params: self.params.clone(), terms }
    }

    /// Replaces generator `i` (which must carry only non-negative exponents, or
    /// the replacement must be a unit) by `value`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Result<Poly> {
        self.same_params(value)?;
        if !self.contains_var(i) {
            return Ok(self.clone());
        }
        let inv = if self.min_degree_in(i) < 0 { Some(value.unit_inverse()?) } else { None };
        let mut powers: BTreeMap<i32, Poly> = BTreeMap::new();
        let mut out = Poly::zero(&self.params);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            let mut ex = m.exps().to_vec();
            ex[i] = 0;
            let rest = Poly { params: self.params.clone(), terms: std::iter::once((Monomial::from_exps(ex), c.clone())).collect() };
            if e == 0 {
                out.add_assign_ref(&rest);
                continue;
            }
            let pw = powers
                .entry(e)
                .or_insert_with(|| if e > 0 { value.pow(e as u32) } else { inv.as_ref().unwrap().pow((-e) as u32) });
            out.add_scaled(&rest, pw);
        }
        Ok(out)
    }

    /// Substitutes several generators simultaneously.
    pub fn substitute_many(&self, subs: &[(usize, Poly)]) -> Result<Poly> {
        let mut out = self.clone();
        // sequential substitution is simultaneous as long as replacements do not
        // mention the replaced generators, which callers guarantee
        for (i, v) in subs {
            out = out.substitute(*i, v)?;
        }
        Ok(out)
    }

    /// Ring map sending generator `i` of `self`'s parameter set to `images[i]`
    /// (all over a common target set). Negative exponents require unit images.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        let target = images
            .first()
            .map(|p| p.params().clone())
            .ok_or_else(|| Error::Usage("compose needs at least one image".into()))?;
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e as u32);
                } else if e < 0 {
                    t = &t * &images[i].unit_inverse()?.pow((-e) as u32);
                }
            }
            out.add_assign_ref(&t);
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to generator `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exps().to_vec();
            ex[i] -= 1;
            terms.insert(Monomial::from_exps(ex), Rational::from(c * e));
        }
        Poly { params: self.params.clone(), terms }
    }

    /// Applies the derivation determined by its values on generators:
    /// `D(x_i) = images(i)` (None meaning zero), extended by the Leibniz rule.
    pub fn derivation(&self, images: &dyn Fn(usize) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero(&self.params);
        for i in 0..self.params.len() {
            if !self.contains_var(i) {
                continue;
            }
            if let Some(img) = images(i) {
                if !img.is_zero() {
                    out.add_scaled(&self.derivative(i), &img);
                }
            }
        }
        out
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// generator that occurs with nonzero exponent.
    pub fn embed(&self, target: &Params) -> Result<Poly> {
        if Arc::ptr_eq(&self.params, target) || self.params == *target {
            return Ok(Poly { params: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = (0..self.params.len()).map(|i| target.index_of(self.params.name(i))).collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut ex = vec![0; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::Usage(format!("parameter `{}` missing from target set", self.params.name(i))))?;
                if e < 0 && !target.is_invertible(j) {
                    return Err(Error::Usage(format!("`{}` is not invertible in target set", target.name(j))));
                }
                ex[j] = e;
            }
            terms.insert(Monomial::from_exps(ex), c.clone());
        }
        Ok(Poly { params: target.clone(), terms })
    }

    /// Numeric value with generators bound by index.
    pub fn eval_indexed(&self, values: &[Option<Complex>], prec: u32) -> Result<Complex> {
        let n = self.params.len();
        let used: Vec<usize> = self.support_vars();
        for &i in &used {
            match &values[i] {
                None => return Err(Error::MissingBinding(self.params.name(i).to_string())),
                Some(v) => {
                    if v.is_zero() && self.min_degree_in(i) < 0 {
                        return Err(Error::Pole(self.params.name(i).to_string()));
                    }
                }
            }
        }
        // power cache per generator
        let mut cache: Vec<BTreeMap<i32, Complex>> = vec![BTreeMap::new(); n];
        let mut acc = Complex::zero(prec);
        for (m, c) in &self.terms {
            let mut t = Complex::from_rational(c, prec);
            for &i in &used {
                let e = m.exps()[i];
                if e == 0 {
                    continue;
                }
                let v = values[i].as_ref().unwrap();
                let p = cache[i].entry(e).or_insert_with(|| v.powi(e as i64)).clone();
                t = t.mul(&p);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Numeric value with generators bound by name.
    pub fn eval(&self, bindings: &std::collections::HashMap<String, Complex>, prec: u32) -> Result<Complex> {
        let values: Vec<Option<Complex>> =
            self.params.names().iter().map(|n| bindings.get(n).map(|v| requantize(v, prec))).collect();
        self.eval_indexed(&values, prec)
    }

    /// Substitutes exact rational values for named generators and drops them
    /// into the constant field (the parameter set is unchanged).
    pub fn specialize(&self, values: &[(usize, Rational)]) -> Result<Poly> {
        let mut out = self.clone();
        for (i, v) in values {
            out = out.substitute(*i, &Poly::constant(&self.params, v.clone()))?;
        }
        Ok(out)
    }

    /// `true` if every negative exponent sits on one of `allowed`.
    pub fn negative_exponents_only_on(&self, allowed: &[usize]) -> bool {
        self.terms
            .keys()
            .all(|m| m.exps().iter().enumerate().all(|(i, &e)| e >= 0 || allowed.contains(&i)))
    }

    /// Total degree in the generators `vars`.
    pub fn degree_in_set(&self, vars: &[usize]) -> i32 {
        self.terms.keys().map(|m| vars.iter().map(|&i| m.exps()[i]).sum::<i32>()).max().unwrap_or(0)
    }
}

fn requantize(v: &Complex, prec: u32) -> Complex {
    if v.prec() == prec {
        v.clone()
    } else {
        Complex { re: rug::Float::with_val(prec, &v.re), im: rug::Float::with_val(prec, &v.im) }
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
    match terms.get_mut(m) {
        Some(acc) => {
            *acc += c;
            if *acc == 0 {
                terms.remove(m);
            }
        }
        None => {
            if *c != 0 {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).expect("polynomial addition over mismatched parameter sets")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).expect("polynomial subtraction over mismatched parameter sets")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).expect("polynomial product over mismatched parameter sets")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rational::from(-1))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

