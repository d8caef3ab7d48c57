use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rug::Rational;

use super::RamifiedSolution;
use crate::coeffring::Poly;
use crate::error::{Error, Result};
use crate::rank_r::binom;
use crate::virasoro::{ModuleVector, Partition};

/// `Σ_m S_m z^{m/2}` (common prefactor `z^α exp(Σ β_i z^{−i/2})` implied),
/// exact for every index `m ≤ valid`.
#[derive(Clone, Debug)]
pub struct DescendantSeries {
    pub terms: BTreeMap<i64, ModuleVector>,
    pub valid: i64,
}

impl DescendantSeries {
    fn truncate(mut self) -> Self {
        let v = self.valid;
        self.terms.retain(|&m, c| m <= v && !c.is_zero());
        self
    }

    fn min_index(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, m: i64) -> Option<&ModuleVector> {
        self.terms.get(&m)
    }

    fn add_scaled_shifted(&mut self, o: &DescendantSeries, k: &Poly, shift: i64) {
        for (m, v) in &o.terms {
            let idx = m + shift;
            if idx > self.valid {
                continue;
            }
            match self.terms.get_mut(&idx) {
                Some(e) => e.add_scaled(v, k),
                None => {
                    self.terms.insert(idx, v.scale(k));
                }
            }
        }
    }
}

/// Action of `L_{−λ̂}·Φ` on module vectors, built from the primary commutation
/// relation and the normal-ordered `T(z)` expansion. Source and target module
/// coincide, so this applies to half-grid solutions.
pub struct FieldEngine<'a> {
    sol: &'a RamifiedSolution,
    loss: i64,
    memo: RefCell<HashMap<(Vec<u32>, Partition), DescendantSeries>>,
}

impl<'a> FieldEngine<'a> {
    pub fn new(sol: &'a RamifiedSolution) -> Self {
        let loss = sol.beta.iter().rposition(|b| !b.is_zero()).map_or(0, |i| i as i64 + 1);
        FieldEngine { sol, loss, memo: RefCell::new(HashMap::new()) }
    }

    fn zero(&self, valid: i64) -> DescendantSeries {
        DescendantSeries { terms: BTreeMap::new(), valid }
    }

    fn half(&self, m: i64) -> Poly {
        Poly::constant(&self.sol.params, Rational::from((m, 2)))
    }

    /// `z ∂_z` including the prefactor.
    fn euler(&self, s: &DescendantSeries) -> DescendantSeries {
        let mut out = self.zero(s.valid - self.loss);
        for (m, v) in &s.terms {
            if *m <= out.valid {
                out.terms.insert(*m, v.scale(&(&self.sol.alpha + &self.half(*m))));
            }
        }
        for (idx, b) in self.sol.beta.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let i = idx as i64 + 1;
            out.add_scaled_shifted(s, &b.scale(&Rational::from((-i, 2))), -i);
        }
        out.truncate()
    }

    fn apply_l(&self, k: i64, s: &DescendantSeries) -> DescendantSeries {
        let terms = s.terms.iter().map(|(m, v)| (*m, v.apply_l(k))).collect();
        DescendantSeries { terms, valid: s.valid }.truncate()
    }

    /// `Φ(z) w` for a basis word `w`.
    fn primary(&self, w: &Partition) -> DescendantSeries {
        if w.is_empty() {
            let terms = self.sol.v.iter().enumerate().map(|(m, v)| (m as i64, v.clone())).collect();
            return DescendantSeries { terms, valid: self.sol.v.len() as i64 - 1 }.truncate();
        }
        let key = (Vec::new(), w.clone());
        if let Some(s) = self.memo.borrow().get(&key) {
            return s.clone();
        }
        let k = self.sol.r as i64 - w.first().unwrap() as i64;
        let inner = self.primary(&w.without_first());
        // Φ L_k w' = L_k Φ w' − z^k (z∂ + (k+1)Δ) Φ w'
        let e = self.euler(&inner);
        let mut out = self.apply_l(k, &inner);
        out.valid = out.valid.min(e.valid + 2 * k);
        let minus_one = Poly::from_i64(&self.sol.params, -1);
        out.add_scaled_shifted(&e, &minus_one, 2 * k);
        out.add_scaled_shifted(&inner, &self.sol.delta.scale_i64(-(k + 1)), 2 * k);
        let out = out.truncate();
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn on_vector(&self, lam: &[u32], v: &ModuleVector, valid_hint: Option<i64>) -> DescendantSeries {
        let mut acc: Option<DescendantSeries> = None;
        for (w, c) in v.terms() {
            let s = self.field(lam, w);
            match acc.as_mut() {
                None => {
                    let mut a = self.zero(s.valid);
                    a.add_scaled_shifted(&s, c, 0);
                    acc = Some(a);
                }
                Some(a) => {
                    a.valid = a.valid.min(s.valid);
                    a.add_scaled_shifted(&s, c, 0);
                }
            }
        }
        acc.unwrap_or_else(|| self.zero(valid_hint.unwrap_or(i64::MAX))).truncate()
    }

    /// `(L_{−λ̂_1}·L_{−λ̂_2}·…·Φ)(z) w` with `λ̂_1` applied last.
    pub fn field(&self, lam: &[u32], w: &Partition) -> DescendantSeries {
        if lam.is_empty() {
            return self.primary(w);
        }
        let key = (lam.to_vec(), w.clone());
        if let Some(s) = self.memo.borrow().get(&key) {
            return s.clone();
        }
        let n = lam[0] as i64;
        let inner = &lam[1..];
        let base = self.field(inner, w);
        let out = if n == 1 {
            // ∂_z = z^{−1} z∂
            let e = self.euler(&base);
            let mut out = self.zero(e.valid - 2);
            out.add_scaled_shifted(&e, &Poly::one(&self.sol.params), -2);
            out
        } else {
            let r = self.sol.r as i64;
            let ps = &self.sol.params;
            // Φ T_+ part: k ≥ −1, L_k w vanishes beyond 2r + |w|
            let k_max = 2 * r + w.size() as i64;
            let mut pieces = Vec::new();
            let mut valid = base.valid + 2 * (2 - n);
            for k in -1..=k_max {
                let u = ModuleVector::basis(&self.sol.module, w.clone()).apply_l(k);
                if u.is_zero() {
                    continue;
                }
                let s = self.on_vector(inner, &u, None);
                let shift = 2 * (-k - n);
                valid = valid.min(s.valid + shift);
                let sign = if n % 2 == 0 { 1 } else { -1 };
                let coef = Poly::constant(ps, Rational::from(binom(k + n - 1, n - 2) * sign));
                pieces.push((s, coef, shift));
            }
            let mut out = self.zero(valid);
            for (s, coef, shift) in &pieces {
                out.add_scaled_shifted(s, coef, *shift);
            }
            // T_− part: k ≤ −2
            if let Some(lo) = base.min_index() {
                let mut k = -2i64;
                while lo + 2 * (-k - n) <= valid {
                    let coef = Poly::constant(ps, Rational::from(binom(-k - 2, n - 2)));
                    out.add_scaled_shifted(&self.apply_l(k, &base), &coef, 2 * (-k - n));
                    k -= 1;
                }
            }
            out
        }
        .truncate();
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }
}

/// `(L_{−λ̂}·Φ)(z)|Λ⟩` through half-index `order`.
pub fn descendant_series(sol: &RamifiedSolution, lam: &Partition, order: i64) -> Result<DescendantSeries> {
    if sol.grid != super::Grid::Half {
        return Err(Error::Usage("descendants are implemented for the half grid (Λ' = Λ) only".into()));
    }
    let eng = FieldEngine::new(sol);
    let mut s = eng.field(lam.parts(), &Partition::empty());
    if s.valid < order {
        return Err(Error::InsufficientOrder(format!(
            "descendant {lam} is exact only through z^{{{}/2}}; solve to a higher order",
            s.valid
        )));
    }
    s.valid = order;
    Ok(s.truncate())
}
