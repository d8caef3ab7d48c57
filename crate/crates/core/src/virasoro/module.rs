use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rug::Rational;
use serde_json::{json, Value};

use super::partition::Partition;
use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};

type Terms = BTreeMap<Partition, Poly>;

/// Irregular Verma module of rank `r`: generated by `|Λ⟩` with
/// `L_n|Λ⟩ = Λ_n|Λ⟩` for `r ≤ n ≤ 2r` and `L_n|Λ⟩ = 0` for `n > 2r`.
///
/// Basis words are `L_{r-μ_1}···L_{r-μ_k}|Λ⟩` for partitions `μ`; rank zero
/// with `Λ = (Δ)` is the ordinary Verma module.
pub struct IrregularModule {
    r: u32,
    lambda: Vec<Poly>,
    c: Poly,
    params: Params,
    cache: RwLock<HashMap<(i64, Partition), Arc<Terms>>>,
}

impl fmt::Debug for IrregularModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IrregularModule").field("r", &self.r).field("lambda", &self.lambda).field("c", &self.c).finish()
    }
}

impl IrregularModule {
    /// `lambda` holds `Λ_r, …, Λ_{2r}`.
    pub fn new(r: u32, lambda: Vec<Poly>, c: Poly) -> Result<Arc<Self>> {
        if lambda.len() != r as usize + 1 {
            return Err(Error::Usage(format!("rank {r} needs {} weights, got {}", r + 1, lambda.len())));
        }
        let params = c.params().clone();
        for l in &lambda {
            if l.params() != &params {
                return Err(Error::Usage("weights and central charge live over different parameter sets".into()));
            }
        }
        Ok(Arc::new(IrregularModule { r, lambda, c, params, cache: RwLock::new(HashMap::new()) }))
    }

    /// Central charge from `ρ` via `c = 1 - 12ρ²`.
    pub fn with_rho(r: u32, lambda: Vec<Poly>, rho: &Poly) -> Result<Arc<Self>> {
        let c = &Poly::one(rho.params()) - &rho.pow(2).scale_i64(12);
        IrregularModule::new(r, lambda, c)
    }

    /// Verma module with highest weight `Δ`.
    pub fn verma(delta: Poly, c: Poly) -> Result<Arc<Self>> {
        IrregularModule::new(0, vec![delta], c)
    }

    pub fn rank(&self) -> u32 {
        self.r
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn central_charge(&self) -> &Poly {
        &self.c
    }

    pub fn lambdas(&self) -> &[Poly] {
        &self.lambda
    }

    /// Eigenvalue `Λ_n` for `n ≥ r` (zero above `2r`).
    pub fn weight(&self, n: i64) -> Poly {
        let r = self.r as i64;
        assert!(n >= r, "weight requested below the rank");
        if n > 2 * r {
            Poly::zero(&self.params)
        } else {
            self.lambda[(n - r) as usize].clone()
        }
    }

    /// Mode of the leftmost operator in a basis word.
    fn mode(&self, part: u32) -> i64 {
        self.r as i64 - part as i64
    }

    fn zero_terms() -> Terms {
        BTreeMap::new()
    }

    /// `L_n` applied to the basis word of `w`, memoized per module.
    pub fn act_word(&self, n: i64, w: &Partition) -> Arc<Terms> {
        if let Some(hit) = self.cache.read().unwrap().get(&(n, w.clone())) {
            return hit.clone();
        }
        let out = Arc::new(self.act_word_uncached(n, w));
        self.cache.write().unwrap().insert((n, w.clone()), out.clone());
        out
    }

    fn act_word_uncached(&self, n: i64, w: &Partition) -> Terms {
        let r = self.r as i64;
        let mut out = IrregularModule::zero_terms();
        let Some(first) = w.first() else {
            if n >= r {
                let wt = self.weight(n);
                if !wt.is_zero() {
                    out.insert(Partition::empty(), wt);
                }
            } else {
                out.insert(Partition::new(vec![(r - n) as u32]).unwrap(), Poly::one(&self.params));
            }
            return out;
        };
        let a1 = self.mode(first);
        if n <= a1 {
            out.insert(w.with_front((r - n) as u32), Poly::one(&self.params));
            return out;
        }
        // L_n L_{a1} X = L_{a1} L_n X + (n - a1) L_{n+a1} X + central term
        let rest = w.without_first();
        let inner = self.act_word(n, &rest);
        self.apply_into(a1, &inner, &Poly::one(&self.params), &mut out);
        let k = Poly::from_i64(&self.params, n - a1);
        let comm = self.act_word(n + a1, &rest);
        accumulate(&mut out, &comm, &k);
        if n + a1 == 0 {
            let central = self.c.scale(&Rational::from((n * n * n - n, 12)));
            add_into(&mut out, &rest, &central);
        }
        out
    }

    /// `out += k · L_n v` for `v` given as a term map.
    pub(crate) fn apply_into(&self, n: i64, v: &Terms, k: &Poly, out: &mut Terms) {
        let r = self.r as i64;
        for (w, coeff) in v {
            let kc = coeff * k;
            if kc.is_zero() {
                continue;
            }
            // fast path: the new operator is already in order
            if n < r && w.first().map_or(true, |f| n <= self.mode(f)) {
                add_into(out, &w.with_front((r - n) as u32), &kc);
                continue;
            }
            let img = self.act_word(n, w);
            accumulate(out, &img, &kc);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "Lambda": self.lambda.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "c": self.c.to_json(),
            "params": params_json(&self.params),
        })
    }

    pub fn from_json(v: &Value) -> Result<Arc<Self>> {
        let params = params_from_json(v.get("params").ok_or_else(|| Error::Parse("module JSON needs `params`".into()))?)?;
        let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| Error::Parse("module JSON needs integer `r`".into()))? as u32;
        let lam = v
            .get("Lambda")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("module JSON needs `Lambda`".into()))?
            .iter()
            .map(|x| Poly::from_json(&params, x))
            .collect::<Result<Vec<_>>>()?;
        let c = Poly::from_json(&params, v.get("c").ok_or_else(|| Error::Parse("module JSON needs `c`".into()))?)?;
        IrregularModule::new(r, lam, c)
    }
}

pub fn params_json(p: &Params) -> Value {
    Value::Array(
        (0..p.len()).map(|i| json!({"name": p.name(i), "invertible": p.is_invertible(i)})).collect(),
    )
}

pub fn params_from_json(v: &Value) -> Result<Params> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("`params` must be an array".into()))?;
    let mut gens = Vec::with_capacity(arr.len());
    for g in arr {
        let name = g.get("name").and_then(Value::as_str).ok_or_else(|| Error::Parse("parameter needs `name`".into()))?;
        let inv = g.get("invertible").and_then(Value::as_bool).unwrap_or(false);
        gens.push((name.to_string(), inv));
    }
    crate::coeffring::ParamSet::new(&gens)
}

pub(crate) fn add_into(out: &mut Terms, w: &Partition, c: &Poly) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(w) {
        Some(acc) => {
            acc.add_assign_ref(c);
            if acc.is_zero() {
                out.remove(w);
            }
        }
        None => {
            out.insert(w.clone(), c.clone());
        }
    }
}

pub(crate) fn accumulate(out: &mut Terms, v: &Terms, k: &Poly) {
    for (w, c) in v {
        let t = if k.is_one() { c.clone() } else { c * k };
        add_into(out, w, &t);
    }
}

/// Finite combination of basis words with polynomial coefficients.
#[derive(Clone)]
pub struct ModuleVector {
    module: Arc<IrregularModule>,
    terms: Terms,
}

impl PartialEq for ModuleVector {
    fn eq(&self, other: &Self) -> bool {
        let same = Arc::ptr_eq(&self.module, &other.module)
            || (self.module.rank() == other.module.rank()
                && self.module.lambdas() == other.module.lambdas()
                && self.module.central_charge() == other.module.central_charge());
        same && self.terms == other.terms
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (w, c) in &self.terms {
            m.entry(&w.to_string(), &c.to_text());
        }
        m.finish()
    }
}

impl ModuleVector {
    pub fn zero(module: &Arc<IrregularModule>) -> Self {
        ModuleVector { module: module.clone(), terms: BTreeMap::new() }
    }

    /// The generating vector `|Λ⟩`.
    pub fn vacuum(module: &Arc<IrregularModule>) -> Self {
        ModuleVector::basis(module, Partition::empty())
    }

    pub fn basis(module: &Arc<IrregularModule>, w: Partition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Poly::one(module.params()));
        ModuleVector { module: module.clone(), terms }
    }

    pub fn from_terms(module: &Arc<IrregularModule>, raw: impl IntoIterator<Item = (Partition, Poly)>) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in raw {
            add_into(&mut terms, &w, &c);
        }
        ModuleVector { module: module.clone(), terms }
    }

    pub fn module(&self) -> &Arc<IrregularModule> {
        &self.module
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Partition) -> Poly {
        self.terms.get(w).cloned().unwrap_or_else(|| Poly::zero(self.module.params()))
    }

    /// Coefficient of `|Λ⟩`.
    pub fn vacuum_coeff(&self) -> Poly {
        self.coeff(&Partition::empty())
    }

    pub fn add(&self, o: &ModuleVector) -> ModuleVector {
        let mut terms = self.terms.clone();
        accumulate(&mut terms, &o.terms, &Poly::one(self.module.params()));
        ModuleVector { module: self.module.clone(), terms }
    }

    pub fn sub(&self, o: &ModuleVector) -> ModuleVector {
        let mut terms = self.terms.clone();
        accumulate(&mut terms, &o.terms, &Poly::from_i64(self.module.params(), -1));
        ModuleVector { module: self.module.clone(), terms }
    }

    pub fn scale(&self, k: &Poly) -> ModuleVector {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, &self.terms, k);
        ModuleVector { module: self.module.clone(), terms }
    }

    /// `self += k · o`.
    pub fn add_scaled(&mut self, o: &ModuleVector, k: &Poly) {
        accumulate(&mut self.terms, &o.terms, k);
    }

    /// `L_n · self`.
    pub fn apply_l(&self, n: i64) -> ModuleVector {
        let mut out = BTreeMap::new();
        self.module.apply_into(n, &self.terms, &Poly::one(self.module.params()), &mut out);
        ModuleVector { module: self.module.clone(), terms: out }
    }

    /// `(L_n − Λ_n) · self` for `n ≥ r`.
    pub fn apply_shifted(&self, n: i64) -> ModuleVector {
        let w = self.module.weight(n);
        let mut out = self.apply_l(n);
        out.add_scaled(self, &-&w);
        out
    }

    /// Applies `f` to each coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<ModuleVector> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            add_into(&mut terms, w, &f(c)?);
        }
        Ok(ModuleVector { module: self.module.clone(), terms })
    }

    /// Largest partition size in the support.
    pub fn max_level(&self) -> u32 {
        self.terms.keys().map(Partition::size).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "module": self.module.to_json(),
            "terms": self
                .terms
                .iter()
                .map(|(w, c)| json!({"partition": w.parts(), "coeff": c.to_json()}))
                .collect::<Vec<_>>(),
        })
    }

    /// Terms-only JSON, for embedding next to an already serialized module.
    pub fn terms_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(w, c)| json!({"partition": w.parts(), "coeff": c.to_json()})).collect())
    }

    pub fn from_terms_json(module: &Arc<IrregularModule>, v: &Value) -> Result<ModuleVector> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("vector terms must be an array".into()))?;
        let mut raw = Vec::with_capacity(arr.len());
        for t in arr {
            let parts = t
                .get("partition")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term needs `partition`".into()))?
                .iter()
                .map(|p| p.as_u64().map(|p| p as u32))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::Parse("partition parts must be positive integers".into()))?;
            let w = Partition::new(parts).ok_or_else(|| Error::Parse("partition parts must be positive".into()))?;
            let c = Poly::from_json(module.params(), t.get("coeff").ok_or_else(|| Error::Parse("term needs `coeff`".into()))?)?;
            raw.push((w, c));
        }
        Ok(ModuleVector::from_terms(module, raw))
    }

    pub fn from_json(v: &Value) -> Result<ModuleVector> {
        let module = IrregularModule::from_json(v.get("module").ok_or_else(|| Error::Parse("vector JSON needs `module`".into()))?)?;
        ModuleVector::from_terms_json(&module, v.get("terms").unwrap_or(&Value::Null))
    }
}
