//! Ramified irregular vertex operators `Φ(z)|Λ⟩ = z^α exp(Σ β_i z^{−i/2}) Σ v_m z^{m/2}`
//! acting on an irregular Verma module with `Λ_{2r} = 0`, `Λ_{2r−1} ≠ 0`.

mod descendant;
mod presets;
mod singular;

use std::collections::HashMap;
use std::sync::Arc;

use rug::Rational;
use serde_json::{json, Value};

pub use descendant::{descendant_series, DescendantSeries, FieldEngine};
pub use presets::{preset_c0, Preset};
pub use singular::{field_of_vector, singular_condition_solve, SingularReport, SingularSolution};

use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};
use crate::solve::{solve_vector, Projector, Unknowns};
use crate::virasoro::{params_from_json, params_json, IrregularModule, ModuleVector};

#[derive(Clone, Debug)]
pub enum BetaSpec {
    Known(Poly),
    Solve,
}

#[derive(Clone, Debug)]
pub enum C0Mode {
    /// Fresh generators `c0_m`.
    Symbolic,
    /// Values for `m = 1, 2, …`; orders past the end stay symbolic.
    Values(Vec<Poly>),
    Preset(Preset),
}

/// Power grid of the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// `z^{m/2}`, `Λ_{2r} = 0`.
    Half,
    /// `z^k` only (rank-zero operator into `M_{Λ'}` with `Λ'_{2r} ≠ 0`). The
    /// supplied `Λ` is the target weight `Λ'` (so `Λ'_r = Λ_r − rβ_r` in terms
    /// of the source), `β` has `2r` entries and only even indices may be
    /// nonzero: `β_{2j}` here is the coefficient of `z^{−j}`.
    Integer,
}

#[derive(Clone, Debug)]
pub struct RamifiedInput {
    pub r: u32,
    /// `Λ_r..Λ_{2r}`.
    pub lambda: Vec<Poly>,
    pub delta: Poly,
    pub c: Poly,
    /// `β_1..β_{2r−1}` (`β_1..β_{2r}` on the integer grid).
    pub beta: Vec<BetaSpec>,
    /// `None` solves for `α`.
    pub alpha: Option<Poly>,
    pub c0: C0Mode,
    /// Truncation in half-steps.
    pub order: u32,
    /// Extra levels in the ansatz beyond `|μ| ≤ m`.
    pub slack: u32,
    pub grid: Grid,
    /// Allow division by non-unit coefficients when extracting scalars.
    pub generic: bool,
}

impl RamifiedInput {
    /// Half grid, `α` solved, no slack.
    pub fn new(r: u32, lambda: Vec<Poly>, delta: Poly, c: Poly, beta: Vec<BetaSpec>, c0: C0Mode, order: u32) -> Self {
        RamifiedInput { r, lambda, delta, c, beta, alpha: None, c0, order, slack: 0, grid: Grid::Half, generic: false }
    }
}

/// Which relations were used at one half-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCertificate {
    pub m: u32,
    /// `n` whose right-hand sides entered the projections.
    pub projected: Vec<i64>,
    /// `n` whose relation was imposed on the solved vector.
    pub verified: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RamifiedSolution {
    pub r: u32,
    pub grid: Grid,
    pub params: Params,
    pub module: Arc<IrregularModule>,
    pub delta: Poly,
    pub c: Poly,
    pub alpha: Poly,
    pub alpha_determined: bool,
    /// `β_1..β_{2r−1}`.
    pub beta: Vec<Poly>,
    pub v: Vec<ModuleVector>,
    /// `c_∅^{(m)}` for `m = 1..M`, `None` while undetermined.
    pub c0: Vec<Option<Poly>>,
    pub pending: Vec<Poly>,
    /// Non-unit coefficients divided by while extracting scalars.
    pub divisors: Vec<Poly>,
    pub certificate: Vec<OrderCertificate>,
    pub slack: u32,
}

struct State {
    params: Params,
    module: Arc<IrregularModule>,
    delta: Poly,
    alpha: Poly,
    beta: Vec<Poly>,
    v: Vec<ModuleVector>,
    unknowns: Unknowns,
}

impl State {
    /// `L̃_n v_m = (α + (n+1)Δ + (m−2n)/2) v_{m−2n} − Σ_i (i/2) β_i v_{m−2n+i}`;
    /// a term landing on `v_m` itself is the shift `Λ_r − Λ'_r` and is dropped.
    fn rhs(&self, n: i64, m: i64) -> Result<ModuleVector> {
        let mut out = ModuleVector::zero(&self.module);
        let j = m - 2 * n;
        if j >= 0 {
            let k = &(&self.alpha + &self.delta.scale_i64(n + 1)) + &Poly::constant(&self.params, Rational::from((j, 2)));
            out.add_scaled(&self.v[j as usize], &k);
        }
        for (idx, b) in self.beta.iter().enumerate() {
            let i = idx as i64 + 1;
            let k = j + i;
            if k < 0 || k >= m || b.is_zero() {
                continue;
            }
            out.add_scaled(&self.v[k as usize], &b.scale(&Rational::from((-i, 2))));
        }
        out.map_coeffs(|p| self.unknowns.reduce(p))
    }

    fn refresh(&mut self) -> Result<()> {
        let u = &self.unknowns;
        for v in self.v.iter_mut() {
            *v = v.map_coeffs(|p| u.reduce(p))?;
        }
        self.alpha = u.reduce(&self.alpha)?;
        for b in self.beta.iter_mut() {
            *b = u.reduce(b)?;
        }
        Ok(())
    }
}

fn reserved(params: &Params, name: &str) -> Result<()> {
    if params.contains(name) {
        return Err(Error::Usage(format!("parameter name `{name}` is reserved for solver unknowns")));
    }
    Ok(())
}

fn validate(inp: &RamifiedInput) -> Result<()> {
    let r = inp.r as usize;
    if r == 0 {
        return Err(Error::Usage("rank must be at least 1".into()));
    }
    if inp.lambda.len() != r + 1 {
        return Err(Error::Usage(format!("expected {} lambda values Λ_{r}..Λ_{}, got {}", r + 1, 2 * r, inp.lambda.len())));
    }
    let nbeta = if inp.grid == Grid::Integer { 2 * r } else { 2 * r - 1 };
    if inp.beta.len() != nbeta {
        return Err(Error::Usage(format!("expected {nbeta} beta values, got {}", inp.beta.len())));
    }
    match inp.grid {
        Grid::Half => {
            if !inp.lambda[r].is_zero() {
                return Err(Error::Usage("half grid requires Λ_{2r} = 0".into()));
            }
            if inp.lambda[r - 1].is_zero() {
                return Err(Error::Triangularity("Λ_{2r−1} = 0".into()));
            }
        }
        Grid::Integer => {
            if inp.lambda[r].is_zero() {
                return Err(Error::Usage("integer grid requires Λ_{2r} ≠ 0".into()));
            }
            for (idx, b) in inp.beta.iter().enumerate() {
                if idx % 2 == 0 && !matches!(b, BetaSpec::Known(p) if p.is_zero()) {
                    return Err(Error::Usage(format!("integer grid requires β_{} = 0", idx + 1)));
                }
            }
        }
    }
    if let C0Mode::Preset(p) = inp.c0 {
        if p.rank() != inp.r || inp.grid != Grid::Half {
            return Err(Error::Usage(format!("preset {} needs r = {} on the half grid", p.name(), p.rank())));
        }
        if !matches!(inp.beta.last(), Some(BetaSpec::Known(_))) {
            return Err(Error::Usage("presets need a known β_{2r−1}".into()));
        }
    }
    Ok(())
}

/// Solves `v_1..v_M` order by order, extracting `α`, unknown `β_i` and
/// symbolic `c_∅^{(m)}` whenever the imposed relations determine them.
pub fn solve_ramified(inp: &RamifiedInput) -> Result<RamifiedSolution> {
    validate(inp)?;
    let r = inp.r;
    let ri = r as i64;
    let user = inp.delta.params().clone();
    let step = if inp.grid == Grid::Integer { 2 } else { 1 };
    let preset_vals = match (&inp.c0, inp.beta.last()) {
        (C0Mode::Values(v), _) => v.clone(),
        (C0Mode::Preset(p), Some(BetaSpec::Known(b))) => preset_c0(*p, b, &inp.c, &inp.delta)?,
        _ => Vec::new(),
    };
    let mut names: Vec<String> = Vec::new();
    if inp.alpha.is_none() {
        names.push("alpha".into());
    }
    for (idx, b) in inp.beta.iter().enumerate() {
        if matches!(b, BetaSpec::Solve) {
            names.push(format!("beta_{}", idx + 1));
        }
    }
    for m in 1..=inp.order {
        if m % step == 0 && preset_vals.get(m as usize - 1).is_none() {
            names.push(format!("c0_{m}"));
        }
    }
    for n in &names {
        reserved(&user, n)?;
    }
    let extra: Vec<(String, bool)> = names.iter().map(|n| (n.clone(), false)).collect();
    let params = user.extended(&extra)?;
    let emb = |p: &Poly| p.embed(&params);
    let lambda: Vec<Poly> = inp.lambda.iter().map(emb).collect::<Result<_>>()?;
    let module = IrregularModule::new(r, lambda, emb(&inp.c)?)?;
    let beta: Vec<Poly> = inp
        .beta
        .iter()
        .enumerate()
        .map(|(idx, b)| match b {
            BetaSpec::Known(p) => emb(p),
            BetaSpec::Solve => Ok(Poly::var(&params, &format!("beta_{}", idx + 1)).unwrap()),
        })
        .collect::<Result<_>>()?;
    let alpha = match &inp.alpha {
        Some(a) => emb(a)?,
        None => Poly::var(&params, "alpha").unwrap(),
    };
    let mut unknowns = Unknowns::new(&params, &names)?;
    unknowns.allow_generic(inp.generic);
    let mut st = State {
        params: params.clone(),
        module: module.clone(),
        delta: emb(&inp.delta)?,
        alpha,
        beta,
        v: vec![ModuleVector::vacuum(&module)],
        unknowns,
    };
    let offset = match inp.grid {
        Grid::Half => ri - 1,
        Grid::Integer => ri,
    };
    let proj = Projector::new(&module, offset);
    let mut certificate = Vec::new();
    let mut c0 = Vec::new();
    for m in 1..=inp.order {
        if m % step != 0 {
            st.v.push(ModuleVector::zero(&module));
            c0.push(Some(Poly::zero(&params)));
            continue;
        }
        let mi = m as i64;
        let bound = m + inp.slack;
        let top = (2 * ri + 1).max(offset + bound as i64);
        let mut rhs = HashMap::new();
        for n in ri..=top {
            rhs.insert(n, st.rhs(n, mi)?);
        }
        let vac = match preset_vals.get(m as usize - 1) {
            Some(p) => emb(p)?,
            None => Poly::var(&params, &format!("c0_{m}")).unwrap(),
        };
        let vm = solve_vector(&proj, bound, &rhs, vac)?;
        let verified: Vec<i64> = (ri..=2 * ri + 1).collect();
        let mut eqs = Vec::new();
        for &n in &verified {
            let res = vm.apply_shifted(n).sub(&rhs[&n]);
            eqs.extend(res.terms().values().cloned());
        }
        st.v.push(vm);
        let fixed = st.unknowns.absorb(eqs, &|bad| Error::RecursionViolated {
            n: ri,
            m: mi,
            detail: format!("inconsistent scalar equation {bad} = 0"),
        })?;
        if !fixed.is_empty() {
            st.refresh()?;
        }
        certificate.push(OrderCertificate { m, projected: (offset + 1..=offset + bound as i64).collect(), verified });
        c0.push(None);
    }
    st.refresh()?;
    for (k, slot) in c0.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let m = k + 1;
        *slot = match preset_vals.get(k) {
            Some(p) => Some(emb(p)?),
            None => st.unknowns.value(params.index_of(&format!("c0_{m}")).unwrap()).cloned(),
        };
    }
    let alpha_determined = params.index_of("alpha").map_or(true, |i| !st.alpha.contains_var(i));
    Ok(RamifiedSolution {
        r,
        grid: inp.grid,
        params: params.clone(),
        module,
        delta: st.delta,
        c: emb(&inp.c)?,
        alpha: st.alpha,
        alpha_determined,
        beta: st.beta,
        v: st.v,
        c0,
        pending: st.unknowns.pending().to_vec(),
        divisors: st.unknowns.divisors().to_vec(),
        certificate,
        slack: inp.slack,
    })
}

impl RamifiedSolution {
    /// Every `v_m` is supported on `|μ| ≤ m`; with slack this also says the
    /// extra ansatz levels came back zero.
    pub fn degree_bound_holds(&self) -> bool {
        self.v.iter().enumerate().all(|(m, v)| v.max_level() as usize <= m)
    }

    /// Generators appearing with negative exponents in any coefficient.
    pub fn denominator_vars(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let polys = self.v.iter().flat_map(|v| v.terms().values()).chain(std::iter::once(&self.alpha)).chain(self.beta.iter());
        for p in polys {
            for i in p.support_vars() {
                if p.min_degree_in(i) < 0 && !out.contains(&i) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Negative exponents occur only on generators of `Λ_{2r−1}`.
    pub fn denominators_ok(&self) -> bool {
        let allowed = self.module.weight(2 * self.r as i64 - 1).support_vars();
        self.denominator_vars().iter().all(|i| allowed.contains(i))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "ramified",
            "r": self.r,
            "grid": match self.grid { Grid::Half => "half", Grid::Integer => "integer" },
            "params": params_json(&self.params),
            "module": self.module.to_json(),
            "delta": self.delta.to_json(),
            "c": self.c.to_json(),
            "alpha": self.alpha.to_json(),
            "alpha_determined": self.alpha_determined,
            "beta": self.beta.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "c0": self.c0.iter().map(|c| c.as_ref().map_or(Value::Null, Poly::to_json)).collect::<Vec<_>>(),
            "v": self.v.iter().map(ModuleVector::terms_json).collect::<Vec<_>>(),
            "pending": self.pending.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "divisors": self.divisors.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "certificate": self.certificate.iter().map(|c| json!({"m": c.m, "projected": c.projected, "verified": c.verified})).collect::<Vec<_>>(),
            "slack": self.slack,
            "degree_bound_holds": self.degree_bound_holds(),
            "denominators_ok": self.denominators_ok(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RamifiedSolution> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("solution needs `{k}`")));
        if get("kind")?.as_str() != Some("ramified") {
            return Err(Error::Parse("not a ramified solution".into()));
        }
        let params = params_from_json(get("params")?)?;
        let module = IrregularModule::from_json(get("module")?)?;
        let arr = |k: &str| -> Result<&Vec<Value>> { get(k)?.as_array().ok_or_else(|| Error::Parse(format!("`{k}` must be an array"))) };
        let polys = |k: &str| -> Result<Vec<Poly>> { arr(k)?.iter().map(|x| Poly::from_json(&params, x)).collect() };
        let int = |k: &str| -> Result<u64> { get(k)?.as_u64().ok_or_else(|| Error::Parse(format!("`{k}` must be an integer"))) };
        let ints = |x: &Value| -> Result<Vec<i64>> {
            x.as_array().ok_or_else(|| Error::Parse("certificate lists must be arrays".into()))?.iter().map(|n| n.as_i64().ok_or_else(|| Error::Parse("expected integer".into()))).collect()
        };
        let certificate = arr("certificate")?
            .iter()
            .map(|c| {
                Ok(OrderCertificate {
                    m: c.get("m").and_then(Value::as_u64).ok_or_else(|| Error::Parse("certificate needs `m`".into()))? as u32,
                    projected: ints(c.get("projected").unwrap_or(&Value::Null))?,
                    verified: ints(c.get("verified").unwrap_or(&Value::Null))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(RamifiedSolution {
            r: int("r")? as u32,
            grid: match get("grid")?.as_str() {
                Some("half") => Grid::Half,
                Some("integer") => Grid::Integer,
                _ => return Err(Error::Parse("`grid` must be \"half\" or \"integer\"".into())),
            },
            params: params.clone(),
            module: module.clone(),
            delta: Poly::from_json(&params, get("delta")?)?,
            c: Poly::from_json(&params, get("c")?)?,
            alpha: Poly::from_json(&params, get("alpha")?)?,
            alpha_determined: get("alpha_determined")?.as_bool().ok_or_else(|| Error::Parse("`alpha_determined` must be a boolean".into()))?,
            beta: polys("beta")?,
            v: arr("v")?.iter().map(|x| ModuleVector::from_terms_json(&module, x)).collect::<Result<_>>()?,
            c0: arr("c0")?.iter().map(|x| if x.is_null() { Ok(None) } else { Poly::from_json(&params, x).map(Some) }).collect::<Result<_>>()?,
            pending: polys("pending")?,
            divisors: polys("divisors")?,
            certificate,
            slack: int("slack")? as u32,
        })
    }
}
