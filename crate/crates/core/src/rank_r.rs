//! Rank-r irregular vertex operators `Φ(z)|Δ⟩ = z^α exp(Σ β_n z^{-n}) Σ v_m z^m`
//! from `M_Δ` to the irregular Verma module `M_Λ^{[r]}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};
use crate::solve::{solve_vector, Projector, Unknowns};
use crate::virasoro::{params_from_json, params_json, IrregularModule, ModuleVector};

/// Data fixing a rank-r operator: `λ_0..λ_r` (λ_r a unit), `β_r`, `Δ`, `ρ`
/// (with `c = 1 − 12ρ²`) and the truncation order `M`.
#[derive(Clone, Debug)]
pub struct RankRInput {
    pub r: u32,
    pub lambda: Vec<Poly>,
    pub beta_r: Poly,
    pub delta: Poly,
    pub rho: Poly,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct RankRSolution {
    pub r: u32,
    pub params: Params,
    pub module: Arc<IrregularModule>,
    pub lambda: Vec<Poly>,
    pub delta: Poly,
    pub rho: Poly,
    /// Solved `α`, or the bare symbol `alpha` when the order is too low.
    pub alpha: Poly,
    /// `β_1..β_r`; entries not yet determined stay symbolic.
    pub beta: Vec<Poly>,
    pub v: Vec<ModuleVector>,
    /// `c_∅^{(m)}` for `m = 1..M`, `None` while undetermined.
    pub c0: Vec<Option<Poly>>,
    /// Equations that still involve undetermined unknowns.
    pub pending: Vec<Poly>,
}

pub fn binom(n: i64, k: i64) -> Integer {
    if k < 0 || n < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `Λ_n = ½Σ λ_i λ_{n−i} + δ_{n,r}((−1)^{r+1} r β_r − (r+1)ρλ_r)` for `n = r..2r`.
pub fn lambda_from_input(inp: &RankRInput) -> Vec<Poly> {
    let r = inp.r as usize;
    let ps = inp.beta_r.params().clone();
    (r..=2 * r)
        .map(|n| {
            let mut acc = Poly::zero(&ps);
            for i in 0..=r {
                if n >= i && n - i <= r {
                    acc.add_scaled(&inp.lambda[i], &inp.lambda[n - i]);
                }
            }
            let mut acc = acc.scale(&Rational::from((1, 2)));
            if n == r {
                let sign = if r % 2 == 1 { 1 } else { -1 };
                acc = &acc + &inp.beta_r.scale_i64(sign * r as i64);
                acc = &acc - &(&inp.rho * &inp.lambda[r]).scale_i64(r as i64 + 1);
            }
            acc
        })
        .collect()
}

/// Weights `w_k` with `Σ_k w_k C(k+1, i+1) = C(n+1, i+1)` for `0 ≤ i < r`,
/// used to trade the derivative terms of the `L_n` relation for those of
/// `L_0..L_{r−1}`.
pub fn elimination_weights(r: u32, n: i64) -> Vec<Integer> {
    let r = r as i64;
    let mut w = vec![Integer::new(); r as usize];
    for i in (0..r).rev() {
        let mut x = binom(n + 1, i + 1);
        for k in (i + 1)..r {
            x -= Integer::from(&w[k as usize] * binom(k + 1, i + 1));
        }
        w[i as usize] = x;
    }
    w
}

/// Scalar data entering the defining relation.
struct Coeffs<'a> {
    r: i64,
    lambda: &'a [Poly],
    beta: &'a [Poly],
    alpha: &'a Poly,
    delta: &'a Poly,
    rho: &'a Poly,
    params: &'a Params,
}

impl Coeffs<'_> {
    fn beta(&self, i: i64) -> Poly {
        if i >= 1 && i <= self.r {
            self.beta[i as usize - 1].clone()
        } else {
            Poly::zero(self.params)
        }
    }

    /// Derivative-free part of `L_n v_m`, as coefficients of `v_j`.
    fn plain_terms(&self, n: i64, m: i64) -> BTreeMap<i64, Poly> {
        let ps = self.params;
        let r = self.r;
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        let mut add = |j: i64, c: Poly| {
            if j < 0 || c.is_zero() {
                return;
            }
            let e = out.entry(j).or_insert_with(|| Poly::zero(ps));
            e.add_assign_ref(&c);
        };
        if n == 0 {
            add(m, self.delta.clone());
        }
        let mut a = self.alpha + &Poly::from_i64(ps, m - n);
        a = &a - &(self.rho * &self.lambda[0]).scale_i64(n + 1);
        add(m - n, a);
        for i in 1..=r {
            let mut c = self.beta(i).scale_i64(i);
            c = &c + &(self.rho * &self.lambda[i as usize]).scale(&Rational::from(binom(n + 1, i + 1) * (i + 1)));
            add(m - n + i, -&c);
        }
        for i in 1..=r {
            let b = binom(n + 1, i);
            if b == 0 {
                continue;
            }
            for j in 1..=r {
                let k = i + j - 1;
                if k > r {
                    continue;
                }
                let sign: i64 = if (i - 1) % 2 == 0 { 1 } else { -1 };
                let d = self.beta(k).scale(&Rational::from(Integer::from(&b * (sign * k))));
                add(m - n - 1 + i + j, d);
            }
        }
        for i in 0..=r {
            for j in 0..=r {
                let b = binom(n + 1, i + j + 1);
                if b == 0 {
                    continue;
                }
                let c = (&self.lambda[i as usize] * &self.lambda[j as usize]).scale(&Rational::from((b, 2)));
                add(m - n + i + j, c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

struct State {
    r: u32,
    params: Params,
    module: Arc<IrregularModule>,
    lambda: Vec<Poly>,
    delta: Poly,
    rho: Poly,
    alpha: Poly,
    beta: Vec<Poly>,
    v: Vec<ModuleVector>,
    unknowns: Unknowns,
}

impl State {
    fn coeffs(&self) -> Coeffs<'_> {
        Coeffs {
            r: self.r as i64,
            lambda: &self.lambda,
            beta: &self.beta,
            alpha: &self.alpha,
            delta: &self.delta,
            rho: &self.rho,
            params: &self.params,
        }
    }

    /// Right-hand side of `L̃_n v_m` for `n ≥ r` in terms of `v_0..v_{m−1}`.
    fn rhs(&self, n: i64, m: i64) -> Result<ModuleVector> {
        let r = self.r as i64;
        let co = self.coeffs();
        let mut scal = co.plain_terms(n, m);
        let w = elimination_weights(self.r, n);
        let mut out = ModuleVector::zero(&self.module);
        for k in 0..r {
            let wk = &w[k as usize];
            if *wk == 0 {
                continue;
            }
            let mk = m - n + k;
            let wp = Poly::constant(&self.params, Rational::from(wk));
            for (j, c) in co.plain_terms(k, mk) {
                let e = scal.entry(j).or_insert_with(|| Poly::zero(&self.params));
                *e = &*e - &(&c * &wp);
            }
            if mk >= 0 {
                out.add_scaled(&self.v[mk as usize].apply_l(k), &wp);
            }
        }
        let lam_n = if n <= 2 * r { self.module.weight(n) } else { Poly::zero(&self.params) };
        for (j, c) in scal {
            let c = self.unknowns.reduce(&c)?;
            if c.is_zero() {
                continue;
            }
            if j > m || (j == m && c != lam_n) {
                return Err(Error::RecursionViolated {
                    n,
                    m,
                    detail: format!("coefficient of v_{j} is {c}, expected {}", if j == m { lam_n.to_text() } else { "0".into() }),
                });
            }
            if j == m {
                continue;
            }
            out.add_scaled(&self.v[j as usize], &c);
        }
        out.map_coeffs(|p| self.unknowns.reduce(p))
    }

    fn apply_fixed(&mut self, fixed: &[(usize, Poly)]) -> Result<()> {
        if fixed.is_empty() {
            return Ok(());
        }
        let sub = |p: &Poly| -> Result<Poly> {
            let mut out = p.clone();
            for (i, val) in fixed {
                out = out.substitute(*i, val)?;
            }
            Ok(out)
        };
        for v in self.v.iter_mut() {
            *v = v.map_coeffs(sub)?;
        }
        self.alpha = sub(&self.alpha)?;
        for b in self.beta.iter_mut() {
            *b = sub(b)?;
        }
        Ok(())
    }
}

fn unknown_names(r: u32, order: u32) -> Vec<String> {
    let mut v = vec!["alpha".to_string()];
    v.extend((1..r).map(|k| format!("beta_{k}")));
    v.extend((1..=order).map(|m| format!("c0_{m}")));
    v
}

/// Solves for `α`, `β_1..β_{r−1}` and `v_1..v_M` order by order.
pub fn solve_vm(inp: &RankRInput) -> Result<RankRSolution> {
    let r = inp.r;
    if r == 0 {
        return Err(Error::Usage("rank must be at least 1".into()));
    }
    if inp.lambda.len() != r as usize + 1 {
        return Err(Error::Usage(format!("expected {} lambda values, got {}", r + 1, inp.lambda.len())));
    }
    let user = inp.beta_r.params().clone();
    let names = unknown_names(r, inp.order);
    for n in &names {
        if user.contains(n) {
            return Err(Error::Usage(format!("parameter name `{n}` is reserved for solver unknowns")));
        }
    }
    let extra: Vec<(String, bool)> = names.iter().map(|n| (n.clone(), false)).collect();
    let params = user.extended(&extra)?;
    let emb = |p: &Poly| p.embed(&params);
    let lambda: Vec<Poly> = inp.lambda.iter().map(emb).collect::<Result<_>>()?;
    if !lambda[r as usize].is_unit() {
        return Err(Error::Usage("λ_r must be an invertible generator or a nonzero constant".into()));
    }
    let inp_e = RankRInput {
        r,
        lambda: lambda.clone(),
        beta_r: emb(&inp.beta_r)?,
        delta: emb(&inp.delta)?,
        rho: emb(&inp.rho)?,
        order: inp.order,
    };
    let big_lambda = lambda_from_input(&inp_e);
    let module = IrregularModule::with_rho(r, big_lambda, &inp_e.rho)?;
    let mut beta: Vec<Poly> = (1..r).map(|k| Poly::var(&params, &format!("beta_{k}")).unwrap()).collect();
    beta.push(inp_e.beta_r.clone());
    let mut st = State {
        r,
        params: params.clone(),
        module: module.clone(),
        lambda,
        delta: inp_e.delta.clone(),
        rho: inp_e.rho.clone(),
        alpha: Poly::var(&params, "alpha").unwrap(),
        beta,
        v: vec![ModuleVector::vacuum(&module)],
        unknowns: Unknowns::new(&params, &names)?,
    };
    let proj = Projector::new(&module, r as i64);
    let ri = r as i64;
    for m in 1..=inp.order as i64 {
        let bound = m as u32 * (r + 1);
        let mut rhs = HashMap::new();
        for n in ri..=ri + bound as i64 {
            rhs.insert(n, st.rhs(n, m)?);
        }
        let c0 = Poly::var(&params, &format!("c0_{m}")).unwrap();
        let vm = solve_vector(&proj, bound, &rhs, c0)?;
        st.v.push(vm.clone());
        let mut eqs = Vec::new();
        for n in ri..=2 * ri {
            let res = vm.apply_shifted(n).sub(&rhs[&n]);
            eqs.extend(res.terms().values().cloned());
        }
        let fixed = st.unknowns.absorb(eqs, &|bad| Error::RecursionViolated {
            n: ri,
            m,
            detail: format!("inconsistent scalar equation {bad} = 0"),
        })?;
        st.apply_fixed(&fixed)?;
    }
    let c0 = (1..=inp.order)
        .map(|m| {
            let i = params.index_of(&format!("c0_{m}")).unwrap();
            st.unknowns.value(i).cloned()
        })
        .collect();
    Ok(RankRSolution {
        r,
        params: params.clone(),
        module,
        lambda: st.lambda,
        delta: st.delta,
        rho: st.rho,
        alpha: st.alpha,
        beta: st.beta,
        v: st.v,
        c0,
        pending: st.unknowns.pending().to_vec(),
    })
}

/// `β_1..β_r` as determined by the solver at the lowest sufficient order.
pub fn beta_chain(inp: &RankRInput) -> Result<Vec<Poly>> {
    let mut i2 = inp.clone();
    i2.order = inp.r.saturating_sub(1).max(1);
    let sol = solve_vm(&i2)?;
    let user = inp.beta_r.params();
    sol.beta.iter().map(|b| restrict(b, user)).collect()
}

/// Re-expresses a polynomial over a smaller parameter set when possible.
pub fn restrict(p: &Poly, target: &Params) -> Result<Poly> {
    p.embed(target)
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationStatus {
    Zero,
    Nonzero(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub n: i64,
    pub m: i64,
    pub status: RelationStatus,
}

/// Substitutes the solution into the full defining relation, including the
/// `D_k = Σ_p p λ_{p+k} ∂/∂λ_p` terms, for `0 ≤ n ≤ n_max` and `m ≤ M`.
///
/// Requires `λ_1..λ_r` and `β_r` to be bare generators (or zero for `β_r`).
pub fn verify_defining_relation(sol: &RankRSolution, n_max: i64) -> Result<Vec<RelationCheck>> {
    let r = sol.r as i64;
    let ps = &sol.params;
    let mut lam_idx = vec![None; r as usize + 1];
    for p in 1..=r as usize {
        lam_idx[p] = Some(single_generator(&sol.lambda[p]).ok_or_else(|| {
            Error::Usage(format!("λ_{p} must be a bare generator to apply the derivations"))
        })?);
    }
    let beta_r = &sol.beta[r as usize - 1];
    let beta_idx = if beta_r.is_zero() {
        None
    } else {
        Some(single_generator(beta_r).ok_or_else(|| Error::Usage("β_r must be a bare generator or zero".into()))?)
    };
    let open: Vec<usize> = (1..=sol.c0.len())
        .filter(|m| sol.c0[m - 1].is_none())
        .map(|m| ps.index_of(&format!("c0_{m}")).unwrap())
        .chain(ps.index_of("alpha").filter(|&i| sol.alpha.contains_var(i)))
        .chain((1..r).filter_map(|k| ps.index_of(&format!("beta_{k}")).filter(|&i| sol.beta[k as usize - 1].contains_var(i))))
        .collect();
    let co = Coeffs {
        r,
        lambda: &sol.lambda,
        beta: &sol.beta,
        alpha: &sol.alpha,
        delta: &sol.delta,
        rho: &sol.rho,
        params: ps,
    };
    // D_k|Λ⟩ = (L_k − σ_k)|Λ⟩, with σ_k read off from the relation for L_k v_0
    let mut sigma = Vec::with_capacity(r as usize);
    for k in 0..r {
        let t = co.plain_terms(k, 0);
        if t.keys().any(|&j| j != 0) {
            return Err(Error::RecursionViolated { n: k, m: 0, detail: "L_k v_0 relation is not scalar".into() });
        }
        sigma.push(t.get(&0).cloned().unwrap_or_else(|| Poly::zero(ps)));
    }
    let vac_img: Vec<ModuleVector> =
        (0..r).map(|k| ModuleVector::vacuum(&sol.module).apply_l(k)).collect();
    let derive = |k: i64, v: &ModuleVector| -> Option<ModuleVector> {
        if v.terms().values().any(|c| open.iter().any(|&i| c.contains_var(i))) {
            return None;
        }
        let images = |g: usize| -> Option<Poly> {
            for p in 1..=(r - k) {
                if lam_idx[p as usize] == Some(g) {
                    return Some(sol.lambda[(p + k) as usize].scale_i64(p));
                }
            }
            if k == 0 && beta_idx == Some(g) {
                return Some(beta_r.scale_i64(r));
            }
            None
        };
        let mut out = v.map_coeffs(|c| Ok(c.derivation(&images))).ok()?;
        for (w, c) in v.terms() {
            out.add_scaled(&apply_word(w, &vac_img[k as usize]), c);
        }
        out.add_scaled(v, &-&sigma[k as usize]);
        Some(out)
    };
    let big_m = sol.v.len() as i64 - 1;
    let mut pairs = Vec::new();
    for m in 0..=big_m {
        for n in 0..=n_max {
            pairs.push((n, m));
        }
    }
    let checks = crate::exec::map(&pairs, &|&(n, m): &(i64, i64)| {
        let top = m.max(m - n + r);
        if top > big_m {
            return RelationCheck { n, m, status: RelationStatus::Skipped(format!("needs v_{top}")) };
        }
        let mut rhs = ModuleVector::zero(&sol.module);
        for (j, c) in co.plain_terms(n, m) {
            rhs.add_scaled(&sol.v[j as usize], &c);
        }
        for i in 0..r {
            let j = m - n + i;
            let b = binom(n + 1, i + 1);
            if j < 0 || b == 0 {
                continue;
            }
            match derive(i, &sol.v[j as usize]) {
                Some(d) => rhs.add_scaled(&d, &Poly::constant(ps, Rational::from(b))),
                None => {
                    return RelationCheck { n, m, status: RelationStatus::Skipped(format!("D_{i} of undetermined v_{j}")) }
                }
            }
        }
        let res = sol.v[m as usize].apply_l(n).sub(&rhs);
        let status = if res.is_zero() {
            RelationStatus::Zero
        } else {
            let (w, c) = res.terms().iter().next().unwrap();
            RelationStatus::Nonzero(format!("{} * L{} + ...", c.to_text(), w))
        };
        RelationCheck { n, m, status }
    });
    Ok(checks)
}

/// `L_{r−μ_1}···L_{r−μ_k} x`, rightmost operator applied first.
fn apply_word(w: &crate::virasoro::Partition, x: &ModuleVector) -> ModuleVector {
    let r = x.module().rank() as i64;
    let mut cur = x.clone();
    for &p in w.parts().iter().rev() {
        cur = cur.apply_l(r - p as i64);
    }
    cur
}

fn single_generator(p: &Poly) -> Option<usize> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next().unwrap();
    if *c != 1 {
        return None;
    }
    let nz: Vec<usize> = m.exps().iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i).collect();
    (nz.len() == 1 && m.exps()[nz[0]] == 1).then(|| nz[0])
}

impl RankRSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "rank_r",
            "r": self.r,
            "params": params_json(&self.params),
            "module": self.module.to_json(),
            "lambda": self.lambda.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "delta": self.delta.to_json(),
            "rho": self.rho.to_json(),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "c0": self.c0.iter().map(|c| c.as_ref().map_or(Value::Null, Poly::to_json)).collect::<Vec<_>>(),
            "v": self.v.iter().map(ModuleVector::terms_json).collect::<Vec<_>>(),
            "pending": self.pending.iter().map(Poly::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RankRSolution> {
        let params = params_from_json(v.get("params").ok_or_else(|| Error::Parse("solution needs `params`".into()))?)?;
        let module = IrregularModule::from_json(v.get("module").ok_or_else(|| Error::Parse("solution needs `module`".into()))?)?;
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("solution needs `{k}`")));
        let polys = |k: &str| -> Result<Vec<Poly>> {
            get(k)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("`{k}` must be an array")))?
                .iter()
                .map(|x| Poly::from_json(&params, x))
                .collect()
        };
        let c0 = get("c0")?
            .as_array()
            .ok_or_else(|| Error::Parse("`c0` must be an array".into()))?
            .iter()
            .map(|x| if x.is_null() { Ok(None) } else { Poly::from_json(&params, x).map(Some) })
            .collect::<Result<_>>()?;
        let vs = get("v")?
            .as_array()
            .ok_or_else(|| Error::Parse("`v` must be an array".into()))?
            .iter()
            .map(|x| ModuleVector::from_terms_json(&module, x))
            .collect::<Result<_>>()?;
        Ok(RankRSolution {
            r: get("r")?.as_u64().ok_or_else(|| Error::Parse("`r` must be an integer".into()))? as u32,
            params: params.clone(),
            module,
            lambda: polys("lambda")?,
            delta: Poly::from_json(&params, get("delta")?)?,
            rho: Poly::from_json(&params, get("rho")?)?,
            alpha: Poly::from_json(&params, get("alpha")?)?,
            beta: polys("beta")?,
            v: vs,
            c0,
            pending: polys("pending")?,
        })
    }
}
