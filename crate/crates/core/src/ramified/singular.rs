use std::collections::BTreeMap;

use super::{solve_ramified, C0Mode, FieldEngine, Grid, RamifiedInput, RamifiedSolution};
use crate::coeffring::univariate::{dense_in, gcd, rational_roots};
use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};
use crate::solve::Unknowns;
use crate::virasoro::{central_charge_t, kac_weight, singular_vector, ModuleVector, Partition};

#[derive(Clone, Debug)]
pub struct SingularSolution {
    pub alpha: Poly,
    /// `β_1..β_{2r−1}`.
    pub beta: Vec<Poly>,
    /// `c_∅^{(m)}`, `None` where the imposed orders leave it free.
    pub c0: Vec<Option<Poly>>,
    /// Root multiplicity at the last branching step that produced this set.
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct SingularReport {
    pub p: u32,
    pub q: u32,
    pub params: Params,
    /// Highest half-index of `Φ(χ_{p,q}, z)|Λ⟩` imposed to vanish.
    pub valid: i64,
    pub equations: usize,
    pub solutions: Vec<SingularSolution>,
    /// Branches that could not be completed (irrational roots, positive
    /// dimension), described in words.
    pub unresolved: Vec<String>,
}

impl SingularReport {
    pub fn count(&self) -> u32 {
        self.solutions.iter().map(|s| s.multiplicity).sum()
    }

    pub fn expected(&self) -> u32 {
        self.p * self.q
    }
}

/// `Φ(χ, z)|Λ⟩` by linearity over the words of `χ`.
pub fn field_of_vector(sol: &RamifiedSolution, chi: &ModuleVector) -> Result<(BTreeMap<i64, ModuleVector>, i64)> {
    let eng = FieldEngine::new(sol);
    let mut total: BTreeMap<i64, ModuleVector> = BTreeMap::new();
    let mut valid = i64::MAX;
    for (w, c) in chi.terms() {
        let s = eng.field(w.parts(), &Partition::empty());
        valid = valid.min(s.valid);
        let c = c.embed(&sol.params)?;
        for (m, v) in s.terms {
            total.entry(m).or_insert_with(|| ModuleVector::zero(&sol.module)).add_scaled(&v, &c);
        }
    }
    total.retain(|&m, v| m <= valid && !v.is_zero());
    Ok((total, valid))
}

struct Branches<'a> {
    sol: &'a RamifiedSolution,
    core: Vec<usize>,
    found: Vec<(Unknowns, u32)>,
    unresolved: Vec<String>,
}

impl Branches<'_> {
    fn run(&mut self, mut u: Unknowns, mult: u32) {
        let inconsistent = |_: &Poly| Error::Degenerate(String::new());
        if u.absorb(Vec::new(), &inconsistent).is_err() {
            return;
        }
        let open: Vec<usize> = u.open().to_vec();
        let uni: Vec<(usize, Vec<rug::Rational>)> = u
            .pending()
            .iter()
            .filter_map(|e| {
                let vars: Vec<usize> = open.iter().copied().filter(|&i| e.contains_var(i)).collect();
                (vars.len() == 1).then(|| dense_in(e, vars[0]).map(|d| (vars[0], d))).flatten()
            })
            .collect();
        let Some(&(var, _)) = uni.first() else {
            if self.core.iter().any(|i| open.contains(i)) {
                let names: Vec<&str> = self.core.iter().filter(|i| open.contains(i)).map(|&i| self.sol.params.name(i)).collect();
                self.unresolved.push(format!("{} left undetermined by {} remaining equations", names.join(", "), u.pending().len()));
            } else {
                self.found.push((u, mult));
            }
            return;
        };
        let g = uni.iter().filter(|(v, _)| *v == var).fold(Vec::new(), |acc, (_, d)| if acc.is_empty() { d.clone() } else { gcd(&acc, d) });
        let (roots, rest) = match rational_roots(&g) {
            Ok(x) => x,
            Err(e) => {
                self.unresolved.push(e.to_string());
                return;
            }
        };
        if rest > 0 {
            self.unresolved.push(format!("{rest} non-rational roots in {}", self.sol.params.name(var)));
        }
        for (x, m) in roots {
            let mut b = u.clone();
            if b.assign(var, Poly::constant(&self.sol.params, x)).is_ok() {
                self.run(b, m);
            }
        }
    }
}

/// Imposes `Φ(χ_{p,q}, z)|Λ⟩ = 0` through the orders available from
/// `template.order` at `Δ = Δ_{p,q}`, `c = 13 − 6(t + 1/t)`, with `α`, the
/// `β_i` marked for solving and every `c_∅^{(m)}` unknown.
pub fn singular_condition_solve(p: u32, q: u32, t: &Poly, template: &RamifiedInput) -> Result<SingularReport> {
    if template.grid != Grid::Half {
        return Err(Error::Usage("singular conditions are defined on the half grid".into()));
    }
    let chi = singular_vector(p, q, t)?;
    let user = template.lambda[0].params().clone();
    let mut inp = template.clone();
    inp.delta = kac_weight(p, q, t)?.embed(&user)?;
    inp.c = central_charge_t(t)?.embed(&user)?;
    inp.alpha = None;
    inp.c0 = C0Mode::Symbolic;
    let sol = solve_ramified(&inp)?;
    let (series, valid) = field_of_vector(&sol, &chi)?;
    let mut eqs: Vec<Poly> = sol.pending.clone();
    for v in series.values() {
        eqs.extend(v.terms().values().cloned());
    }
    let names: Vec<String> = sol
        .params
        .names()
        .iter()
        .filter(|n| !user.contains(n) && sol.params.index_of(n).map_or(false, |i| {
            eqs.iter().any(|e| e.contains_var(i)) || sol.alpha.contains_var(i) || sol.beta.iter().any(|b| b.contains_var(i))
        }))
        .cloned()
        .collect();
    let core: Vec<usize> = names.iter().filter(|n| !n.starts_with("c0_")).map(|n| sol.params.index_of(n).unwrap()).collect();
    let mut unknowns = Unknowns::new(&sol.params, &names)?;
    unknowns.allow_generic(!t.support_vars().is_empty());
    let neq = eqs.len();
    let inconsistent = |_: &Poly| Error::Degenerate(String::new());
    let mut br = Branches { sol: &sol, core, found: Vec::new(), unresolved: Vec::new() };
    if unknowns.absorb(eqs, &inconsistent).is_ok() {
        br.run(unknowns, 1);
    }
    let mut solutions = Vec::new();
    for (u, mult) in &br.found {
        let c0 = (1..=inp.order)
            .map(|m| match sol.params.index_of(&format!("c0_{m}")) {
                Some(i) => u.reduce(&Poly::var_index(&sol.params, i)).ok().filter(|v| !v.contains_var(i)),
                None => None,
            })
            .collect();
        solutions.push(SingularSolution {
            alpha: u.reduce(&sol.alpha)?,
            beta: sol.beta.iter().map(|b| u.reduce(b)).collect::<Result<_>>()?,
            c0,
            multiplicity: *mult,
        });
    }
    if solutions.is_empty() && !br.unresolved.is_empty() {
        return Err(Error::InsufficientOrder(format!(
            "singular conditions for (p,q)=({p},{q}) through z^{{{valid}/2}} are not zero-dimensional: {}",
            br.unresolved.join("; ")
        )));
    }
    Ok(SingularReport { p, q, params: sol.params.clone(), valid, equations: neq, solutions, unresolved: br.unresolved })
}
