//! Shared machinery for determining vertex-operator coefficients: projection
//! tables and bookkeeping for scalar unknowns.

mod projector;

pub use projector::{solve_vector, Projector};

use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};

/// Scalar unknowns represented as generators of the working parameter set.
///
/// Equations are absorbed one at a time: an equation linear in some unknown
/// with a coefficient that is a unit free of unknowns fixes that unknown.
/// Equations not yet usable are kept and retried after later substitutions.
#[derive(Clone)]
pub struct Unknowns {
    params: Params,
    open: Vec<usize>,
    solved: Vec<(usize, Poly)>,
    pending: Vec<Poly>,
    generic: bool,
    divisors: Vec<Poly>,
}

impl Unknowns {
    pub fn new(params: &Params, names: &[String]) -> Result<Self> {
        let open = names
            .iter()
            .map(|n| params.index_of(n).ok_or_else(|| Error::Usage(format!("unknown `{n}` missing from parameter set"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Unknowns { params: params.clone(), open, solved: Vec::new(), pending: Vec::new(), generic: false, divisors: Vec::new() })
    }

    /// Also accept non-unit coefficients when the division is exact, assuming
    /// they do not vanish. Such divisors are recorded.
    pub fn allow_generic(&mut self, on: bool) {
        self.generic = on;
    }

    /// Non-unit coefficients divided by under [`Unknowns::allow_generic`].
    pub fn divisors(&self) -> &[Poly] {
        &self.divisors
    }

    pub fn is_open(&self, i: usize) -> bool {
        self.open.contains(&i)
    }

    pub fn open(&self) -> &[usize] {
        &self.open
    }

    pub fn solved(&self) -> &[(usize, Poly)] {
        &self.solved
    }

    pub fn pending(&self) -> &[Poly] {
        &self.pending
    }

    pub fn value(&self, i: usize) -> Option<&Poly> {
        self.solved.iter().find(|(j, _)| *j == i).map(|(_, p)| p)
    }

    /// Marks an unknown as fixed externally (for example by a preset).
    pub fn fix(&mut self, i: usize, value: Poly) -> Result<()> {
        self.open.retain(|&j| j != i);
        for (_, p) in self.solved.iter_mut() {
            *p = p.substitute(i, &value)?;
        }
        self.solved.push((i, value));
        Ok(())
    }

    /// Fixes an open unknown and substitutes it into pending equations.
    pub fn assign(&mut self, i: usize, value: Poly) -> Result<()> {
        self.fix(i, value.clone())?;
        let mut next = Vec::with_capacity(self.pending.len());
        for e in self.pending.drain(..) {
            let e = e.substitute(i, &value)?;
            if !e.is_zero() {
                next.push(e);
            }
        }
        self.pending = next;
        Ok(())
    }

    /// Applies every solved value to `p`.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        let mut out = p.clone();
        for (i, v) in &self.solved {
            if out.contains_var(*i) {
                out = out.substitute(*i, v)?;
            }
        }
        Ok(out)
    }

    fn mentions_open(&self, p: &Poly) -> bool {
        self.open.iter().any(|&i| p.contains_var(i))
    }

    /// Adds equations `e = 0` and solves whatever becomes determined. Returns
    /// the unknowns fixed during this call. Equations free of unknowns that do
    /// not vanish are reported with `context`.
    pub fn absorb(&mut self, eqs: Vec<Poly>, context: &dyn Fn(&Poly) -> Error) -> Result<Vec<(usize, Poly)>> {
        for e in eqs {
            let e = self.reduce(&e)?;
            if !e.is_zero() {
                self.pending.push(e);
            }
        }
        let mut fixed = Vec::new();
        loop {
            if let Some(bad) = self.pending.iter().find(|e| !self.mentions_open(e)) {
                return Err(context(bad));
            }
            let Some((u, value, div)) = self.pick(false).or_else(|| if self.generic { self.pick(true) } else { None }) else {
                break;
            };
            if let Some(d) = div {
                if !self.divisors.contains(&d) {
                    self.divisors.push(d);
                }
            }
            self.open.retain(|&j| j != u);
            for (_, p) in self.solved.iter_mut() {
                if p.contains_var(u) {
                    *p = p.substitute(u, &value)?;
                }
            }
            let mut next = Vec::with_capacity(self.pending.len());
            for e in self.pending.drain(..) {
                let e = e.substitute(u, &value)?;
                if !e.is_zero() {
                    next.push(e);
                }
            }
            self.pending = next;
            self.solved.push((u, value.clone()));
            fixed.push((u, value));
        }
        Ok(fixed)
    }

    /// Chooses an equation with the fewest open unknowns that is linear in one
    /// of them with a coefficient free of unknowns (a unit unless `generic`).
    fn pick(&self, generic: bool) -> Option<(usize, Poly, Option<Poly>)> {
        let mut best: Option<(usize, usize, Poly, Option<Poly>)> = None;
        for e in &self.pending {
            let vars: Vec<usize> = self.open.iter().copied().filter(|&i| e.contains_var(i)).collect();
            if best.as_ref().map_or(false, |(k, _, _, _)| *k <= vars.len()) {
                continue;
            }
            for &u in &vars {
                if e.degree_in(u) != 1 || e.min_degree_in(u) < 0 {
                    continue;
                }
                let a = e.coefficient_of(u, 1);
                if self.mentions_open(&a) || a.is_zero() || (a.is_unit() == generic) {
                    continue;
                }
                let b = e.coefficient_of(u, 0);
                let Ok(val) = (-&b).div_exact(&a) else { continue };
                best = Some((vars.len(), u, val, generic.then_some(a)));
                break;
            }
        }
        best.map(|(_, u, v, d)| (u, v, d))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }
}
