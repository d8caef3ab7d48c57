use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coeffring::{solve_unique, Poly};
use crate::error::{Error, Result};
use crate::exec;
use crate::virasoro::{IrregularModule, ModuleVector, Partition};

/// Memoized values of `⟨∅| L̃_{ν_1+o}···L̃_{ν_k+o} w` on basis words `w`,
/// with `L̃_n = L_n − Λ_n`.
pub struct Projector {
    module: Arc<IrregularModule>,
    offset: i64,
    cache: RwLock<HashMap<(Partition, Partition), Poly>>,
}

impl Projector {
    pub fn new(module: &Arc<IrregularModule>, offset: i64) -> Self {
        Projector { module: module.clone(), offset, cache: RwLock::new(HashMap::new()) }
    }

    pub fn module(&self) -> &Arc<IrregularModule> {
        &self.module
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn word(&self, nu: &Partition, w: &Partition) -> Poly {
        let ps = self.module.params();
        if nu.is_empty() {
            return if w.is_empty() { Poly::one(ps) } else { Poly::zero(ps) };
        }
        if w.is_empty() {
            return Poly::zero(ps);
        }
        let key = (nu.clone(), w.clone());
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let n = nu.last().unwrap() as i64 + self.offset;
        let img = ModuleVector::basis(&self.module, w.clone()).apply_shifted(n);
        let val = self.vector(&nu.without_last(), &img);
        self.cache.write().unwrap().insert(key, val.clone());
        val
    }

    pub fn vector(&self, nu: &Partition, v: &ModuleVector) -> Poly {
        let mut acc = Poly::zero(self.module.params());
        for (w, c) in v.terms() {
            let p = self.word(nu, w);
            if !p.is_zero() {
                acc.add_scaled(c, &p);
            }
        }
        acc
    }
}

/// Determines the non-vacuum coefficients of `v` (supported on `1 ≤ |μ| ≤ bound`)
/// from the projections `⟨∅|L̃_ν v = ⟨∅|L̃_{ν'} F(ν_k + o)`, where `F(n)` is the
/// known right-hand side of `L̃_n v` and `ν'` drops the smallest part.
///
/// Levels are processed from the top down; within a level the system is solved
/// exactly, which reduces to division by the diagonal when it is triangular.
pub fn solve_vector(
    proj: &Projector,
    bound: u32,
    rhs: &HashMap<i64, ModuleVector>,
    vacuum: Poly,
) -> Result<ModuleVector> {
    let module = proj.module().clone();
    let mut v = ModuleVector::from_terms(&module, vec![(Partition::empty(), vacuum)]);
    for level in (1..=bound).rev() {
        let parts = Partition::all_of(level);
        let vals: Vec<Result<Poly>> = exec::map(&parts, &|nu: &Partition| {
            let n = nu.last().unwrap() as i64 + proj.offset();
            let f = rhs.get(&n).ok_or_else(|| Error::InsufficientOrder(format!("right-hand side for L_{n} missing")))?;
            // known higher-level part of v
            let known = proj.vector(nu, &v);
            Ok(&proj.vector(&nu.without_last(), f) - &known)
        });
        let b: Vec<Poly> = vals.into_iter().collect::<Result<_>>()?;
        let rows: Vec<Vec<Poly>> = exec::map(&parts, &|nu: &Partition| parts.iter().map(|mu| proj.word(nu, mu)).collect());
        let x = solve_level(&rows, &b)?;
        let mut next = v.clone();
        for (mu, c) in parts.into_iter().zip(x) {
            next.add_scaled(&ModuleVector::basis(&module, mu), &c);
        }
        v = next;
    }
    Ok(v)
}

fn solve_level(rows: &[Vec<Poly>], b: &[Poly]) -> Result<Vec<Poly>> {
    let n = rows.len();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || rows[i][j].is_zero()));
    if diagonal {
        return (0..n)
            .map(|i| {
                if rows[i][i].is_zero() {
                    Err(Error::Triangularity(format!("vanishing diagonal entry {i}")))
                } else {
                    b[i].div_exact(&rows[i][i])
                }
            })
            .collect();
    }
    solve_unique(rows, b).map_err(|e| match e {
        Error::Degenerate(s) => Error::Triangularity(s),
        other => other,
    })
}
