//! Virasoro action on irregular Verma modules, singular vectors and the
//! left pairing with a highest-weight covector.

mod module;
mod partition;

use std::sync::Arc;

use rug::Rational;

pub use module::{IrregularModule, ModuleVector};
pub use module::{params_from_json, params_json};
pub use partition::Partition;

use crate::coeffring::{solve_unique, Poly};
use crate::error::{Error, Result};

/// Largest level accepted by [`singular_vector`].
pub const MAX_SINGULAR_LEVEL: u32 = 6;

/// `c = 13 − 6(t + 1/t)`.
pub fn central_charge_t(t: &Poly) -> Result<Poly> {
    let inv = t.unit_inverse()?;
    Ok(&Poly::from_i64(t.params(), 13) - &(t + &inv).scale_i64(6))
}

/// `Δ_{p,q} = ((pt − q)² − (t − 1)²) / (4t)`.
pub fn kac_weight(p: u32, q: u32, t: &Poly) -> Result<Poly> {
    let ps = t.params();
    let a = &t.scale_i64(p as i64) - &Poly::from_i64(ps, q as i64);
    let b = t - &Poly::one(ps);
    (&a.pow(2) - &b.pow(2)).div_exact(&t.scale_i64(4))
}

/// Level-`pq` singular vector `χ_{p,q}` in the Verma module of weight
/// `Δ_{p,q}` at `c = 13 − 6(t + 1/t)`, normalized so the coefficient of
/// `L_{-1}^{pq}` is one.
pub fn singular_vector(p: u32, q: u32, t: &Poly) -> Result<ModuleVector> {
    singular_vector_bounded(p, q, t, MAX_SINGULAR_LEVEL)
}

pub fn singular_vector_bounded(p: u32, q: u32, t: &Poly, max_level: u32) -> Result<ModuleVector> {
    if p == 0 || q == 0 {
        return Err(Error::Usage("p and q must be positive".into()));
    }
    let level = p * q;
    if level > max_level {
        return Err(Error::Usage(format!("level {level} exceeds the configured maximum {max_level}")));
    }
    let module = IrregularModule::verma(kac_weight(p, q, t)?, central_charge_t(t)?)?;
    let ps = t.params().clone();
    let top = Partition::new(vec![1; level as usize]).unwrap();
    let unknowns: Vec<Partition> = Partition::all_of(level).into_iter().filter(|w| *w != top).collect();
    let images = |w: &Partition, n: i64| ModuleVector::basis(&module, w.clone()).apply_l(n);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for n in [1i64, 2] {
        if (n as u32) > level {
            continue;
        }
        let imgs: Vec<ModuleVector> = unknowns.iter().map(|w| images(w, n)).collect();
        let top_img = images(&top, n);
        for target in Partition::all_of(level - n as u32) {
            rows.push(imgs.iter().map(|v| v.coeff(&target)).collect::<Vec<_>>());
            rhs.push(-&top_img.coeff(&target));
        }
    }
    let x = if unknowns.is_empty() {
        // level one: L_1 L_{-1}|Δ⟩ = 2Δ|Δ⟩ must vanish
        let chk = images(&top, 1);
        if !chk.is_zero() {
            return Err(Error::Degenerate("L_{-1}|Δ⟩ is not singular".into()));
        }
        Vec::new()
    } else {
        solve_unique(&rows, &rhs)?
    };
    let mut terms = vec![(top, Poly::one(&ps))];
    terms.extend(unknowns.into_iter().zip(x));
    Ok(ModuleVector::from_terms(&module, terms))
}

/// `⟨Δ'| v`: absorbs the leftmost operator of each word using
/// `⟨Δ'|L_n = 0` (n ≤ −1), `⟨Δ'|L_0 = Δ'⟨Δ'|`, and for `Δ' = 0` also
/// `⟨0|L_1 = 0`; other positive modes are rejected.
pub fn pair_left(delta_prime: &Poly, v: &ModuleVector) -> Result<Poly> {
    let module = v.module();
    let r = module.rank() as i64;
    let ps = module.params();
    let dp = delta_prime.embed(ps)?;
    let mut acc = Poly::zero(ps);
    for (w, c) in v.terms() {
        let mut factor = Poly::one(ps);
        let mut dead = false;
        for &part in w.parts() {
            let mode = r - part as i64;
            if mode <= -1 {
                dead = true;
                break;
            }
            if mode == 0 {
                factor = &factor * &dp;
                continue;
            }
            if !dp.is_zero() {
                return Err(Error::PairingUndefined(format!("⟨Δ'|L_{mode} with Δ' ≠ 0")));
            }
            if mode == 1 {
                dead = true;
                break;
            }
            return Err(Error::PairingUndefined(format!("⟨0|L_{mode} exposed by word {w}")));
        }
        if !dead {
            acc.add_scaled(c, &factor);
        }
    }
    Ok(acc)
}

/// Coefficient of `|Λ⟩` in `(L_{ν_1+o} − Λ_{ν_1+o})···(L_{ν_k+o} − Λ_{ν_k+o}) v`,
/// rightmost factor applied first.
pub fn project_shifted(nu: &Partition, offset: i64, v: &ModuleVector) -> Poly {
    let mut cur = v.clone();
    for &part in nu.parts().iter().rev() {
        cur = cur.apply_shifted(part as i64 + offset);
        if cur.is_zero() {
            break;
        }
    }
    cur.vacuum_coeff()
}

/// Diagonal pairing value `(2Λ_{2r})^{ℓ(ν)} Π ν_i` as stated for the
/// triangular pairing property.
pub fn triangular_diagonal_printed(module: &Arc<IrregularModule>, nu: &Partition) -> Poly {
    let two_l = module.weight(2 * module.rank() as i64).scale_i64(2);
    let prod: u64 = nu.parts().iter().map(|&p| p as u64).product();
    two_l.pow(nu.len() as u32).scale(&Rational::from(prod))
}

/// Diagonal pairing value including part multiplicities:
/// `(2Λ_{2r})^{ℓ(ν)} Π ν_i Π m_j!`.
pub fn triangular_diagonal(module: &Arc<IrregularModule>, nu: &Partition) -> Poly {
    let mult: u64 = nu.multiplicities().iter().map(|&(_, k)| (1..=k as u64).product::<u64>()).product();
    triangular_diagonal_printed(module, nu).scale(&Rational::from(mult))
}
