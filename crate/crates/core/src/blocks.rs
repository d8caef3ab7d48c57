//! Ramified irregular conformal blocks `⟨Δ'|Φ(z)|Λ⟩` as series in `z^{1/2}`.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::coeffring::{Params, Poly};
use crate::error::{Error, Result};
use crate::numeric::Complex;
use crate::ramified::RamifiedSolution;
use crate::virasoro::{pair_left, params_from_json, params_json};

/// `z^α exp(Σ β_i z^{−i/2}) Σ_{m ≤ M} a_m z^{m/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSeries {
    pub params: Params,
    pub alpha: Poly,
    /// Nonzero `(i, β_i)`.
    pub essential: Vec<(u32, Poly)>,
    pub coeffs: BTreeMap<u32, Poly>,
    pub order: u32,
}

/// `a_m = ⟨Δ'| v_m` with the prefactor copied from the solution.
pub fn assemble_block(sol: &RamifiedSolution, delta_prime: &Poly) -> Result<BlockSeries> {
    let dp = delta_prime.embed(&sol.params)?;
    let mut coeffs = BTreeMap::new();
    for (m, v) in sol.v.iter().enumerate() {
        coeffs.insert(m as u32, pair_left(&dp, v)?);
    }
    let essential = sol
        .beta
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(i, b)| (i as u32 + 1, b.clone()))
        .collect();
    Ok(BlockSeries { params: sol.params.clone(), alpha: sol.alpha.clone(), essential, coeffs, order: sol.v.len() as u32 - 1 })
}

impl BlockSeries {
    pub fn coeff(&self, m: u32) -> Poly {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| Poly::zero(&self.params))
    }

    /// Same series with every coefficient specialized by `f`.
    pub fn map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<BlockSeries> {
        Ok(BlockSeries {
            params: self.params.clone(),
            alpha: f(&self.alpha)?,
            essential: self.essential.iter().map(|(i, b)| Ok((*i, f(b)?))).collect::<Result<_>>()?,
            coeffs: self.coeffs.iter().map(|(m, c)| Ok((*m, f(c)?))).collect::<Result<_>>()?,
            order: self.order,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (m, c) in &self.coeffs {
            coeffs.insert(m.to_string(), c.to_json());
        }
        json!({
            "params": params_json(&self.params),
            "alpha": self.alpha.to_json(),
            "essential": self.essential.iter().map(|(i, b)| json!([i, b.to_json()])).collect::<Vec<_>>(),
            "coeffs": coeffs,
            "order": self.order,
        })
    }

    pub fn from_json(v: &Value) -> Result<BlockSeries> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("block needs `{k}`")));
        let params = params_from_json(get("params")?)?;
        let essential = get("essential")?
            .as_array()
            .ok_or_else(|| Error::Parse("`essential` must be an array".into()))?
            .iter()
            .map(|e| {
                let i = e.get(0).and_then(Value::as_u64).ok_or_else(|| Error::Parse("essential entries are [i, coeff]".into()))?;
                Ok((i as u32, Poly::from_json(&params, e.get(1).unwrap_or(&Value::Null))?))
            })
            .collect::<Result<_>>()?;
        let coeffs = get("coeffs")?
            .as_object()
            .ok_or_else(|| Error::Parse("`coeffs` must be an object".into()))?
            .iter()
            .map(|(k, c)| {
                let m = k.parse::<u32>().map_err(|_| Error::Parse(format!("bad coefficient index `{k}`")))?;
                Ok((m, Poly::from_json(&params, c)?))
            })
            .collect::<Result<_>>()?;
        Ok(BlockSeries {
            alpha: Poly::from_json(&params, get("alpha")?)?,
            essential,
            coeffs,
            order: get("order")?.as_u64().ok_or_else(|| Error::Parse("`order` must be an integer".into()))? as u32,
            params,
        })
    }
}

/// `z^α exp(Σ β_i z^{−i/2}) Σ a_m z^{m/2}` with the principal branch of
/// `log z` (cut on the negative real axis) for both `z^α` and `z^{1/2}`.
pub fn eval_block(b: &BlockSeries, bindings: &HashMap<String, Complex>, z: &Complex, prec: u32) -> Result<Complex> {
    if z.is_zero() {
        return Err(Error::Usage("cannot evaluate a block at z = 0".into()));
    }
    let half = z.sqrt();
    let inv_half = half.recip();
    let alpha = b.alpha.eval(bindings, prec)?;
    let mut ess = Complex::zero(prec);
    for (i, beta) in &b.essential {
        ess = ess.add(&beta.eval(bindings, prec)?.mul(&inv_half.powi(*i as i64)));
    }
    let mut sum = Complex::zero(prec);
    for (m, c) in &b.coeffs {
        sum = sum.add(&c.eval(bindings, prec)?.mul(&half.powi(*m as i64)));
    }
    Ok(z.powc(&alpha).mul(&ess.exp()).mul(&sum))
}
