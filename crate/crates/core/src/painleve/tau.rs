//! Fourier-type tau series at `t = ∞` built from ramified blocks.
//!
//! Every Fourier term has the shape `C_n exp(p_n log t + Σ_k e_k t^{k/2}) Σ_j d_j t^{j/2}`,
//! so `τ` and its derivatives are evaluated term by term in closed form.

use std::collections::HashMap;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::barnes::barnes_pm;
use super::sigma::{SigmaForm, TauJet};
use crate::blocks::{assemble_block, BlockSeries};
use crate::coeffring::Poly;
use crate::error::{Error, Result};
use crate::exec;
use crate::fixtures::{half_rank_input, three_halves_input, fixture_params, HALF_ALPHA, THREE_HALVES_ALPHA};
use crate::numeric::{digits_for, Complex};
use crate::ramified::solve_ramified;

/// P III: `τ(t) = t^{−θ_1θ_2} e^{−t/2} Σ_n s^n 2^{−(ν+n)²} G(1+ν+n±(θ_1+θ_2)/2)
/// ⟨(θ_1−θ_2)²/4| Φ^{(θ_1+θ_2)²/4, 4(ν+n)}(t^{−1}) |(1,0)⟩`.
#[derive(Clone, Debug)]
pub struct TauSpecP3 {
    pub theta1: Complex,
    pub theta2: Complex,
    pub nu: Complex,
    pub s: Complex,
    /// Fourier range `−N ≤ n ≤ N`.
    pub n_max: u32,
    /// Block half-order `M` (terms through `z^{M/2}`).
    pub order: u32,
    pub prec: u32,
    pub mode_factor: ModeFactor,
}

/// P II: `τ(t) = t^{−θ²/2} Σ_n s^n (2π)^{−ν−n} (4√2)^{−(ν+n)²} e^{πiν²/2} a^{−3(ν+n)²/2}
/// G(1+ν+n±θ/2) ⟨0| Φ^{θ²/4, 4(ν+n)/3}(a t^{−1}) |(0,1,0)⟩`.
#[derive(Clone, Debug)]
pub struct TauSpecP2 {
    pub theta: Complex,
    pub nu: Complex,
    pub s: Complex,
    /// Selects `a = exp(2/3 (Log(−√2 i) + 2πik))`, `k ∈ {0, 1, 2}`.
    pub branch_k: u32,
    pub n_max: u32,
    pub order: u32,
    pub prec: u32,
    pub mode_factor: ModeFactor,
}

/// Per-mode normalization. `Printed` uses the displayed formulas. `Adjusted`
/// replaces `2^{−(ν+n)²}` by `2^{−3(ν+n)²}` (P III) and `e^{πiν²/2}` by
/// `e^{πi(ν+n)²/2}` (P II); with these the σ-residual cancels at `O(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ModeFactor {
    #[default]
    Printed,
    Adjusted,
}

impl ModeFactor {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(ModeFactor::Printed),
            "adjusted" => Ok(ModeFactor::Adjusted),
            _ => Err(Error::Usage(format!("mode factor `{s}` is not `printed` or `adjusted`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModeFactor::Printed => "printed",
            ModeFactor::Adjusted => "adjusted",
        }
    }
}

#[derive(Clone, Debug)]
pub enum TauSpec {
    P3(TauSpecP3),
    P2(TauSpecP2),
}

impl TauSpec {
    pub fn prec(&self) -> u32 {
        match self {
            TauSpec::P3(s) => s.prec,
            TauSpec::P2(s) => s.prec,
        }
    }

    pub fn sigma_form(&self) -> SigmaForm {
        match self {
            TauSpec::P3(s) => SigmaForm::P3 { theta1: s.theta1.clone(), theta2: s.theta2.clone() },
            TauSpec::P2(s) => SigmaForm::P2 { theta: s.theta.clone() },
        }
    }
}

/// `a_k` with `a^{3/2} = −√(−2)`, `√(−2) = √2 i`.
pub fn p2_branch_constant(k: u32, prec: u32) -> Result<Complex> {
    if k > 2 {
        return Err(Error::Usage(format!("branch index {k} not in {{0, 1, 2}}")));
    }
    let w = Complex { re: Float::new(prec), im: -Float::with_val(prec, 2).sqrt() };
    let pi = Float::with_val(prec, Constant::Pi);
    let shift = Complex { re: Float::new(prec), im: pi * (2 * k) };
    Ok(w.ln().add(&shift).scale_rational(&Rational::from((2, 3))).exp())
}

/// Contribution of one Fourier mode `n` to the term table; `m` indexes the
/// block coefficient of `z^{m/2}`.
#[derive(Clone, Debug)]
pub struct TermRow {
    pub n: i64,
    pub m: u32,
    pub value: Complex,
    /// Mode `n` was below `10^{−digits−5}` of the largest mode and left out.
    pub dropped: bool,
}

#[derive(Clone, Debug)]
pub struct TauEval {
    pub jet: TauJet,
    pub terms: Vec<TermRow>,
}

/// One Fourier term: `constant · exp(log_power log t + Σ e t^{k/2}) · Σ d t^{k/2}`.
#[derive(Clone, Debug)]
struct Shape {
    n: i64,
    constant: Complex,
    log_power: Complex,
    exps: Vec<(i64, Complex)>,
    series: Vec<(u32, i64, Complex)>,
}

/// A prepared tau series: the symbolic block plus per-mode constants.
#[derive(Clone, Debug)]
pub struct TauSeries {
    pub spec: TauSpec,
    pub block: BlockSeries,
    shapes: Vec<Shape>,
}

const BLOCK_VARS: [&str; 4] = ["b", "c", "D", "P"];

/// Block of the half-rank (`p3 = true`) or rank-3/2 example with the preset
/// `c_∅` and the printed `α`, as a polynomial in `b, c, D, P` through `z^{order/2}`.
pub fn prepared_block(p3: bool, order: u32) -> Result<BlockSeries> {
    let ps = fixture_params();
    let input = if p3 { half_rank_input(&ps, order) } else { three_halves_input(&ps, order) };
    let sol = solve_ramified(&input)?;
    let sp = &sol.params;
    let block = assemble_block(&sol, &Poly::parse(sp, if p3 { "P" } else { "0" })?)?;
    let alpha = Poly::parse(sp, if p3 { HALF_ALPHA } else { THREE_HALVES_ALPHA })?;
    let block = match sp.index_of("alpha") {
        Some(i) => block.map(|p| p.substitute(i, &alpha))?,
        None => block,
    };
    for (m, c) in &block.coeffs {
        if let Some(v) = c.support_vars().into_iter().find(|&v| !BLOCK_VARS.contains(&sp.name(v))) {
            return Err(Error::InsufficientOrder(format!(
                "insufficient block order: the z^{{{m}/2}} coefficient depends on the unset `{}`; lower the block order",
                sp.name(v)
            )));
        }
    }
    Ok(block)
}

fn c_pow(base: &Complex, e: &Complex) -> Complex {
    if base.is_zero() {
        return Complex::zero(base.prec());
    }
    base.ln().mul(e).exp()
}

fn s_pow(s: &Complex, n: i64) -> Complex {
    if s.is_zero() {
        return if n == 0 { Complex::one(s.prec()) } else { Complex::zero(s.prec()) };
    }
    s.powi(n)
}

fn modes(n_max: u32, s: &Complex) -> Vec<i64> {
    if s.is_zero() {
        vec![0]
    } else {
        (-(n_max as i64)..=n_max as i64).collect()
    }
}

fn real(q: Rational, w: u32) -> Complex {
    Complex::from_rational(&q, w)
}

fn bindings(b: Complex, d: Complex, p: Complex, w: u32) -> HashMap<String, Complex> {
    HashMap::from([("b".to_string(), b), ("c".to_string(), Complex::one(w)), ("D".to_string(), d), ("P".to_string(), p)])
}

fn p3_shape(block: &BlockSeries, sp: &TauSpecP3, n: i64, w: u32) -> Result<Shape> {
    let nn = sp.nu.add(&Complex::from_i64(n, w));
    let sum = sp.theta1.add(&sp.theta2);
    let dif = sp.theta1.sub(&sp.theta2);
    let quarter = Rational::from((1, 4));
    let bind = bindings(nn.scale_rational(&Rational::from(4)), sum.mul(&sum).scale_rational(&quarter), dif.mul(&dif).scale_rational(&quarter), w);
    let alpha = block.alpha.eval(&bind, w)?;
    let two = Complex::from_i64(2, w);
    let constant = s_pow(&sp.s, n)
        .mul(&c_pow(&two, &nn.mul(&nn).scale_rational(&Rational::from(if sp.mode_factor == ModeFactor::Adjusted { -3 } else { -1 }))))
        .mul(&barnes_pm(&nn, &sum.scale_rational(&Rational::from((1, 2))), w)?);
    let log_power = sp.theta1.mul(&sp.theta2).neg().sub(&alpha);
    // z = 1/t: z^{−i/2} = t^{i/2}, z^{m/2} = t^{−m/2}
    let mut exps = vec![(2, real(Rational::from((-1, 2)), w))];
    for (i, beta) in &block.essential {
        exps.push((*i as i64, beta.eval(&bind, w)?));
    }
    let series = block.coeffs.iter().map(|(m, c)| Ok((*m, -(*m as i64), c.eval(&bind, w)?))).collect::<Result<_>>()?;
    Ok(Shape { n, constant, log_power, exps, series })
}

fn p2_shape(block: &BlockSeries, sp: &TauSpecP2, a: &Complex, n: i64, w: u32) -> Result<Shape> {
    let nn = sp.nu.add(&Complex::from_i64(n, w));
    let nn2 = nn.mul(&nn);
    let bind = bindings(
        nn.scale_rational(&Rational::from((4, 3))),
        sp.theta.mul(&sp.theta).scale_rational(&Rational::from((1, 4))),
        Complex::zero(w),
        w,
    );
    let alpha = block.alpha.eval(&bind, w)?;
    let pi = Complex::from_real(Float::with_val(w, Constant::Pi));
    let two_pi = pi.scale_rational(&Rational::from(2));
    let four_rt2 = Complex::from_real(Float::with_val(w, 2).sqrt() * 4u32);
    let phase_arg = if sp.mode_factor == ModeFactor::Adjusted { &nn } else { &sp.nu };
    let phase = Complex::i(w).mul(&pi).mul(&phase_arg.mul(phase_arg)).scale_rational(&Rational::from((1, 2))).exp();
    let la = a.ln();
    let a_pow = |e: &Complex| la.mul(e).exp();
    let constant = s_pow(&sp.s, n)
        .mul(&c_pow(&two_pi, &nn.neg()))
        .mul(&c_pow(&four_rt2, &nn2.neg()))
        .mul(&phase)
        .mul(&a_pow(&nn2.scale_rational(&Rational::from((-3, 2)))))
        .mul(&barnes_pm(&nn, &sp.theta.scale_rational(&Rational::from((1, 2))), w)?)
        .mul(&a_pow(&alpha));
    let log_power = sp.theta.mul(&sp.theta).scale_rational(&Rational::from((-1, 2))).sub(&alpha);
    // z = a/t with z^{γ} = a^{γ} t^{−γ}
    let mut exps = Vec::new();
    for (i, beta) in &block.essential {
        let f = a_pow(&real(Rational::from((-(*i as i64), 2)), w));
        exps.push((*i as i64, beta.eval(&bind, w)?.mul(&f)));
    }
    let mut series = Vec::new();
    for (m, c) in &block.coeffs {
        let f = a_pow(&real(Rational::from((*m as i64, 2)), w));
        series.push((*m, -(*m as i64), c.eval(&bind, w)?.mul(&f)));
    }
    Ok(Shape { n, constant, log_power, exps, series })
}

const WORK_GUARD: u32 = 32;

/// Prepares the block and the per-mode constants of a tau series.
pub fn tau_series(spec: &TauSpec) -> Result<TauSeries> {
    let w = spec.prec() + WORK_GUARD;
    let (block, ns) = match spec {
        TauSpec::P3(s) => (prepared_block(true, s.order)?, modes(s.n_max, &s.s)),
        TauSpec::P2(s) => (prepared_block(false, s.order)?, modes(s.n_max, &s.s)),
    };
    let shapes = match spec {
        TauSpec::P3(s) => exec::map(&ns, |&n| p3_shape(&block, s, n, w)),
        TauSpec::P2(s) => {
            let a = p2_branch_constant(s.branch_k, w)?;
            exec::map(&ns, |&n| p2_shape(&block, s, &a, n, w))
        }
    }
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(TauSeries { spec: spec.clone(), block, shapes })
}

type Jet = [Complex; 4];

fn jet_zero(w: u32) -> Jet {
    [Complex::zero(w), Complex::zero(w), Complex::zero(w), Complex::zero(w)]
}

fn jet_add(a: &mut Jet, b: &Jet) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.add(y);
    }
}

fn jet_scale(a: &Jet, k: &Complex) -> Jet {
    [a[0].mul(k), a[1].mul(k), a[2].mul(k), a[3].mul(k)]
}

/// `t^g` and its three derivatives.
fn pow_jet(lt: &Complex, tinv: &Complex, g: Rational) -> Jet {
    let v = lt.scale_rational(&g).exp();
    let g1 = g.clone() - 1u32;
    let g2 = g.clone() - 2u32;
    let c1 = g.clone();
    let c2 = Rational::from(&c1 * &g1);
    let c3 = Rational::from(&c2 * &g2);
    let t1 = tinv.clone();
    let t2 = t1.mul(&t1);
    let t3 = t2.mul(&t1);
    [v.clone(), v.mul(&t1).scale_rational(&c1), v.mul(&t2).scale_rational(&c2), v.mul(&t3).scale_rational(&c3)]
}

fn half(k: i64) -> Rational {
    Rational::from((k, 2))
}

struct ShapeEval {
    n: i64,
    jet: Jet,
    rows: Vec<(u32, Complex)>,
}

fn eval_shape(sh: &Shape, t: &Complex, w: u32) -> ShapeEval {
    let lt = t.ln();
    let tinv = t.recip();
    // exponent L and its derivatives
    let mut l = [lt.mul(&sh.log_power), tinv.mul(&sh.log_power), tinv.mul(&tinv).neg().mul(&sh.log_power), tinv.powi(3).scale_rational(&Rational::from(2)).mul(&sh.log_power)];
    for (k, e) in &sh.exps {
        jet_add(&mut l, &jet_scale(&pow_jet(&lt, &tinv, half(*k)), e));
    }
    let g0 = l[0].exp().mul(&sh.constant);
    let l1sq = l[1].mul(&l[1]);
    let g = [
        g0.clone(),
        l[1].mul(&g0),
        l[2].add(&l1sq).mul(&g0),
        l[3].add(&l[1].mul(&l[2]).scale_rational(&Rational::from(3))).add(&l1sq.mul(&l[1])).mul(&g0),
    ];
    let mut s = jet_zero(w);
    let mut rows = Vec::new();
    for (m, k, d) in &sh.series {
        let pj = jet_scale(&pow_jet(&lt, &tinv, half(*k)), d);
        rows.push((*m, g0.mul(&pj[0])));
        jet_add(&mut s, &pj);
    }
    let three = Rational::from(3);
    let two = Rational::from(2);
    let jet = [
        g[0].mul(&s[0]),
        g[1].mul(&s[0]).add(&g[0].mul(&s[1])),
        g[2].mul(&s[0]).add(&g[1].mul(&s[1]).scale_rational(&two)).add(&g[0].mul(&s[2])),
        g[3].mul(&s[0])
            .add(&g[2].mul(&s[1]).scale_rational(&three))
            .add(&g[1].mul(&s[2]).scale_rational(&three))
            .add(&g[0].mul(&s[3])),
    ];
    ShapeEval { n: sh.n, jet, rows }
}

fn requant(z: &Complex, prec: u32) -> Complex {
    Complex { re: Float::with_val(prec, &z.re), im: Float::with_val(prec, &z.im) }
}

impl TauSeries {
    /// `τ(t)`, `τ′`, `τ″`, `τ‴` and the per-(n, m) term table. Modes are summed
    /// in ascending `n`.
    pub fn eval(&self, t: &Complex) -> Result<TauEval> {
        if t.is_zero() {
            return Err(Error::Usage("the tau series is an expansion at t = ∞; t = 0 is not allowed".into()));
        }
        let prec = self.spec.prec();
        let w = prec + WORK_GUARD;
        let t = requant(t, w);
        let evals = exec::map(&self.shapes, |sh| eval_shape(sh, &t, w));
        let biggest = evals.iter().map(|e| e.jet[0].abs()).fold(Float::new(w), |a, b| a.max(&b));
        let cut = Float::with_val(w, Float::with_val(w, 10).pow(-(digits_for(prec) as i32) - 5)) * &biggest;
        let mut total = jet_zero(w);
        let mut terms = Vec::new();
        for e in &evals {
            let dropped = e.jet[0].abs() < cut;
            if !dropped {
                jet_add(&mut total, &e.jet);
            }
            terms.extend(e.rows.iter().map(|(m, v)| TermRow { n: e.n, m: *m, value: requant(v, prec), dropped }));
        }
        let q = |z: &Complex| requant(z, prec);
        Ok(TauEval { jet: TauJet { t: q(&t), tau: q(&total[0]), d1: q(&total[1]), d2: q(&total[2]), d3: q(&total[3]) }, terms })
    }

    pub fn sigma_form(&self) -> SigmaForm {
        self.spec.sigma_form()
    }
}
