//! Printed examples transcribed as exact expressions, with runners that
//! recompute them. Parameters: `b` (= β), `c`, `D` (= Δ), `P` (= Δ').

use std::time::Instant;

use crate::blocks::assemble_block;
use crate::coeffring::{ParamSet, Params, Poly};
use crate::error::{Error, Result};
use crate::ramified::{singular_condition_solve, solve_ramified, BetaSpec, C0Mode, Preset, RamifiedInput, RamifiedSolution};
use crate::rank_r::{lambda_from_input, solve_vm, RankRInput};
use crate::virasoro::{kac_weight, ModuleVector, Partition};

pub const HALF_ALPHA: &str = "b^2/32 - 3D/2";
pub const THREE_HALVES_ALPHA: &str = "27 b^2/32 - 5D/2";

/// `(m, [(modes, coefficient)])`; modes read left to right, `[]` is the constant.
type VectorTable = &'static [(usize, &'static [(&'static [i64], &'static str)])];

pub const HALF_V: VectorTable = &[
    (1, &[(&[], "b^3/256 + b (c - 4D + 1)/64"), (&[0], "-b/2")]),
    (
        2,
        &[
            (&[], "b^6/131072 + b^4 (c - 4D + 6)/16384 + b^2 (3c^2 - 24c D + 74c + 48D^2 - 168D + 103)/24576 + D (D - c - 2)/64"),
            (&[0], "-b^4/512 - b^2 (c - 4D + 13)/128 + D/2"),
            (&[0, 0], "b^2/8"),
        ],
    ),
    (
        3,
        &[
            (
                &[],
                "b^9/100663296 + b^7 (c - 4D + 11)/8388608 + b^5 (3c^2 - 24c D + 104c + 48D^2 - 288D + 397)/6291456 \
                 + b^3 (3c^3 - 36c^2 D + 213c^2 + 144c D^2 - 1608c D + 3793c - 192D^3 + 2160D^2 - 6660D + 5951)/4718592 \
                 - b (6c^2 D + 7c^2 - 30c D^2 + 178c D - 6c + 24D^3 - 158D^2 + 340D - 37)/24576",
            ),
            (
                &[0],
                "-b^7/262144 - b^5 (c - 4D + 18)/32768 - b^3 (3c^2 - 24c D + 146c + 48D^2 - 552D + 1359)/49152 \
                 + b (6c D + 3c - 15D^2 + 93D - 13)/384",
            ),
            (&[-1], "-b/6"),
            (&[0, 0, 0], "-b^3/48"),
            (&[0, 0], "b^5/2048 + b^3 (c - 4D + 25)/512 - b (6D - 1)/24"),
        ],
    ),
];

pub const THREE_HALVES_V: VectorTable = &[
    (1, &[(&[1], "-3b/2")]),
    (2, &[(&[1, 1], "9b^2/8")]),
    (3, &[(&[], "153b^3/256 - b (5c + 108D - 11)/192"), (&[1, 1, 1], "-9b^3/16"), (&[0], "-b/2")]),
    (
        4,
        &[
            (&[1], "-459b^4/512 + b^2 (5c + 108D - 95)/128 + D/2"),
            (&[1, 1, 1, 1], "27b^4/128"),
            (&[0, 1], "3b^2/4"),
        ],
    ),
    (
        5,
        &[
            (&[-1], "-3b/10"),
            (&[1, 1], "1377b^5/2048 - 3b^3 (5c + 108D - 179)/512 - 3b (10D - 1)/40"),
            (&[1, 1, 1, 1, 1], "-81b^5/1280"),
            (&[0, 1, 1], "-9b^3/16"),
        ],
    ),
    (
        6,
        &[
            (
                &[],
                "23409b^6/131072 - 3b^4 (85c + 1836D - 3562)/16384 \
                 + b^2 (25c^2 + 1080c D - 6050c + 11664D^2 - 58104D + 15781)/73728 + D (5c + 11D - 22)/192",
            ),
            (&[0], "-(153b^4/512 - b^2 (25c + 540D - 1387)/1920 - D/2)"),
            (&[-1, 1], "9b^2/20"),
            (&[0, 0], "b^2/8"),
            (&[1, 1, 1], "-(1377b^6/4096 - 3b^4 (5c + 108D - 263)/1024 - 9b^2 (5D - 1)/80)"),
            (&[1, 1, 1, 1, 1, 1], "81b^6/5120"),
            (&[0, 1, 1, 1], "9b^4/32"),
        ],
    ),
];

/// Block coefficients `(m, a_m)` of the worked block examples.
pub const HALF_BLOCK: &[(u32, &str)] = &[
    (1, "b^3/256 + b (-32P + c - 4D + 1)/64"),
    (
        2,
        "b^6/131072 + b^4 (-32P + c - 4D + 6)/16384 \
         + b^2 (-192c P + 768D P + 3072P^2 - 2496P + 3c^2 - 24c D + 74c + 48D^2 - 168D + 103)/24576 \
         + D (32P - c + D - 2)/64",
    ),
    (
        3,
        "b^9/100663296 + b^7 (-32P + c - 4D + 11)/8388608 \
         + b^5 (-192c P + 768D P + 3072P^2 - 3456P + 3c^2 - 24c D + 104c + 48D^2 - 288D + 397)/6291456 \
         + b^3 (-288c^2 P + 2304c D P + 9216c P^2 - 14016c P - 4608D^2 P - 36864D P^2 + 52992D P - 98304P^3 \
         + 230400P^2 - 130464P + 3c^3 - 36c^2 D + 213c^2 + 144c D^2 - 1608c D + 3793c - 192D^3 + 2160D^2 - 6660D + 5951)/4718592 \
         - b (-384c D P - 192c P + 960D^2 P + 6144D P^2 - 5952D P - 1024P^2 + 832P + 6c^2 D + 7c^2 - 30c D^2 + 178c D \
         - 6c + 24D^3 - 158D^2 + 340D - 37)/24576",
    ),
];

pub const THREE_HALVES_BLOCK: &[(u32, &str)] = &[
    (1, "0"),
    (2, "0"),
    (3, "153b^3/256 - b (5c + 108D - 11)/192"),
    (4, "0"),
    (5, "0"),
    (
        6,
        "23409b^6/131072 - 3b^4 (85c + 1836D - 3562)/16384 \
         + b^2 (25c^2 + 1080c D - 6050c + 11664D^2 - 58104D + 15781)/73728 + D (5c + 11D - 22)/192",
    ),
];

pub fn fixture_params() -> Params {
    ParamSet::plain(&["b", "c", "D", "P"]).expect("fixed names")
}

/// Basis word `L_{k_1}···L_{k_j}|Λ⟩` of a rank-`r` module from its modes.
pub fn word(r: u32, modes: &[i64]) -> Result<Partition> {
    let parts = modes
        .iter()
        .map(|&k| {
            let p = r as i64 - k;
            if p < 1 {
                Err(Error::Usage(format!("L_{k} is not a creation mode at rank {r}")))
            } else {
                Ok(p as u32)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Usage(format!("modes {modes:?} are not in normal order")));
    }
    Partition::new(parts).ok_or_else(|| Error::Usage(format!("modes {modes:?} are not in normal order")))
}

pub fn half_rank_input(ps: &Params, order: u32) -> RamifiedInput {
    let p = |s: &str| Poly::parse(ps, s).expect("fixture expression");
    RamifiedInput::new(1, vec![p("1"), p("0")], p("D"), p("c"), vec![BetaSpec::Known(p("b"))], C0Mode::Preset(Preset::HalfRank), order)
}

pub fn three_halves_input(ps: &Params, order: u32) -> RamifiedInput {
    let p = |s: &str| Poly::parse(ps, s).expect("fixture expression");
    RamifiedInput::new(
        2,
        vec![p("0"), p("1"), p("0")],
        p("D"),
        p("c"),
        vec![BetaSpec::Known(p("0")), BetaSpec::Known(p("0")), BetaSpec::Known(p("b"))],
        C0Mode::Preset(Preset::ThreeHalves),
        order,
    )
}

#[derive(Clone, Debug)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &str, f: impl FnOnce() -> Result<Vec<String>>) -> FixtureOutcome {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(bad) if bad.is_empty() => (true, "exact match".to_string()),
        Ok(bad) => (false, bad.join("; ")),
        Err(e) => (false, e.to_string()),
    };
    FixtureOutcome { name: name.to_string(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

fn parse_in(ps: &Params, s: &str) -> Result<Poly> {
    Poly::parse(ps, s)
}

/// Compares `v_m` against a table after substituting `alpha := alpha_value`.
pub fn compare_vectors(sol: &RamifiedSolution, table: VectorTable, alpha_value: &Poly) -> Result<Vec<String>> {
    let ps = &sol.params;
    let sub = |p: &Poly| -> Result<Poly> {
        match ps.index_of("alpha") {
            Some(i) => p.substitute(i, &alpha_value.embed(ps)?),
            None => Ok(p.clone()),
        }
    };
    let mut bad = Vec::new();
    for (m, entries) in table {
        let got = sol.v.get(*m).ok_or_else(|| Error::InsufficientOrder(format!("v_{m} not computed")))?;
        let got = got.map_coeffs(sub)?;
        let mut expect = Vec::new();
        for (modes, e) in entries.iter() {
            expect.push((word(sol.r, modes)?, parse_in(ps, e)?));
        }
        let want = ModuleVector::from_terms(&sol.module, expect);
        if got != want {
            let diff = got.sub(&want);
            let first = diff.terms().iter().next().map(|(w, c)| format!("{w}: {}", c.to_text())).unwrap_or_default();
            bad.push(format!("v_{m} differs ({} terms, first {first})", diff.terms().len()));
        }
    }
    Ok(bad)
}

fn check_alpha(sol: &RamifiedSolution, printed: &str) -> Result<Vec<String>> {
    let want = parse_in(&sol.params, printed)?;
    if sol.alpha_determined {
        return Ok(if sol.alpha == want { vec![] } else { vec![format!("α = {} ≠ {}", sol.alpha.to_text(), want.to_text())] });
    }
    Ok(vec![])
}

/// Half-rank operator through `ṽ_3`; `α` is free in the relations, so the printed
/// value is substituted before comparing.
pub fn half_rank_vectors() -> FixtureOutcome {
    timed("half rank: ṽ_1..ṽ_3", || {
        let ps = fixture_params();
        let sol = solve_ramified(&half_rank_input(&ps, 3))?;
        let mut bad = check_alpha(&sol, HALF_ALPHA)?;
        bad.extend(compare_vectors(&sol, HALF_V, &parse_in(&ps, HALF_ALPHA)?)?);
        Ok(bad)
    })
}

pub fn three_halves_vectors() -> FixtureOutcome {
    timed("rank 3/2: ṽ_1..ṽ_6", || {
        let ps = fixture_params();
        let sol = solve_ramified(&three_halves_input(&ps, 6))?;
        let mut bad = check_alpha(&sol, THREE_HALVES_ALPHA)?;
        bad.extend(compare_vectors(&sol, THREE_HALVES_V, &parse_in(&ps, THREE_HALVES_ALPHA)?)?);
        Ok(bad)
    })
}

fn compare_block(sol: &RamifiedSolution, dp: &str, table: &[(u32, &str)], alpha: &str) -> Result<Vec<String>> {
    let ps = &sol.params;
    let block = assemble_block(sol, &parse_in(ps, dp)?)?;
    let a = parse_in(ps, alpha)?;
    let ai = ps.index_of("alpha");
    let mut bad = Vec::new();
    if block.coeff(0) != Poly::one(ps) {
        bad.push("a_0 ≠ 1".to_string());
    }
    for (m, e) in table {
        let mut got = block.coeff(*m);
        if let Some(i) = ai {
            got = got.substitute(i, &a)?;
        }
        let want = parse_in(ps, e)?;
        if got != want {
            bad.push(format!("z^{{{m}/2}} coefficient differs by {}", (&got - &want).to_text()));
        }
    }
    Ok(bad)
}

pub fn half_rank_block() -> FixtureOutcome {
    timed("half rank: block through z^{3/2}", || {
        let ps = fixture_params();
        let sol = solve_ramified(&half_rank_input(&ps, 3))?;
        compare_block(&sol, "P", HALF_BLOCK, HALF_ALPHA)
    })
}

pub fn three_halves_block() -> FixtureOutcome {
    timed("rank 3/2: block through z^3", || {
        let ps = fixture_params();
        let sol = solve_ramified(&three_halves_input(&ps, 6))?;
        compare_block(&sol, "0", THREE_HALVES_BLOCK, THREE_HALVES_ALPHA)
    })
}

fn singular_template(r: u32, ps: &Params, order: u32) -> RamifiedInput {
    let p = |s: &str| Poly::parse(ps, s).expect("constant");
    let mut lambda = vec![p("0"); r as usize + 1];
    lambda[r as usize - 1] = p("1");
    let mut beta = vec![BetaSpec::Known(p("0")); 2 * r as usize - 2];
    beta.push(BetaSpec::Solve);
    RamifiedInput::new(r, lambda, p("0"), p("1"), beta, C0Mode::Symbolic, order)
}

/// Distinct `β_{2r−1}` values of the singular sets at `c = 1` and whether each
/// carries a set whose `α` equals `printed_alpha(β, Δ_{p,q}, c = 1)`.
pub fn singular_alpha_check(r: u32, p: u32, q: u32, printed_alpha: &str) -> Result<(Vec<String>, u32)> {
    let tps = ParamSet::plain(&["t"])?;
    let t = Poly::one(&tps);
    let order = 2 * p * q + 2 * r;
    let rep = singular_condition_solve(p, q, &t, &singular_template(r, &tps, order))?;
    let local = fixture_params();
    let formula = parse_in(&local, printed_alpha)?;
    let delta = kac_weight(p, q, &t)?.as_constant().ok_or_else(|| Error::Numeric("Δ_{p,q} not constant".into()))?;
    let mut bad = Vec::new();
    let mut betas: Vec<Poly> = rep.solutions.iter().map(|s| s.beta.last().unwrap().clone()).collect();
    betas.dedup();
    for b in &betas {
        let bq = b.as_constant().ok_or_else(|| Error::Numeric("β not constant".into()))?;
        let images = [Poly::constant(&tps, bq.clone()), Poly::one(&tps), Poly::constant(&tps, delta.clone()), Poly::zero(&tps)];
        let want = formula.compose(&images)?.as_constant().unwrap();
        let ok = rep
            .solutions
            .iter()
            .filter(|s| s.beta.last() == Some(b))
            .any(|s| s.alpha.as_constant().as_ref() == Some(&want));
        if !ok {
            bad.push(format!("(p,q)=({p},{q}), β={bq}: no singular set with α = {want}"));
        }
    }
    if !rep.unresolved.is_empty() {
        bad.push(format!("(p,q)=({p},{q}) unresolved: {}", rep.unresolved.join("; ")));
    }
    Ok((bad, rep.count()))
}

pub fn half_rank_alpha() -> FixtureOutcome {
    timed("half rank: α at singular points (c=1)", || {
        let mut bad = Vec::new();
        for (p, q) in [(1, 2), (1, 3), (2, 2)] {
            bad.extend(singular_alpha_check(1, p, q, HALF_ALPHA)?.0);
        }
        Ok(bad)
    })
}

pub fn three_halves_alpha() -> FixtureOutcome {
    timed("rank 3/2: α at singular points (c=1)", || {
        let mut bad = Vec::new();
        for (p, q) in [(1, 2), (2, 2)] {
            bad.extend(singular_alpha_check(2, p, q, THREE_HALVES_ALPHA)?.0);
        }
        Ok(bad)
    })
}

/// Distinct `β_1^{p,q,i}` at `c = 1` and the solution count.
pub fn singular_beta_family(p: u32, q: u32) -> Result<(Vec<rug::Rational>, u32, u32)> {
    let tps = ParamSet::plain(&["t"])?;
    let rep = singular_condition_solve(p, q, &Poly::one(&tps), &singular_template(1, &tps, 2 * p * q + 2))?;
    let mut betas: Vec<rug::Rational> = rep.solutions.iter().filter_map(|s| s.beta[0].as_constant()).collect();
    betas.sort();
    betas.dedup();
    Ok((betas, rep.count(), rep.expected()))
}

pub fn singular_beta_spacing() -> FixtureOutcome {
    timed("singular β family: β_1^{p,q,i} = −2(p+q−2)+4(i−1) at c=1", || {
        let mut bad = Vec::new();
        for (p, q) in [(1u32, 2u32), (2, 1), (2, 2)] {
            let (betas, count, expected) = singular_beta_family(p, q)?;
            let want: Vec<rug::Rational> = (1..=(p + q - 1) as i64).map(|i| rug::Rational::from(-2 * (p + q) as i64 + 4 + 4 * (i - 1))).collect();
            if betas != want {
                bad.push(format!("(p,q)=({p},{q}): β = {betas:?}, printed {want:?}"));
            }
            if count != expected {
                bad.push(format!("(p,q)=({p},{q}): {count} sets, pq = {expected}"));
            }
        }
        Ok(bad)
    })
}

fn rank_r_input(r: u32, order: u32) -> Result<(Params, RankRInput)> {
    let mut gens: Vec<(String, bool)> = (0..=r).map(|i| (format!("l{i}"), i == r)).collect();
    gens.extend([("b".to_string(), false), ("D".to_string(), false), ("rho".to_string(), false)]);
    let ps = ParamSet::new(&gens)?;
    let inp = RankRInput {
        r,
        lambda: (0..=r).map(|i| Poly::var(&ps, &format!("l{i}"))).collect::<Result<_>>()?,
        beta_r: Poly::var(&ps, "b")?,
        delta: Poly::var(&ps, "D")?,
        rho: Poly::var(&ps, "rho")?,
        order,
    };
    Ok((ps, inp))
}

/// Rank one: `α = −2Δ + β_1Λ_1/(2Λ_2)`.
pub fn rank_one_alpha() -> FixtureOutcome {
    timed("rank r: α (r=1)", || {
        let (_, inp) = rank_r_input(1, 2)?;
        let sol = solve_vm(&inp)?;
        let lam = lambda_from_input(&RankRInput { lambda: sol.lambda.clone(), beta_r: sol.beta[0].clone(), delta: sol.delta.clone(), rho: sol.rho.clone(), ..inp });
        let want = &sol.delta.scale_i64(-2) + &(&sol.beta[0] * &lam[0]).div_exact(&lam[1].scale_i64(2))?;
        Ok(if sol.alpha == want { vec![] } else { vec![format!("α = {}", sol.alpha.to_text())] })
    })
}

/// Rank two: `β_1 = −2β_2λ_1/λ_2`.
pub fn rank_two_beta() -> FixtureOutcome {
    timed("rank r: β_1 (r=2)", || {
        let (ps, inp) = rank_r_input(2, 1)?;
        let sol = solve_vm(&inp)?;
        let want = Poly::parse(&ps, "-2 b l1 / l2")?.embed(&sol.params)?;
        Ok(if sol.beta[0] == want { vec![] } else { vec![format!("β_1 = {}", sol.beta[0].to_text())] })
    })
}

/// `v_1 = L_{−1} + (−1)^r rβ_r/(2Λ_{2r}) L_{r−1} + c_∅^{(1)}`.
pub fn first_coefficient(r: u32) -> FixtureOutcome {
    timed(&format!("rank r: v_1 (r={r})"), || {
        let (_, inp) = rank_r_input(r, 1)?;
        let sol = solve_vm(&inp)?;
        let ps = &sol.params;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let mid = sol.beta[r as usize - 1].scale_i64(sign * r as i64).div_exact(&sol.module.weight(2 * r as i64).scale_i64(2))?;
        let c0 = sol.c0[0].clone().unwrap_or(Poly::var(ps, "c0_1")?);
        let want = ModuleVector::from_terms(&sol.module, vec![(word(r, &[-1])?, Poly::one(ps)), (word(r, &[r as i64 - 1])?, mid), (Partition::empty(), c0)]);
        Ok(if sol.v[1] == want { vec![] } else { vec![format!("v_1 differs by {} terms", sol.v[1].sub(&want).terms().len())] })
    })
}

/// Every printed example, in order.
pub fn printed_suite() -> Vec<FixtureOutcome> {
    vec![
        rank_one_alpha(),
        rank_two_beta(),
        first_coefficient(1),
        first_coefficient(2),
        first_coefficient(3),
        half_rank_vectors(),
        half_rank_alpha(),
        half_rank_block(),
        three_halves_vectors(),
        three_halves_alpha(),
        three_halves_block(),
        singular_beta_spacing(),
    ]
}
