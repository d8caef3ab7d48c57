use std::fs;

use serde_json::{json, Value};

use icb_core::blocks::{assemble_block, BlockSeries};
use icb_core::coeffring::{expr_names, ParamSet, Params, Poly};
use icb_core::exec;
use icb_core::fixtures::printed_suite;
use icb_core::numeric::{digits_for, Complex};
use icb_core::painleve::{sigma_residual, tau_series, ModeFactor, TauEval, TauSpec, TauSpecP2, TauSpecP3};
use icb_core::ramified::{singular_condition_solve, solve_ramified, BetaSpec, C0Mode, Grid, Preset, RamifiedInput, RamifiedSolution};
use icb_core::rank_r::{solve_vm, RankRInput};
use icb_core::virasoro::singular_vector;
use icb_core::{Error, Result};

use crate::{
    BlockArgs, CheckOdeArgs, Cli, Command, Equation, FixturesAction, Format, GridArg, RamifiedArgs, RankRArgs, SingularArgs,
    SingularVectorArgs, TauCommon, TauP2Args, TauP3Args,
};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_PRECISION: u32 = 64;

/// Runs one command and returns the exit code for a completed run.
pub fn run(cli: &Cli) -> Result<u8> {
    if cli.sequential {
        exec::set_parallel(false);
    }
    let (artifact, text, ok) = match &cli.command {
        Command::SolveRankR(a) => rank_r(a)?,
        Command::SolveRamified(a) => ramified(a)?,
        Command::SingularSolve(a) => singular(a)?,
        Command::Block(a) => block(a)?,
        Command::TauP3(a) => tau_p3(a)?,
        Command::TauP2(a) => tau_p2(a)?,
        Command::CheckOde(a) => check_ode(a)?,
        Command::Fixtures(a) => fixtures(&a.action)?,
        Command::SingularVector(a) => singular_vec(a)?,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&artifact).map_err(Error::from)? + "\n",
        Format::Text => text,
    };
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(if ok { 0 } else { 1 })
}

type Outcome = (Value, String, bool);

/// Flag value beats `ICB_PRECISION`, which beats the default.
pub fn precision(flag: Option<u32>) -> Result<u32> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var("ICB_PRECISION") {
            Ok(s) => s.trim().parse().map_err(|_| Error::Usage(format!("ICB_PRECISION `{s}` is not an integer")))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if !(MIN_PRECISION..=4096).contains(&p) {
        return Err(Error::Usage(format!("precision {p} outside {MIN_PRECISION}..=4096 bits")));
    }
    Ok(p)
}

fn csv(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn is_name(s: &str) -> bool {
    let mut ch = s.chars();
    ch.next().map_or(false, |c| c.is_ascii_alphabetic() || c == '_') && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parameter set holding every name in `exprs` (plus `extra`) in order of
/// first appearance; names in `invertible` become units.
fn params_for(exprs: &[&str], extra: &[String], invertible: &[String]) -> Result<Params> {
    let mut names: Vec<String> = Vec::new();
    for e in exprs {
        for n in expr_names(e)? {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    for n in extra {
        if !is_name(n) {
            return Err(Error::Usage(format!("`{n}` is not a parameter name")));
        }
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    for n in invertible {
        if !names.contains(n) {
            return Err(Error::Usage(format!("invertible parameter `{n}` does not occur in any expression")));
        }
    }
    let gens: Vec<(String, bool)> = names.iter().map(|n| (n.clone(), invertible.contains(n))).collect();
    ParamSet::new(&gens)
}

fn poly_text(p: &Poly) -> String {
    p.to_text()
}

fn opt_text(p: &Option<Poly>) -> String {
    p.as_ref().map_or_else(|| "free".to_string(), poly_text)
}

fn rank_r(a: &RankRArgs) -> Result<Outcome> {
    let lambda = csv(&a.lambda);
    if lambda.len() != a.r as usize + 1 {
        return Err(Error::Usage(format!("--lambda needs r+1 = {} entries, got {}", a.r + 1, lambda.len())));
    }
    let mut inv = csv(&a.invertible);
    let top = lambda.last().unwrap();
    if is_name(top) && !inv.contains(top) {
        inv.push(top.clone());
    }
    let mut exprs: Vec<&str> = lambda.iter().map(String::as_str).collect();
    exprs.extend([a.beta_r.as_str(), a.delta.as_str(), a.rho.as_str()]);
    let ps = params_for(&exprs, &[], &inv)?;
    let p = |s: &str| Poly::parse(&ps, s);
    let input = RankRInput {
        r: a.r,
        lambda: lambda.iter().map(|s| p(s)).collect::<Result<_>>()?,
        beta_r: p(&a.beta_r)?,
        delta: p(&a.delta)?,
        rho: p(&a.rho)?,
        order: a.order,
    };
    let sol = solve_vm(&input)?;
    let mut text = format!("alpha = {}\n", poly_text(&sol.alpha));
    for (i, b) in sol.beta.iter().enumerate() {
        text += &format!("beta_{} = {}\n", i + 1, poly_text(b));
    }
    for (m, c) in sol.c0.iter().enumerate() {
        text += &format!("c0_{} = {}\n", m + 1, opt_text(c));
    }
    Ok((sol.to_json(), text, true))
}

fn c0_file(path: &str) -> Result<Vec<String>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&raw)?;
    let arr = v.as_array().ok_or_else(|| Error::Usage(format!("{path}: expected a JSON array of expressions")))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Error::Usage(format!("{path}: entries must be strings or numbers"))),
        })
        .collect()
}

fn solution_text(sol: &RamifiedSolution) -> String {
    let mut text = format!("alpha = {}{}\n", poly_text(&sol.alpha), if sol.alpha_determined { "" } else { " (free)" });
    for (i, b) in sol.beta.iter().enumerate() {
        text += &format!("beta_{} = {}\n", i + 1, poly_text(b));
    }
    for (m, c) in sol.c0.iter().enumerate() {
        text += &format!("c0_{} = {}\n", m + 1, opt_text(c));
    }
    for (m, v) in sol.v.iter().enumerate() {
        for (w, c) in v.terms() {
            text += &format!("v_{m}[{w}] = {}\n", poly_text(c));
        }
    }
    if !sol.pending.is_empty() {
        text += &format!("pending equations: {}\n", sol.pending.len());
    }
    text
}

fn ramified(a: &RamifiedArgs) -> Result<Outcome> {
    let lambda = csv(&a.lambda_vec);
    if lambda.len() != a.r as usize + 1 {
        return Err(Error::Usage(format!("--lambda-vec needs r+1 = {} entries, got {}", a.r + 1, lambda.len())));
    }
    let beta = csv(&a.beta);
    let (c0_exprs, c0_mode) = match a.c0_mode.split_once(':') {
        None if a.c0_mode == "symbolic" => (Vec::new(), None),
        Some(("preset", name)) => (Vec::new(), Some(C0Mode::Preset(Preset::parse(name)?))),
        Some(("file", path)) => (c0_file(path)?, None),
        _ => return Err(Error::Usage(format!("--c0-mode `{}` is not symbolic, preset:NAME or file:PATH", a.c0_mode))),
    };
    let mut inv = csv(&a.invertible);
    let top = lambda.last().unwrap();
    if is_name(top) && !inv.contains(top) {
        inv.push(top.clone());
    }
    let mut exprs: Vec<&str> = lambda.iter().map(String::as_str).collect();
    exprs.extend(beta.iter().filter(|b| *b != "?").map(String::as_str));
    exprs.extend([a.delta.as_str(), a.c.as_str()]);
    exprs.extend(c0_exprs.iter().map(String::as_str));
    if let Some(al) = &a.alpha {
        exprs.push(al);
    }
    let ps = params_for(&exprs, &csv(&a.params), &inv)?;
    let p = |s: &str| Poly::parse(&ps, s);
    let beta = beta
        .iter()
        .map(|b| if b == "?" { Ok(BetaSpec::Solve) } else { Ok(BetaSpec::Known(p(b)?)) })
        .collect::<Result<Vec<_>>>()?;
    let c0 = match c0_mode {
        Some(m) => m,
        None if c0_exprs.is_empty() => C0Mode::Symbolic,
        None => C0Mode::Values(c0_exprs.iter().map(|s| p(s)).collect::<Result<_>>()?),
    };
    let lam = lambda.iter().map(|s| p(s)).collect::<Result<Vec<_>>>()?;
    let mut input = RamifiedInput::new(a.r, lam, p(&a.delta)?, p(&a.c)?, beta, c0, a.order);
    input.alpha = a.alpha.as_deref().map(p).transpose()?;
    input.slack = a.slack;
    input.grid = match a.grid {
        GridArg::Half => Grid::Half,
        GridArg::Integer => Grid::Integer,
    };
    let sol = solve_ramified(&input)?;
    let text = solution_text(&sol);
    Ok((sol.to_json(), text, true))
}

fn singular(a: &SingularArgs) -> Result<Outcome> {
    if a.r == 0 {
        return Err(Error::Usage("--r must be positive".into()));
    }
    let inv = if is_name(&a.t) { vec![a.t.clone()] } else { Vec::new() };
    let ps = params_for(&[&a.t], &[], &inv)?;
    let p = |s: &str| Poly::parse(&ps, s);
    let t = p(&a.t)?;
    let r = a.r as usize;
    let mut lambda = vec![Poly::zero(&ps); r + 1];
    lambda[r - 1] = Poly::one(&ps);
    let mut beta = vec![BetaSpec::Known(Poly::zero(&ps)); 2 * r - 2];
    beta.push(BetaSpec::Solve);
    let order = a.order.unwrap_or(2 * a.p * a.q + 2 * a.r);
    let tpl = RamifiedInput::new(a.r, lambda, Poly::zero(&ps), Poly::one(&ps), beta, C0Mode::Symbolic, order);
    let rep = singular_condition_solve(a.p, a.q, &t, &tpl)?;
    let sols: Vec<Value> = rep
        .solutions
        .iter()
        .map(|s| {
            json!({
                "alpha": s.alpha.to_json(),
                "beta": s.beta.iter().map(Poly::to_json).collect::<Vec<_>>(),
                "c0": s.c0.iter().map(|c| c.as_ref().map_or(Value::Null, Poly::to_json)).collect::<Vec<_>>(),
                "multiplicity": s.multiplicity,
            })
        })
        .collect();
    let artifact = json!({
        "p": rep.p,
        "q": rep.q,
        "r": a.r,
        "order": order,
        "valid": rep.valid,
        "equations": rep.equations,
        "count": rep.count(),
        "expected": rep.expected(),
        "solutions": sols,
        "unresolved": rep.unresolved,
    });
    let mut text = format!("(p,q) = ({},{}): {} solutions counted with multiplicity, {} expected\n", a.p, a.q, rep.count(), rep.expected());
    for s in &rep.solutions {
        let betas: Vec<String> = s.beta.iter().map(poly_text).collect();
        text += &format!("alpha = {}, beta = [{}], multiplicity {}\n", poly_text(&s.alpha), betas.join(", "), s.multiplicity);
    }
    for u in &rep.unresolved {
        text += &format!("unresolved: {u}\n");
    }
    Ok((artifact, text, true))
}

fn block(a: &BlockArgs) -> Result<Outcome> {
    let path = a.solution.display().to_string();
    let raw = fs::read_to_string(&a.solution).map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&raw)?;
    if v.get("kind").and_then(Value::as_str) != Some("ramified") {
        return Err(Error::Usage(format!("{path} is not a ramified solution")));
    }
    let sol = RamifiedSolution::from_json(&v)?;
    let parse = |s: &str| {
        for n in expr_names(s)? {
            if !sol.params.contains(&n) {
                return Err(Error::Usage(format!("`{n}` is not a parameter of the solution (add it with --params when solving)")));
            }
        }
        Poly::parse(&sol.params, s)
    };
    let mut b: BlockSeries = assemble_block(&sol, &parse(&a.delta_prime)?)?;
    if let Some(al) = &a.alpha {
        b.alpha = parse(al)?;
    }
    let mut text = format!("alpha = {}\n", poly_text(&b.alpha));
    for (i, e) in &b.essential {
        text += &format!("beta_{i} = {}\n", poly_text(e));
    }
    for (m, c) in &b.coeffs {
        text += &format!("a_{m} = {}\n", poly_text(c));
    }
    Ok((b.to_json(), text, true))
}

fn complex(name: &str, s: &str, prec: u32) -> Result<Complex> {
    Complex::parse(s, prec).ok_or_else(|| Error::Usage(format!("--{name} `{s}` is not a number (use a, a+bi or a-bi)")))
}

fn cstr(z: &Complex, digits: usize) -> Value {
    Value::String(z.to_string_digits(digits))
}

struct TauSettings {
    prec: u32,
    nu: Complex,
    s: Complex,
    mode_factor: ModeFactor,
}

fn tau_settings(c: &TauCommon) -> Result<TauSettings> {
    let prec = precision(c.prec)?;
    Ok(TauSettings { prec, nu: complex("nu", &c.nu, prec)?, s: complex("s", &c.s, prec)?, mode_factor: ModeFactor::parse(&c.mode_factor)? })
}

fn p3_spec(theta1: &str, theta2: &str, c: &TauCommon) -> Result<TauSpec> {
    let st = tau_settings(c)?;
    Ok(TauSpec::P3(TauSpecP3 {
        theta1: complex("theta1", theta1, st.prec)?,
        theta2: complex("theta2", theta2, st.prec)?,
        nu: st.nu,
        s: st.s,
        n_max: c.n_max,
        order: c.order.unwrap_or(3),
        prec: st.prec,
        mode_factor: st.mode_factor,
    }))
}

fn p2_spec(theta: &str, branch_k: u32, c: &TauCommon) -> Result<TauSpec> {
    let st = tau_settings(c)?;
    Ok(TauSpec::P2(TauSpecP2 {
        theta: complex("theta", theta, st.prec)?,
        nu: st.nu,
        s: st.s,
        branch_k,
        n_max: c.n_max,
        order: c.order.unwrap_or(6),
        prec: st.prec,
        mode_factor: st.mode_factor,
    }))
}

fn header(spec: &TauSpec, c: &TauCommon) -> Value {
    let (equation, n_max, order, mf) = match spec {
        TauSpec::P3(s) => ("p3", s.n_max, s.order, s.mode_factor),
        TauSpec::P2(s) => ("p2", s.n_max, s.order, s.mode_factor),
    };
    json!({
        "equation": equation,
        "precision": spec.prec(),
        "digits": digits_for(spec.prec()),
        "N": n_max,
        "M": order,
        "nu": c.nu,
        "s": c.s,
        "mode_factor": mf.name(),
    })
}

fn tau_point(spec: &TauSpec, t: &str, c: &TauCommon) -> Result<Outcome> {
    let prec = spec.prec();
    let digits = digits_for(prec);
    let tv = complex("t", t, prec)?;
    let series = tau_series(spec)?;
    let ev: TauEval = series.eval(&tv)?;
    let j = &ev.jet;
    let terms: Vec<Value> = ev
        .terms
        .iter()
        .map(|r| json!({"n": r.n, "m": r.m, "value": cstr(&r.value, digits), "dropped": r.dropped}))
        .collect();
    let mut out = header(spec, c);
    let obj = out.as_object_mut().expect("object");
    obj.insert("t".into(), cstr(&tv, digits));
    obj.insert("tau".into(), cstr(&j.tau, digits));
    obj.insert("d1".into(), cstr(&j.d1, digits));
    obj.insert("d2".into(), cstr(&j.d2, digits));
    obj.insert("d3".into(), cstr(&j.d3, digits));
    obj.insert("terms".into(), Value::Array(terms));
    let text = format!("precision = {prec}\nt = {}\ntau = {}\n", tv.to_string_digits(digits), j.tau.to_string_digits(digits));
    Ok((out, text, true))
}

fn tau_p3(a: &TauP3Args) -> Result<Outcome> {
    tau_point(&p3_spec(&a.theta1, &a.theta2, &a.common)?, &a.t, &a.common)
}

fn tau_p2(a: &TauP2Args) -> Result<Outcome> {
    tau_point(&p2_spec(&a.theta, a.branch_k, &a.common)?, &a.t, &a.common)
}

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Usage(format!("--{name} is required for this equation")))
}

fn check_ode(a: &CheckOdeArgs) -> Result<Outcome> {
    let spec = match a.equation {
        Equation::P3 => p3_spec(required(&a.theta1, "theta1")?, required(&a.theta2, "theta2")?, &a.common)?,
        Equation::P2 => p2_spec(required(&a.theta, "theta")?, a.branch_k, &a.common)?,
    };
    let prec = spec.prec();
    let digits = digits_for(prec);
    let points = csv(&a.t_list).iter().map(|t| complex("t-list", t, prec)).collect::<Result<Vec<_>>>()?;
    if points.is_empty() {
        return Err(Error::Usage("--t-list is empty".into()));
    }
    let series = tau_series(&spec)?;
    let sf = spec.sigma_form();
    let mut rows = Vec::new();
    let mut text = format!("precision = {prec}\n");
    for t in &points {
        let ev = series.eval(t)?;
        let res = sigma_residual(&sf, &ev.jet)?;
        let rel = res.relative();
        rows.push(json!({
            "t": cstr(t, digits),
            "tau": cstr(&ev.jet.tau, digits),
            "h": cstr(&res.hamiltonian.f, digits),
            "residual": cstr(&res.residual, digits),
            "relative_residual": format!("{rel:.6e}"),
        }));
        text += &format!("t = {}  relative residual = {rel:.3e}\n", t.to_string_digits(12));
    }
    let mut out = header(&spec, &a.common);
    out.as_object_mut().expect("object").insert("rows".into(), Value::Array(rows));
    Ok((out, text, true))
}

fn fixtures(action: &FixturesAction) -> Result<Outcome> {
    let FixturesAction::Run { suite } = action;
    if suite != "paper" {
        return Err(Error::Usage(format!("unknown suite `{suite}` (available: paper)")));
    }
    let outcomes = printed_suite();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let all = passed == outcomes.len();
    let results: Vec<Value> = outcomes.iter().map(|o| json!({"name": o.name, "passed": o.passed, "detail": o.detail})).collect();
    let mut text = String::new();
    for o in &outcomes {
        text += &format!("{} {}{}\n", if o.passed { "PASS" } else { "FAIL" }, o.name, if o.detail.is_empty() { String::new() } else { format!(": {}", o.detail) });
    }
    text += &format!("{passed}/{} passed\n", outcomes.len());
    Ok((json!({"suite": suite, "passed": passed, "total": outcomes.len(), "all_passed": all, "results": results}), text, all))
}

fn singular_vec(a: &SingularVectorArgs) -> Result<Outcome> {
    let inv = if is_name(&a.t) { vec![a.t.clone()] } else { Vec::new() };
    let ps = params_for(&[&a.t], &[], &inv)?;
    let chi = singular_vector(a.p, a.q, &Poly::parse(&ps, &a.t)?)?;
    let mut text = String::new();
    for (w, c) in chi.terms() {
        text += &format!("[{w}] {}\n", poly_text(c));
    }
    let mut out = chi.to_json();
    if let Some(o) = out.as_object_mut() {
        o.insert("p".into(), json!(a.p));
        o.insert("q".into(), json!(a.q));
        o.insert("level".into(), json!(a.p * a.q));
    }
    Ok((out, text, true))
}
