use std::collections::HashMap;

use icb_core::blocks::eval_block;
use icb_core::error::Error;
use icb_core::numeric::Complex;
use icb_core::painleve::*;
use rug::Rational;

fn c(s: &str, p: u32) -> Complex {
    Complex::parse(s, p).unwrap()
}

fn p3(theta1: &str, theta2: &str, nu: &str, s: &str, order: u32, prec: u32, mode_factor: ModeFactor) -> TauSpec {
    TauSpec::P3(TauSpecP3 {
        theta1: c(theta1, prec),
        theta2: c(theta2, prec),
        nu: c(nu, prec),
        s: c(s, prec),
        n_max: 2,
        order,
        prec,
        mode_factor,
    })
}

fn p2(s: &str, k: u32, order: u32, mode_factor: ModeFactor) -> TauSpec {
    TauSpec::P2(TauSpecP2 { theta: c("0.23", 128), nu: c("0.05", 128), s: c(s, 128), branch_k: k, n_max: 2, order, prec: 128, mode_factor })
}

fn eval(spec: &TauSpec, t: f64) -> TauEval {
    tau_series(spec).unwrap().eval(&Complex::from_f64(t, 0.0, spec.prec())).unwrap()
}

fn mode_sums(e: &TauEval) -> HashMap<i64, Complex> {
    let mut out: HashMap<i64, Complex> = HashMap::new();
    for row in &e.terms {
        let z = Complex::zero(row.value.prec());
        let acc = out.entry(row.n).or_insert(z);
        *acc = acc.add(&row.value);
    }
    out
}

#[test]
fn single_mode_matches_direct_formula() {
    let prec = 128;
    let spec = p3("0.31", "0.17", "0.05", "0", 3, prec, ModeFactor::Printed);
    let t = Complex::from_f64(7.0, 0.0, prec);
    let got = tau_series(&spec).unwrap().eval(&t).unwrap();
    assert!(got.terms.iter().all(|r| r.n == 0));
    let (t1, t2, nu) = (c("0.31", prec), c("0.17", prec), c("0.05", prec));
    let sum = t1.add(&t2);
    let dif = t1.sub(&t2);
    let q = |x: &Complex| x.mul(x).scale_rational(&Rational::from((1, 4)));
    let bind = HashMap::from([
        ("b".to_string(), nu.scale_rational(&Rational::from(4))),
        ("c".to_string(), Complex::one(prec)),
        ("D".to_string(), q(&sum)),
        ("P".to_string(), q(&dif)),
    ]);
    let block = eval_block(&prepared_block(true, 3).unwrap(), &bind, &t.recip(), prec).unwrap();
    let half_sum = sum.scale_rational(&Rational::from((1, 2)));
    let one = Complex::one(prec);
    let g = barnes_g(&one.add(&nu).add(&half_sum), prec).unwrap().mul(&barnes_g(&one.add(&nu).sub(&half_sum), prec).unwrap());
    let want = t
        .powc(&t1.mul(&t2).neg())
        .mul(&t.scale_rational(&Rational::from((-1, 2))).exp())
        .mul(&Complex::from_i64(2, prec).powc(&nu.mul(&nu).neg()))
        .mul(&g)
        .mul(&block);
    assert!(got.jet.tau.rel_diff(&want) < 1e-30);
}

#[test]
fn derivatives_match_finite_differences() {
    let prec = 256;
    for spec in [p3("0.31", "0.17", "0.05", "0.2", 3, prec, ModeFactor::Printed), {
        let TauSpec::P2(mut s) = p2("0.2", 0, 6, ModeFactor::Printed) else { unreachable!() };
        s.prec = prec;
        s.theta = c("0.23", prec);
        s.nu = c("0.05", prec);
        s.s = c("0.2", prec);
        TauSpec::P2(s)
    }] {
        let ser = tau_series(&spec).unwrap();
        let t0 = Complex::from_i64(9, prec);
        let hh = c("1e-12", prec);
        let at = |x: &Complex| ser.eval(x).unwrap().jet;
        let j = at(&t0);
        let (m, p) = (at(&t0.sub(&hh)), at(&t0.add(&hh)));
        let d1 = p.tau.sub(&m.tau).div(&hh.scale_rational(&Rational::from(2)));
        let d2 = p.d1.sub(&m.d1).div(&hh.scale_rational(&Rational::from(2)));
        let d3 = p.d2.sub(&m.d2).div(&hh.scale_rational(&Rational::from(2)));
        assert!(d1.rel_diff(&j.d1) < 1e-18);
        assert!(d2.rel_diff(&j.d2) < 1e-18);
        assert!(d3.rel_diff(&j.d3) < 1e-18);
    }
}

#[test]
fn s_grading_by_finite_differences() {
    // s ∂_s τ = Σ_n n T_n
    let (s0, ds) = (0.2, 1e-7);
    let at = |s: f64| eval(&p3("0.31", "0.17", "0.05", &format!("{s}"), 3, 192, ModeFactor::Printed), 11.0);
    let e = at(s0);
    let fd = at(s0 + ds).jet.tau.sub(&at(s0 - ds).jet.tau).mul(&Complex::from_f64(s0 / (2.0 * ds), 0.0, 192));
    let graded = mode_sums(&e).iter().fold(Complex::zero(192), |acc, (n, v)| acc.add(&v.mul(&Complex::from_i64(*n, 192))));
    assert!(fd.rel_diff(&graded) < 1e-10);
}

#[test]
fn barnes_zero_drops_a_mode() {
    // θ_1 + θ_2 = −2(ν + 2) makes G(1 + ν + 1 + (θ_1 + θ_2)/2) = G(0)
    let e = eval(&p3("-2.5", "-2", "0.25", "0.3", 3, 128, ModeFactor::Printed), 6.0);
    let sums = mode_sums(&e);
    assert!(sums[&1].is_zero());
    // 1 + ν + n + (θ_1 + θ_2)/2 = n − 1 is a non-positive integer for every n ≤ 1
    assert!(sums[&0].is_zero() && !sums[&2].is_zero());
}

#[test]
fn block_order_beyond_preset_is_refused() {
    let err = tau_series(&p3("0.31", "0.17", "0.05", "0.2", 4, 128, ModeFactor::Printed)).unwrap_err();
    assert!(matches!(err, Error::InsufficientOrder(ref m) if m.contains("insufficient block order")), "{err}");
    assert!(tau_series(&p2("0.2", 0, 7, ModeFactor::Printed)).is_err());
}

#[test]
fn regression_value_stable_under_doubled_precision() {
    let a = eval(&p3("0.31", "0.17", "0.05", "0.2", 3, 128, ModeFactor::Printed), 40.0).jet.tau;
    let b = eval(&p3("0.31", "0.17", "0.05", "0.2", 3, 256, ModeFactor::Printed), 40.0).jet.tau;
    assert!(a.is_finite() && !a.is_zero());
    assert!(a.rel_diff(&b) < 1e-20);
}

#[test]
fn branch_constants_solve_the_defining_equation() {
    let want = c("0-1.41421356237309504880168872420969807857i", 128);
    let a0 = p2_branch_constant(0, 128).unwrap();
    assert!(a0.powc(&c("1.5", 128)).rel_diff(&want) < 1e-30);
    for k in 0..3 {
        let a = p2_branch_constant(k, 128).unwrap();
        assert!(a.powi(3).rel_diff(&want.mul(&want)) < 1e-30, "k={k}");
    }
    assert!(p2_branch_constant(3, 128).is_err());
}

#[test]
fn printed_p2_normalization_leaves_twice_the_single_mode_constant() {
    // single mode: ν² − θ²/4; with both neighbours present the cross term doubles it
    let single = 0.05f64.powi(2) - 0.23f64.powi(2) / 4.0;
    for k in 0..3 {
        for t in [40.0, 80.0] {
            let e = eval(&p2("0.2", k, 6, ModeFactor::Printed), t);
            let r = sigma_residual(&SigmaForm::P2 { theta: c("0.23", 128) }, &e.jet).unwrap();
            let (re, _) = r.residual.to_f64_pair();
            assert!((re - 2.0 * single).abs() < 5e-4, "k={k} t={t}: {re}");
        }
    }
    let e = eval(&p2("0", 0, 6, ModeFactor::Printed), 40.0);
    let r = sigma_residual(&SigmaForm::P2 { theta: c("0.23", 128) }, &e.jet).unwrap();
    assert!((r.residual.to_f64_pair().0 - single).abs() < 1e-6, "{}", r.residual);
}

#[test]
fn adjusted_normalization_residuals_decay() {
    let rel = |spec: &TauSpec, t: f64| sigma_residual(&spec.sigma_form(), &eval(spec, t).jet).unwrap().relative();
    let s2 = p2("0.2", 0, 6, ModeFactor::Adjusted);
    let (a, b) = (rel(&s2, 40.0), rel(&s2, 80.0));
    assert!(a / b > 2f64.powf(3.5) / 3.0, "P II {a} → {b}");
    let s3 = p3("0.31", "0.17", "0.05", "0.2", 3, 128, ModeFactor::Adjusted);
    let (a, b) = (rel(&s3, -40.0), rel(&s3, -80.0));
    assert!(a / b > 4.0 / 3.0, "P III {a} → {b}");
}
