use icb_core::numeric::Complex;
use icb_core::painleve::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::Float;

const P: u32 = 128;

fn c(s: &str) -> Complex {
    Complex::parse(s, P).unwrap()
}

fn re(x: f64) -> Complex {
    Complex::from_f64(x, 0.0, P)
}

#[test]
fn barnes_integer_and_half_integer_ladders() {
    for (x, g) in [(1, 1), (2, 1), (3, 1), (4, 2), (5, 12), (6, 288)] {
        assert!(barnes_g(&re(x as f64), P).unwrap().rel_diff(&re(g as f64)) < 1e-36, "G({x})");
    }
    for x in [0.0, -1.0, -4.0] {
        assert!(barnes_g(&re(x), P).unwrap().is_zero());
    }
    // G(11/2)/G(7/2) = Γ(7/2)Γ(9/2) = (15√π/8)(105√π/16)
    let pi = Float::with_val(P, Constant::Pi);
    let want = Complex::from_real(pi * 15u32 * 105u32 / 128u32);
    let got = barnes_g(&c("5.5"), P).unwrap().div(&barnes_g(&c("3.5"), P).unwrap());
    assert!(got.rel_diff(&want) < 1e-35);
}

#[test]
fn gamma_matches_mpfr_on_the_real_line() {
    for x in [0.3, 1.0, 2.5, 7.25, -0.5, -2.5] {
        let want = Float::with_val(P, x).gamma();
        assert!(gamma(&re(x), P).unwrap().rel_diff(&Complex::from_real(want)) < 1e-35, "Γ({x})");
    }
    assert!(gamma(&re(-3.0), P).is_err());
}

#[test]
fn barnes_functional_equation_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x = Complex::from_f64(rng.gen_range(1.0..2.0), rng.gen_range(-3.0..3.0), P);
        let lhs = barnes_g(&x.add(&Complex::one(P)), P).unwrap().div(&barnes_g(&x, P).unwrap());
        assert!(lhs.rel_diff(&gamma(&x, P).unwrap()) < 1e-32, "x = {x}");
    }
}

#[test]
fn barnes_pm_is_the_product() {
    let (x, y) = (c("0.3"), c("0.12"));
    let one = Complex::one(P);
    let want = barnes_g(&one.add(&x).add(&y), P).unwrap().mul(&barnes_g(&one.add(&x).sub(&y), P).unwrap());
    assert!(barnes_pm(&x, &y, P).unwrap().rel_diff(&want) < 1e-35);
}

fn exp_jet(t: f64, k: f64) -> TauJet {
    let v = Complex::from_f64(k * t, 0.0, P).exp();
    TauJet { t: re(t), tau: v.clone(), d1: v.mul(&re(k)), d2: v.mul(&re(k * k)), d3: v.mul(&re(k * k * k)) }
}

#[test]
fn sigma_controls() {
    let (t1, t2) = (c("0.31"), c("0.17"));
    let sf = SigmaForm::P3 { theta1: t1.clone(), theta2: t2.clone() };
    // h = t/2 from τ = e^{t/2}
    for t in [3.0, 40.0] {
        let r = sigma_residual(&sf, &exp_jet(t, 0.5)).unwrap();
        let d = t1.sub(&t2);
        assert!(r.residual.rel_diff(&d.mul(&d).neg()) < 1e-20);
    }
    // P II: τ = 1 gives H = 0, residual −θ²/4, zero at θ = 0
    let one = exp_jet(5.0, 0.0);
    let r = sigma_residual(&SigmaForm::P2 { theta: c("0.4") }, &one).unwrap();
    assert!(r.residual.rel_diff(&c("-0.04")) < 1e-30);
    assert!(sigma_residual(&SigmaForm::P2 { theta: c("0") }, &one).unwrap().residual.is_zero());
    let zero = TauJet { tau: Complex::zero(P), ..one.clone() };
    assert!(sigma_residual(&sf, &zero).is_err());
}

#[test]
fn lambda_recovery_guards() {
    let sf = SigmaForm::P3 { theta1: c("0.31"), theta2: c("0.17") };
    let h = exp_jet(4.0, 0.5).t_log_derivative().unwrap();
    assert!(lambda_recovery(&sf, &h).is_err());
    let zero = exp_jet(4.0, 0.0).log_derivative().unwrap();
    assert!(lambda_recovery(&SigmaForm::P2 { theta: c("0") }, &zero).is_err());
    // h = t: h′ = 1, h″ = 0 gives λ = −(4θ_1 − 2θ_2)/3
    let h = Jet2 { t: re(2.0), f: re(2.0), d1: re(1.0), d2: re(0.0) };
    let want = c("0.31").mul(&re(4.0)).sub(&c("0.17").mul(&re(2.0))).div(&re(-3.0));
    assert!(lambda_recovery(&sf, &h).unwrap().rel_diff(&want) < 1e-30);
}
