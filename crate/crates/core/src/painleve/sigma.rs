//! σ-form residuals of the P III and P II Hamiltonians and the recovery of
//! the Painlevé function from a solution.

use rug::Rational;

use crate::error::{Error, Result};
use crate::numeric::Complex;

/// Which σ-form, with its parameters.
#[derive(Clone, Debug)]
pub enum SigmaForm {
    P3 { theta1: Complex, theta2: Complex },
    P2 { theta: Complex },
}

/// `τ(t)` with its first three `t`-derivatives.
#[derive(Clone, Debug)]
pub struct TauJet {
    pub t: Complex,
    pub tau: Complex,
    pub d1: Complex,
    pub d2: Complex,
    pub d3: Complex,
}

/// A function and its first two derivatives at `t`.
#[derive(Clone, Debug)]
pub struct Jet2 {
    pub t: Complex,
    pub f: Complex,
    pub d1: Complex,
    pub d2: Complex,
}

impl TauJet {
    /// `H = (log τ)′` with `H′` and `H″`.
    pub fn log_derivative(&self) -> Result<Jet2> {
        if self.tau.is_zero() {
            return Err(Error::Numeric("τ(t) = 0: logarithmic derivative has a pole".into()));
        }
        let inv = self.tau.recip();
        let h = self.d1.mul(&inv);
        let q2 = self.d2.mul(&inv);
        let q3 = self.d3.mul(&inv);
        let h2 = h.mul(&h);
        let d1 = q2.sub(&h2);
        let d2 = q3.sub(&q2.mul(&h).scale_rational(&Rational::from(3))).add(&h2.mul(&h).scale_rational(&Rational::from(2)));
        Ok(Jet2 { t: self.t.clone(), f: h, d1, d2 })
    }

    /// `h = tH` with `h′ = H + tH′` and `h″ = 2H′ + tH″`.
    pub fn t_log_derivative(&self) -> Result<Jet2> {
        let hh = self.log_derivative()?;
        let t = &self.t;
        Ok(Jet2 {
            t: t.clone(),
            f: t.mul(&hh.f),
            d1: hh.f.add(&t.mul(&hh.d1)),
            d2: hh.d1.scale_rational(&Rational::from(2)).add(&t.mul(&hh.d2)),
        })
    }
}

fn k(n: i64, prec: u32) -> Complex {
    Complex::from_i64(n, prec)
}

/// `(th″)² − (4(h′)² − 1)(h − th′) + 4θ_1θ_2h′ − θ_1² − θ_2²`.
pub fn sigma_p3(theta1: &Complex, theta2: &Complex, h: &Jet2) -> Complex {
    let p = h.f.prec();
    let t = &h.t;
    let th2 = t.mul(&h.d2);
    let a = th2.mul(&th2);
    let b = h.d1.mul(&h.d1).mul(&k(4, p)).sub(&k(1, p)).mul(&h.f.sub(&t.mul(&h.d1)));
    let c = theta1.mul(theta2).mul(&h.d1).mul(&k(4, p));
    a.sub(&b).add(&c).sub(&theta1.mul(theta1)).sub(&theta2.mul(theta2))
}

/// `(H″)² − 2H′(H − tH′) + 4(H′)³ − θ²/4`.
pub fn sigma_p2(theta: &Complex, hh: &Jet2) -> Complex {
    let p = hh.f.prec();
    let a = hh.d2.mul(&hh.d2);
    let b = hh.d1.mul(&hh.f.sub(&hh.t.mul(&hh.d1))).mul(&k(2, p));
    let c = hh.d1.mul(&hh.d1).mul(&hh.d1).mul(&k(4, p));
    a.sub(&b).add(&c).sub(&theta.mul(theta).scale_rational(&Rational::from((1, 4))))
}

/// Residual and the scale it is measured against: `(th″)²` for P III and
/// `(H″)²` for P II.
#[derive(Clone, Debug)]
pub struct Residual {
    pub hamiltonian: Jet2,
    pub residual: Complex,
    pub scale: Complex,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        let s = self.scale.abs();
        if s.is_zero() {
            return f64::INFINITY;
        }
        (self.residual.abs() / s).to_f64()
    }
}

/// σ-form residual of `h = t(log τ)′` (P III) or `H = (log τ)′` (P II).
pub fn sigma_residual(sf: &SigmaForm, tau: &TauJet) -> Result<Residual> {
    match sf {
        SigmaForm::P3 { theta1, theta2 } => {
            let h = tau.t_log_derivative()?;
            let th2 = h.t.mul(&h.d2);
            Ok(Residual { residual: sigma_p3(theta1, theta2, &h), scale: th2.mul(&th2), hamiltonian: h })
        }
        SigmaForm::P2 { theta } => {
            let hh = tau.log_derivative()?;
            Ok(Residual { residual: sigma_p2(theta, &hh), scale: hh.d2.mul(&hh.d2), hamiltonian: hh })
        }
    }
}

/// P III: `λ = −(2th″ + 4θ_1h′ − 2θ_2)/(4(h′)² − 1)` from `h`;
/// P II: `λ = (2H″ + θ/2)/(4H′)` from `H`.
pub fn lambda_recovery(sf: &SigmaForm, h: &Jet2) -> Result<Complex> {
    let p = h.f.prec();
    let tiny = |z: &Complex| z.abs() < rug::Float::with_val(p, rug::Float::i_exp(1, -(p as i32) + 8));
    match sf {
        SigmaForm::P3 { theta1, theta2 } => {
            let den = h.d1.mul(&h.d1).mul(&k(4, p)).sub(&k(1, p));
            if tiny(&den) {
                return Err(Error::Numeric("4(h′)² = 1: λ has a movable singularity here".into()));
            }
            let num = h.t.mul(&h.d2).mul(&k(2, p)).add(&theta1.mul(&h.d1).mul(&k(4, p))).sub(&theta2.mul(&k(2, p)));
            Ok(num.div(&den).neg())
        }
        SigmaForm::P2 { theta } => {
            let den = h.d1.mul(&k(4, p));
            if tiny(&den) {
                return Err(Error::Numeric("H′ = 0: λ has a movable singularity here".into()));
            }
            let num = h.d2.mul(&k(2, p)).add(&theta.scale_rational(&Rational::from((1, 2))));
            Ok(num.div(&den))
        }
    }
}
