//! Exact coefficient ring: Laurent polynomials over the rationals in a declared
//! alphabet of symbolic parameters.

mod expr;
mod linsolve;
mod params;
mod poly;
pub mod univariate;

pub use linsolve::solve_unique;
pub use expr::{expr_names, json_names, parse_expr, parse_rational};
pub use params::{ParamSet, Params};
pub use poly::{Monomial, Poly};

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn ps() -> Params {
        ParamSet::new(&[("x", false), ("y", false), ("L", true), ("beta", false)]).unwrap()
    }

    #[test]
    fn ring_identities() {
        let p = ps();
        let x = Poly::var(&p, "x").unwrap();
        let one = Poly::one(&p);
        assert_eq!(&(&x + &one) * &(&x - &one), &x.pow(2) - &one);
        assert_eq!(&x + &Poly::zero(&p), x);
        let b2 = Poly::parse(&p, "beta/2").unwrap();
        assert_eq!(&b2 * &b2, Poly::parse(&p, "beta^2/4").unwrap());
    }

    #[test]
    fn exact_division() {
        let p = ps();
        let a = Poly::parse(&p, "L^2 + L*beta").unwrap();
        let l = Poly::var(&p, "L").unwrap();
        assert_eq!(a.div_exact(&l).unwrap(), Poly::parse(&p, "L + beta").unwrap());
        let x = Poly::var(&p, "x").unwrap();
        let y = Poly::var(&p, "y").unwrap();
        assert!(x.div_exact(&y).is_err());
        let q = Poly::parse(&p, "(x+y)^3*(x-2y)").unwrap().div_exact(&Poly::parse(&p, "x+y").unwrap()).unwrap();
        assert_eq!(q, Poly::parse(&p, "(x+y)^2*(x-2y)").unwrap());
        let w = Poly::parse(&p, "(L^-1 + x)*(x - y)").unwrap().div_exact(&Poly::parse(&p, "x-y").unwrap()).unwrap();
        assert_eq!(w, Poly::parse(&p, "L^-1 + x").unwrap());
    }

    #[test]
    fn text_and_json_roundtrip() {
        let p = ps();
        let a = Poly::parse(&p, "-3/4 x^2 y L^-2 + 7 beta - 1/9").unwrap();
        let t = a.to_text();
        assert_eq!(Poly::parse(&p, &t).unwrap(), a);
        assert_eq!(Poly::from_json(&p, &a.to_json()).unwrap(), a);
        assert_eq!(Poly::zero(&p).to_text(), "0");
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.31").unwrap(), Rational::from((31, 100)));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), Rational::from((-3, 2000)));
        assert_eq!(parse_rational("6/8").unwrap(), Rational::from((3, 4)));
    }

    #[test]
    fn derivation_leibniz() {
        let p = ps();
        let a = Poly::parse(&p, "x^2*y + beta").unwrap();
        let d = a.derivation(&|i| (i == 0).then(|| Poly::var(&p, "y").unwrap()));
        assert_eq!(d, Poly::parse(&p, "2 x y^2").unwrap());
    }
}
