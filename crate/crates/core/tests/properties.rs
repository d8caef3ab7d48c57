use std::collections::HashMap;

use icb_core::coeffring::{parse_expr, ParamSet, Params, Poly};
use icb_core::numeric::Complex;
use icb_core::virasoro::{IrregularModule, ModuleVector, Partition};
use proptest::prelude::*;
use rug::Rational;

const PREC: u32 = 192;

fn params() -> Params {
    // y is a unit, so negative powers of y are allowed
    ParamSet::new(&[("x", false), ("y", true), ("z", false)]).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let term = (-6i64..=6, 1i64..=4, 0i32..=2, -2i32..=2, 0i32..=2);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let ps = params();
        Poly::from_terms(&ps, terms.into_iter().map(|(n, d, a, b, c)| (vec![a, b, c], Rational::from((n, d))))).unwrap()
    })
}

fn bindings() -> impl Strategy<Value = HashMap<String, Complex>> {
    let v = || (-3.0f64..3.0, -3.0f64..3.0);
    (v(), v(), v()).prop_filter("y nonzero", |(_, y, _)| y.0.abs() + y.1.abs() > 0.1).prop_map(|(x, y, z)| {
        HashMap::from([
            ("x".to_string(), Complex::from_f64(x.0, x.1, PREC)),
            ("y".to_string(), Complex::from_f64(y.0, y.1, PREC)),
            ("z".to_string(), Complex::from_f64(z.0, z.1, PREC)),
        ])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let ps = params();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Poly::zero(&ps), a.clone());
        prop_assert_eq!(&a * &Poly::one(&ps), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly_strategy(), b in poly_strategy(), env in bindings()) {
        let ea = a.eval(&env, PREC).unwrap();
        let eb = b.eval(&env, PREC).unwrap();
        let sum = (&a + &b).eval(&env, PREC).unwrap();
        let prod = (&a * &b).eval(&env, PREC).unwrap();
        let scale = 1.0 + ea.abs().to_f64() * (1.0 + eb.abs().to_f64());
        prop_assert!(sum.sub(&ea.add(&eb)).abs().to_f64() <= 1e-40 * scale);
        prop_assert!(prod.sub(&ea.mul(&eb)).abs().to_f64() <= 1e-40 * scale);
    }

    #[test]
    fn text_and_json_round_trip(a in poly_strategy()) {
        let ps = params();
        prop_assert_eq!(parse_expr(&ps, &a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(Poly::from_json(&ps, &a.to_json()).unwrap(), a);
    }

    #[test]
    fn substitution_commutes_with_products(a in poly_strategy(), b in poly_strategy(), v in poly_strategy()) {
        // a and b are polynomial in x, so substituting for x is a homomorphism
        let lhs = (&a * &b).substitute(0, &v).unwrap();
        let rhs = &a.substitute(0, &v).unwrap() * &b.substitute(0, &v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn virasoro_bracket(r in 0u32..=2, a in -4i64..=4, b in -4i64..=4, size in 0u32..=3, pick in 0usize..64) {
        let (ps, m) = module(r);
        let choices = Partition::all_of(size);
        let v = ModuleVector::basis(&m, choices[pick % choices.len()].clone());
        let lhs = v.apply_l(b).apply_l(a).sub(&v.apply_l(a).apply_l(b));
        let mut rhs = v.apply_l(a + b).scale(&Poly::from_i64(&ps, a - b));
        if a + b == 0 {
            rhs.add_scaled(&v, &m.central_charge().scale(&Rational::from((a * a * a - a, 12))));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

fn module(r: u32) -> (Params, std::sync::Arc<IrregularModule>) {
    if r == 0 {
        let ps = ParamSet::plain(&["D", "c"]).unwrap();
        let m = IrregularModule::verma(Poly::var(&ps, "D").unwrap(), Poly::var(&ps, "c").unwrap()).unwrap();
        return (ps, m);
    }
    let mut gens: Vec<(String, bool)> = (r..=2 * r).map(|n| (format!("L{n}"), n == 2 * r)).collect();
    gens.push(("c".into(), false));
    let ps = ParamSet::new(&gens).unwrap();
    let lam = (r..=2 * r).map(|n| Poly::var(&ps, &format!("L{n}")).unwrap()).collect();
    let m = IrregularModule::new(r, lam, Poly::var(&ps, "c").unwrap()).unwrap();
    (ps, m)
}
