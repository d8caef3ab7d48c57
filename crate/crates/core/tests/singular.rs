use icb_core::coeffring::univariate::{divrem, gcd, rational_roots};
use icb_core::coeffring::{ParamSet, Poly};
use icb_core::fixtures::singular_beta_family;
use icb_core::ramified::{singular_condition_solve, BetaSpec, C0Mode, RamifiedInput};
use rug::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

#[test]
fn rational_roots_with_multiplicity() {
    // (x − 1)² (2x + 1) (x² + 1)
    let a = mul(&mul(&mul(&[q(-1, 1), q(1, 1)], &[q(-1, 1), q(1, 1)]), &[q(1, 1), q(2, 1)]), &[q(1, 1), q(0, 1), q(1, 1)]);
    let (roots, rest) = rational_roots(&a).unwrap();
    assert_eq!(roots, vec![(q(-1, 2), 1), (q(1, 1), 2)]);
    assert_eq!(rest, 2);
    assert!(rational_roots(&[]).is_err());
    let (none, rest) = rational_roots(&[q(-2, 1), q(0, 1), q(1, 1)]).unwrap();
    assert!(none.is_empty() && rest == 2);
}

#[test]
fn gcd_and_division() {
    let f = mul(&[q(3, 1), q(1, 1)], &[q(-1, 2), q(1, 1)]);
    let g = mul(&[q(3, 1), q(1, 1)], &[q(5, 1), q(0, 1), q(1, 1)]);
    assert_eq!(gcd(&f, &g), vec![q(3, 1), q(1, 1)]);
    let (quo, rem) = divrem(&g, &[q(3, 1), q(1, 1)]);
    assert!(rem.is_empty());
    assert_eq!(quo, vec![q(5, 1), q(0, 1), q(1, 1)]);
}

#[test]
fn singular_counts_equal_pq_at_c_one() {
    for (p, qq) in [(1u32, 1u32), (1, 2), (2, 1), (1, 3), (2, 2)] {
        let (betas, count, expected) = singular_beta_family(p, qq).unwrap();
        assert_eq!(count, expected, "(p,q)=({p},{qq})");
        assert_eq!(expected, p * qq);
        assert!(betas.iter().all(|b| *b == -b.clone() || betas.contains(&Rational::from(-b))), "β family not symmetric: {betas:?}");
    }
}

#[test]
fn identity_operator_is_trivial() {
    // χ_{1,1} = L_{−1}: only β = 0, α = 0
    let ps = ParamSet::plain(&["t"]).unwrap();
    let c = |s: &str| Poly::parse(&ps, s).unwrap();
    let tpl = RamifiedInput::new(1, vec![c("1"), c("0")], c("0"), c("1"), vec![BetaSpec::Solve], C0Mode::Symbolic, 4);
    let rep = singular_condition_solve(1, 1, &Poly::one(&ps), &tpl).unwrap();
    assert_eq!(rep.count(), 1);
    assert!(rep.solutions[0].beta[0].is_zero());
    assert!(rep.solutions[0].alpha.is_zero());
}
