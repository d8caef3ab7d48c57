use icb_core::coeffring::{ParamSet, Params, Poly};
use icb_core::virasoro::{
    pair_left, project_shifted, singular_vector, triangular_diagonal, IrregularModule, ModuleVector, Partition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn rank_module(r: u32) -> (Params, Arc<IrregularModule>) {
    let mut gens: Vec<(String, bool)> = (r..=2 * r).map(|n| (format!("Lam{n}"), n == 2 * r)).collect();
    gens.push(("c".into(), false));
    let ps = ParamSet::new(&gens).unwrap();
    let lam = (r..=2 * r).map(|n| Poly::var(&ps, &format!("Lam{n}")).unwrap()).collect();
    let m = IrregularModule::new(r, lam, Poly::var(&ps, "c").unwrap()).unwrap();
    (ps, m)
}

fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn eigen_rule_and_hand_commutation() {
    let (ps, m) = rank_module(1);
    let vac = ModuleVector::vacuum(&m);
    assert_eq!(vac.apply_l(2).vacuum_coeff(), Poly::var(&ps, "Lam2").unwrap());
    assert!(vac.apply_l(3).is_zero());
    // L_2 L_0 |Λ⟩ = Λ_2 L_0|Λ⟩ + 2Λ_2 |Λ⟩
    let w = ModuleVector::basis(&m, part(&[1])).apply_l(2);
    let l2 = Poly::var(&ps, "Lam2").unwrap();
    assert_eq!(w.coeff(&part(&[1])), l2);
    assert_eq!(w.vacuum_coeff(), l2.scale_i64(2));
    assert_eq!(w.terms().len(), 2);
}

#[test]
fn verma_central_term() {
    let ps = ParamSet::plain(&["D", "c"]).unwrap();
    let m = IrregularModule::verma(Poly::var(&ps, "D").unwrap(), Poly::var(&ps, "c").unwrap()).unwrap();
    let vac = ModuleVector::vacuum(&m);
    let lhs = vac.apply_l(-2).apply_l(2).sub(&vac.apply_l(2).apply_l(-2));
    assert_eq!(lhs.vacuum_coeff(), Poly::parse(&ps, "4D + c/2").unwrap());
    assert_eq!(lhs.terms().len(), 1);
}

#[test]
fn bracket_consistency_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in 0..=2u32 {
        let (ps, m) = if r == 0 {
            let ps = ParamSet::plain(&["D", "c"]).unwrap();
            let m = IrregularModule::verma(Poly::var(&ps, "D").unwrap(), Poly::var(&ps, "c").unwrap()).unwrap();
            (ps, m)
        } else {
            rank_module(r)
        };
        let c = m.central_charge().clone();
        for _ in 0..40 {
            let a: i64 = rng.gen_range(-4..=4);
            let b: i64 = rng.gen_range(-4..=4);
            let size = rng.gen_range(0..=3u32);
            let choices = Partition::all_of(size);
            let w = choices[rng.gen_range(0..choices.len())].clone();
            let v = ModuleVector::basis(&m, w);
            let lhs = v.apply_l(b).apply_l(a).sub(&v.apply_l(a).apply_l(b));
            let mut rhs = v.apply_l(a + b).scale(&Poly::from_i64(&ps, a - b));
            if a + b == 0 {
                rhs.add_scaled(&v, &c.scale(&rug::Rational::from((a * a * a - a, 12))));
            }
            assert_eq!(lhs, rhs, "r={r} a={a} b={b}");
        }
    }
}

#[test]
fn triangular_pairing_off_diagonal_vanishes() {
    for r in 1..=2u32 {
        let (_, m) = rank_module(r);
        for mu in Partition::all_up_to(4) {
            for nu in Partition::all_up_to(4) {
                if nu.size() < mu.size() {
                    continue;
                }
                let val = project_shifted(&nu, r as i64, &ModuleVector::basis(&m, mu.clone()));
                if nu == mu {
                    assert_eq!(val, triangular_diagonal(&m, &nu), "r={r} nu={nu}");
                } else {
                    assert!(val.is_zero(), "r={r} nu={nu} mu={mu}: {val}");
                }
            }
        }
    }
}

#[test]
fn singular_vectors_at_level_two() {
    let ps = ParamSet::new(&[("t", true)]).unwrap();
    let t = Poly::var(&ps, "t").unwrap();
    let chi = singular_vector(2, 1, &t).unwrap();
    assert_eq!(chi.coeff(&part(&[1, 1])), Poly::one(&ps));
    assert_eq!(chi.coeff(&part(&[2])), -&t);
    let chi = singular_vector(1, 2, &t).unwrap();
    assert_eq!(chi.coeff(&part(&[2])), Poly::parse(&ps, "-t^-1").unwrap());
    for (p, q) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2), (3, 2), (2, 3)] {
        let chi = singular_vector(p, q, &t).unwrap();
        assert!(chi.apply_l(1).is_zero(), "({p},{q})");
        assert!(chi.apply_l(2).is_zero(), "({p},{q})");
    }
}

#[test]
fn pairing_rules() {
    let (ps, m) = rank_module(1);
    let dp = Poly::parse(&ps, "Lam1").unwrap();
    let v = ModuleVector::from_terms(
        &m,
        vec![(Partition::empty(), Poly::from_i64(&ps, 3)), (part(&[1, 1]), Poly::one(&ps)), (part(&[2]), Poly::one(&ps))],
    );
    assert_eq!(pair_left(&dp, &v).unwrap(), Poly::parse(&ps, "3 + Lam1^2").unwrap());
}
