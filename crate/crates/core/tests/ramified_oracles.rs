//! Independent recomputations: the rank-zero operator from its defining
//! relations by a direct linear solve, and descendant fields by brute-force
//! mode expansion of `T(z)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use icb_core::coeffring::{solve_unique, ParamSet, Params, Poly};
use icb_core::fixtures::{half_rank_input, fixture_params};
use icb_core::ramified::{descendant_series, solve_ramified, BetaSpec, C0Mode, Grid, RamifiedInput, RamifiedSolution};
use icb_core::virasoro::{IrregularModule, ModuleVector, Partition};
use rug::Rational;

fn p(ps: &Params, s: &str) -> Poly {
    Poly::parse(ps, s).unwrap()
}

/// `v_K` of `z^α e^{b1/z + b2/z²} Σ v_k z^k` into `M_{Λ'}` (rank 2) by solving
/// `L̃'_n v_K = (α+(n+1)Δ+K−n) v_{K−n} − b1 v_{K−n+1} − 2 b2 v_{K−n+2}` for
/// `n = 2..6` over all words of level ≤ 4, with `c_∅ = 0`. Consistency at
/// `n = 2` forces `b1 = B b2 / C`.
fn rank_zero_oracle(module: &Arc<IrregularModule>, ps: &Params, kmax: usize) -> (Vec<ModuleVector>, Poly) {
    let (d, b2) = (p(ps, "D"), p(ps, "b2"));
    let b1 = p(ps, "B b2").div_exact(&p(ps, "C")).unwrap();
    let words: Vec<Partition> = (1..=4).flat_map(Partition::all_of).collect();
    let mut v = vec![ModuleVector::vacuum(module)];
    let mut alpha = None;
    for k in 1..=kmax as i64 {
        let with_alpha = alpha.is_none() && k >= 2;
        let mut cols: Vec<Vec<(i64, ModuleVector)>> = Vec::new();
        for w in &words {
            cols.push((2..=6).map(|n| (n, ModuleVector::basis(module, w.clone()).apply_shifted(n))).collect());
        }
        if with_alpha {
            cols.push((2..=6).map(|n| (n, if k - n >= 0 { v[(k - n) as usize].scale(&Poly::from_i64(ps, -1)) } else { ModuleVector::zero(module) })).collect());
        }
        let a_known = alpha.clone().unwrap_or_else(|| Poly::zero(ps));
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for n in 2..=6i64 {
            let mut f = ModuleVector::zero(module);
            let idx = |j: i64| (j >= 0 && j < k).then(|| v[j as usize].clone());
            if let Some(x) = idx(k - n) {
                let s = &(&a_known + &d.scale_i64(n + 1)) + &Poly::from_i64(ps, k - n);
                f.add_scaled(&x, &s);
            }
            if let Some(x) = idx(k - n + 1) {
                f.add_scaled(&x, &-&b1);
            }
            if let Some(x) = idx(k - n + 2) {
                f.add_scaled(&x, &b2.scale_i64(-2));
            }
            let mut targets: Vec<Partition> = f.terms().keys().cloned().collect();
            for c in &cols {
                targets.extend(c[(n - 2) as usize].1.terms().keys().cloned());
            }
            targets.sort();
            targets.dedup();
            for t in targets {
                rows.push(cols.iter().map(|c| c[(n - 2) as usize].1.coeff(&t)).collect::<Vec<_>>());
                rhs.push(f.coeff(&t));
            }
        }
        let x = solve_unique(&rows, &rhs).unwrap();
        let vk = ModuleVector::from_terms(module, words.iter().cloned().zip(x.iter().cloned()));
        if with_alpha {
            alpha = Some(x.last().unwrap().clone());
        }
        v.push(vk);
    }
    (v, alpha.unwrap())
}

#[test]
fn integer_grid_reproduces_rank_zero_operator() {
    let ps = ParamSet::new(&[("A", false), ("B", false), ("C", true), ("b2", false), ("D", false), ("c", false)]).unwrap();
    let inp = RamifiedInput {
        grid: Grid::Integer,
        ..RamifiedInput::new(
            2,
            vec![p(&ps, "A"), p(&ps, "B"), p(&ps, "C")],
            p(&ps, "D"),
            p(&ps, "c"),
            vec![BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "B b2").div_exact(&p(&ps, "C")).unwrap()), BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "b2"))],
            C0Mode::Values(vec![Poly::zero(&ps); 4]),
            4,
        )
    };
    let sol = solve_ramified(&inp).unwrap();
    let free_b1 = RamifiedInput { beta: vec![BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "B")), BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "b2"))], ..inp.clone() };
    assert!(solve_ramified(&free_b1).is_err());
    let (v, alpha) = rank_zero_oracle(&sol.module, &sol.params, 2);
    assert!(sol.v[1].is_zero() && sol.v[3].is_zero());
    assert_eq!(sol.v[2], v[1]);
    assert!(sol.alpha_determined);
    assert_eq!(sol.alpha, alpha.embed(&sol.params).unwrap());
    let alpha_free = sol.params.index_of("alpha").unwrap();
    let v2 = sol.v[4].map_coeffs(|c| Ok(c.clone())).unwrap();
    assert!(v2.terms().values().all(|c| !c.contains_var(alpha_free)));
    assert_eq!(v2, v[2]);
}

type Series = BTreeMap<i64, ModuleVector>;

fn add_into(acc: &mut Series, s: &Series, k: &Poly, shift: i64) {
    for (m, v) in s {
        let e = acc.entry(m + shift).or_insert_with(|| ModuleVector::zero(v.module()));
        e.add_scaled(v, k);
    }
}

/// `z∂` of `z^α e^{b/√z} Σ S_m z^{m/2}` for half rank.
fn euler(sol: &RamifiedSolution, s: &Series) -> Series {
    let ps = &sol.params;
    let mut out = Series::new();
    for (m, v) in s {
        out.insert(*m, v.scale(&(&sol.alpha + &Poly::constant(ps, Rational::from((*m, 2))))));
    }
    add_into(&mut out, s, &sol.beta[0].scale(&Rational::from((-1, 2))), -1);
    out
}

/// `(L_{−2}·Φ)(z)|Λ⟩ = Σ_{k≤−2} z^{−k−2} L_k Φ|Λ⟩ + Σ_{k≥−1} z^{−k−2} Φ L_k|Λ⟩` for `r = 1`,
/// with `Φ L_k|Λ⟩ = (L_k − z^k(z∂ + (k+1)Δ))Φ|Λ⟩` for `k = −1, 0` and `Λ_k Φ|Λ⟩` above.
fn l_minus_two_oracle(sol: &RamifiedSolution, cutoff: i64) -> Series {
    let ps = &sol.params;
    let base: Series = sol.v.iter().enumerate().map(|(m, v)| (m as i64, v.clone())).collect();
    let e = euler(sol, &base);
    let one = Poly::one(ps);
    let mut out = Series::new();
    for k in (-cutoff)..=-2 {
        let lk: Series = base.iter().map(|(m, v)| (*m, v.apply_l(k))).collect();
        add_into(&mut out, &lk, &one, 2 * (-k - 2));
    }
    for k in [-1i64, 0] {
        let mut phi_lk: Series = base.iter().map(|(m, v)| (*m, v.apply_l(k))).collect();
        add_into(&mut phi_lk, &e, &Poly::from_i64(ps, -1), 2 * k);
        add_into(&mut phi_lk, &base, &sol.delta.scale_i64(-(k + 1)), 2 * k);
        add_into(&mut out, &phi_lk, &one, 2 * (-k - 2));
    }
    add_into(&mut out, &base, &sol.module.weight(1), 2 * (-1 - 2));
    out
}

#[test]
fn descendants_match_mode_expansion() {
    let ps = fixture_params();
    let sol = solve_ramified(&half_rank_input(&ps, 8)).unwrap();
    let m_top = 8i64;
    // empty partition: the operator itself
    let s0 = descendant_series(&sol, &Partition::empty(), m_top).unwrap();
    for (m, v) in sol.v.iter().enumerate() {
        assert_eq!(s0.coeff(m as i64).cloned().unwrap_or_else(|| ModuleVector::zero(&sol.module)), *v);
    }
    // L_{−1}: term-by-term derivative
    let base: Series = sol.v.iter().enumerate().map(|(m, v)| (m as i64, v.clone())).collect();
    let e = euler(&sol, &base);
    let d1 = descendant_series(&sol, &Partition::new(vec![1]).unwrap(), m_top - 3).unwrap();
    for m in -2..=m_top - 3 {
        let want = e.get(&(m + 2)).cloned().unwrap_or_else(|| ModuleVector::zero(&sol.module));
        assert_eq!(d1.coeff(m).cloned().unwrap_or_else(|| ModuleVector::zero(&sol.module)), want, "m={m}");
    }
    // L_{−2}: two cutoffs of the brute-force expansion agree with each other and with the engine
    let top = m_top - 6;
    let d2 = descendant_series(&sol, &Partition::new(vec![2]).unwrap(), top).unwrap();
    let o1 = l_minus_two_oracle(&sol, m_top + 4);
    let o2 = l_minus_two_oracle(&sol, m_top + 6);
    let zero = ModuleVector::zero(&sol.module);
    let mut checked = 0;
    for m in -6..=top {
        let a = o1.get(&m).unwrap_or(&zero);
        assert_eq!(a, o2.get(&m).unwrap_or(&zero), "cutoff instability at m={m}");
        assert_eq!(d2.coeff(m).unwrap_or(&zero), a, "m={m}");
        checked += 1;
    }
    assert!(checked >= 8);
    assert!(descendant_series(&sol, &Partition::new(vec![2]).unwrap(), m_top).is_err());
}
