
use icb_core::coeffring::{ParamSet, Params, Poly};
use icb_core::fixtures::{compare_vectors, half_rank_input, three_halves_input, fixture_params, HALF_V, THREE_HALVES_V};
use icb_core::ramified::{
    preset_c0, solve_ramified, BetaSpec, C0Mode, Preset, RamifiedInput, RamifiedSolution,
};
use icb_core::virasoro::ModuleVector;

fn p(ps: &Params, s: &str) -> Poly {
    Poly::parse(ps, s).unwrap()
}

#[test]
fn presets_at_special_values() {
    let ps = fixture_params();
    let half = preset_c0(Preset::HalfRank, &p(&ps, "0"), &p(&ps, "c"), &p(&ps, "D")).unwrap();
    assert!(half[0].is_zero());
    assert_eq!(half[1], p(&ps, "D (D - c - 2)/64"));
    let three_halves = preset_c0(Preset::ThreeHalves, &p(&ps, "b"), &p(&ps, "c"), &p(&ps, "D")).unwrap();
    assert!(three_halves[0].is_zero());
    assert_eq!(three_halves[2], p(&ps, "153 b^3/256 - b (5c + 108 D - 11)/192"));
}

#[test]
fn order_zero_is_the_vacuum() {
    let ps = fixture_params();
    let sol = solve_ramified(&half_rank_input(&ps, 0)).unwrap();
    assert_eq!(sol.v.len(), 1);
    assert_eq!(sol.v[0], ModuleVector::vacuum(&sol.module));
    assert!(sol.certificate.is_empty());
}

#[test]
fn printed_examples_reproduced_and_alpha_left_free() {
    let ps = fixture_params();
    let s36 = solve_ramified(&half_rank_input(&ps, 3)).unwrap();
    assert!(!s36.alpha_determined);
    let a36 = p(&ps, "b^2/32 - 3D/2");
    assert!(compare_vectors(&s36, HALF_V, &a36).unwrap().is_empty());
    // a wrong α must be caught
    assert!(!compare_vectors(&s36, HALF_V, &p(&ps, "b^2/32")).unwrap().is_empty());
    let s38 = solve_ramified(&three_halves_input(&ps, 6)).unwrap();
    assert!(compare_vectors(&s38, THREE_HALVES_V, &p(&ps, "27 b^2/32 - 5D/2")).unwrap().is_empty());
}

#[test]
fn fixed_alpha_is_respected() {
    let ps = fixture_params();
    let mut inp = half_rank_input(&ps, 3);
    inp.alpha = Some(p(&ps, "b^2/32 - 3D/2"));
    let sol = solve_ramified(&inp).unwrap();
    assert!(sol.alpha_determined);
    assert!(compare_vectors(&sol, HALF_V, &sol.alpha.clone()).unwrap().is_empty());
}

#[test]
fn slack_extension_vanishes_and_denominators_stay_on_top_weight() {
    let ps = ParamSet::new(&[("L", true), ("K", false), ("b", false), ("c", false), ("D", false)]).unwrap();
    // r = 2 with symbolic Λ_2 = K, Λ_3 = L
    let inp = RamifiedInput {
        slack: 2,
        ..RamifiedInput::new(
            2,
            vec![p(&ps, "K"), p(&ps, "L"), p(&ps, "0")],
            p(&ps, "D"),
            p(&ps, "c"),
            vec![BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "0")), BetaSpec::Known(p(&ps, "b"))],
            C0Mode::Symbolic,
            4,
        )
    };
    let sol = solve_ramified(&inp).unwrap();
    assert!(sol.degree_bound_holds(), "levels beyond m must vanish");
    assert!(sol.denominators_ok());
    let l = ps.index_of("L").unwrap();
    assert!(sol.denominator_vars().iter().all(|&i| sol.params.name(i) == ps.name(l)));
}

#[test]
fn lower_betas_and_c0_stay_free() {
    let ps = fixture_params();
    let mut inp = three_halves_input(&ps, 6);
    inp.beta[0] = BetaSpec::Solve;
    inp.beta[1] = BetaSpec::Solve;
    inp.c0 = C0Mode::Symbolic;
    let sol = solve_ramified(&inp).unwrap();
    // existence for arbitrary α, β, c_∅: nothing is forced and nothing is inconsistent
    assert!(sol.pending.is_empty());
    for name in ["alpha", "beta_1", "beta_2", "c0_1", "c0_6"] {
        let i = sol.params.index_of(name).unwrap();
        let appears = sol.v.iter().any(|v| v.terms().values().any(|c| c.contains_var(i)));
        assert!(appears, "{name} should remain a free parameter of the solution");
    }
}

#[test]
fn json_round_trip() {
    let ps = fixture_params();
    let sol = solve_ramified(&three_halves_input(&ps, 4)).unwrap();
    let back = RamifiedSolution::from_json(&sol.to_json()).unwrap();
    assert_eq!(back.v, sol.v);
    assert_eq!(back.alpha, sol.alpha);
    assert_eq!(back.certificate, sol.certificate);
    assert_eq!(back.to_json(), sol.to_json());
}

#[test]
fn rejects_invalid_inputs() {
    let ps = fixture_params();
    let mut inp = half_rank_input(&ps, 2);
    inp.lambda = vec![p(&ps, "0"), p(&ps, "0")];
    assert!(solve_ramified(&inp).is_err());
    let mut inp = half_rank_input(&ps, 2);
    inp.lambda = vec![p(&ps, "1"), p(&ps, "1")];
    assert!(solve_ramified(&inp).unwrap_err().is_usage());
    let mut inp = three_halves_input(&ps, 2);
    inp.c0 = C0Mode::Preset(Preset::HalfRank);
    assert!(solve_ramified(&inp).unwrap_err().is_usage());
}
