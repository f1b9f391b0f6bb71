mod common;

use common::{brute_mgf, random_planar_fixture};
use douglas_core::condensation::{
    condensation_trace, congruent, empty_spec, stats_deltas, BASE_TABLE,
};
use douglas_core::matchgraph::{count_matchings_with_limit, Forced};
use douglas_core::{
    build_region, case_recurrence, condensation_count, dual_graph, formula_count, pick_corners,
    reduce_forced, valid_specs, verify_kuo, BigRational, BigUint, CaseId, CondensationError,
    Condenser, CornerQuad, IdentityForm, MatchGraph, RegionSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(a: u32, d: &[u32]) -> RegionSpec {
    RegionSpec::new(a, d.to_vec())
}

fn kuo_by_brute(g: &MatchGraph, q: &CornerQuad) -> bool {
    let m = |removed: &[usize]| brute_mgf(&g.without(removed));
    m(&[]) * m(&[q.x, q.y, q.z, q.t])
        == m(&[q.x, q.y]) * m(&[q.z, q.t]) + m(&[q.t, q.x]) * m(&[q.y, q.z])
}

#[test]
fn condensation_matches_formula_and_dp() {
    let engine = Condenser::new();
    for s in valid_specs(10) {
        let r = build_region(&s).unwrap();
        let m = engine.count(&s).unwrap();
        assert_eq!(m, formula_count(&r).unwrap(), "{s}");
        if let Ok(dp) = count_matchings_with_limit(&dual_graph(&r), 24) {
            assert_eq!(m, dp, "{s}");
        }
    }
}

#[test]
fn every_spec_up_to_fourteen_terminates() {
    let engine = Condenser::new();
    for s in valid_specs(14) {
        let r = build_region(&s).unwrap();
        assert_eq!(engine.count(&s).unwrap(), formula_count(&r).unwrap(), "{s}");
    }
}

#[test]
fn base_table_is_the_small_regions() {
    let mut small = valid_specs(4);
    small.sort_by(|a, b| (&a.d, a.a).cmp(&(&b.d, b.a)));
    let mut table: Vec<RegionSpec> = BASE_TABLE.iter().map(|(a, d, _)| spec(*a, d)).collect();
    table.sort_by(|a, b| (&a.d, a.a).cmp(&(&b.d, b.a)));
    assert_eq!(small, table);
    for (a, d, m) in BASE_TABLE {
        let r = build_region(&spec(a, d)).unwrap();
        let g = dual_graph(&r);
        assert_eq!(brute_mgf(&g), BigRational::from_integer(m.into()));
        assert!(matches!(
            case_recurrence(&spec(a, d)),
            Err(CondensationError::BaseCase(_))
        ));
    }
}

#[test]
fn named_counts() {
    assert_eq!(
        condensation_count(&spec(2, &[4])).unwrap(),
        BigUint::from(8u8)
    );
    assert_eq!(
        condensation_count(&spec(7, &[4, 2, 5, 4])).unwrap(),
        BigUint::from(1u8) << 29u32
    );
    assert_eq!(
        condensation_count(&empty_spec()).unwrap(),
        BigUint::from(1u8)
    );
    for n in 1..=12u32 {
        assert_eq!(
            condensation_count(&spec(n, &[2 * n])).unwrap(),
            BigUint::from(1u8) << (n * (n + 1) / 2)
        );
    }
}

#[test]
fn kuo_holds_on_region_duals() {
    for s in valid_specs(8) {
        let g = dual_graph(&build_region(&s).unwrap());
        let q = pick_corners(&g).unwrap();
        let k = verify_kuo(&g, &q).unwrap();
        assert!(k.holds, "{s}");
        if g.vertex_count() <= 20 {
            assert!(kuo_by_brute(&g, &q), "{s}");
        }
    }
}

#[test]
fn kuo_holds_on_planar_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let (g, q) = random_planar_fixture(&mut rng);
        assert!(verify_kuo(&g, &q).unwrap().holds);
        assert!(kuo_by_brute(&g, &q));
    }
}

#[test]
fn every_spec_has_a_case() {
    for s in valid_specs(12) {
        if s.total_size() <= 4 {
            continue;
        }
        let rec = case_recurrence(&s).unwrap();
        let arity = match rec.form {
            IdentityForm::Condensation => 3,
            IdentityForm::Multiple { .. } => 1,
        };
        assert_eq!(rec.sub_specs.len(), arity, "{s}");
        let canon = |x: &RegionSpec| x.canonical();
        assert_eq!(canon(&rec.oriented), canon(&s));
        for sub in &rec.sub_specs {
            assert!(sub.total_size() < s.total_size(), "{s} -> {sub}");
        }
    }
}

#[test]
fn case_identities_hold_with_formula_counts() {
    let count = |s: &RegionSpec| {
        if s.d.is_empty() {
            BigUint::from(1u8)
        } else {
            formula_count(&build_region(s).unwrap()).unwrap()
        }
    };
    for s in valid_specs(12) {
        if s.total_size() <= 4 {
            continue;
        }
        let rec = case_recurrence(&s).unwrap();
        let m: Vec<BigUint> = rec.sub_specs.iter().map(count).collect();
        let total = count(&s);
        match rec.form {
            IdentityForm::Condensation => {
                assert_eq!(&total * &m[2], BigUint::from(2u8) * &m[0] * &m[1], "{s}")
            }
            IdentityForm::Multiple { factor } => assert_eq!(total, &m[0] * factor, "{s}"),
        }
    }
}

#[test]
fn delta_balance() {
    for s in valid_specs(10) {
        if s.total_size() <= 4 {
            continue;
        }
        let rec = case_recurrence(&s).unwrap();
        if !rec.case_id.is_case_one() {
            continue;
        }
        let d = stats_deltas(&s).unwrap();
        assert!(d.balance_holds, "{s}");
        for sub in &d.subs {
            assert!(
                sub.agrees || sub.alt_agrees == Some(true),
                "{s} -> {}",
                sub.spec
            );
        }
    }
}

#[test]
fn trace_reports_case_and_kuo() {
    let t = condensation_trace(&Condenser::new(), &spec(7, &[4, 2, 5, 4])).unwrap();
    assert!(t.case_id.unwrap().is_case_one());
    assert_eq!(t.sub_counts.len(), 3);
    assert!(t.identity_holds);
    assert!(t.kuo.unwrap().holds);
    let base = condensation_trace(&Condenser::new(), &spec(1, &[2])).unwrap();
    assert_eq!(base.case_id, None);
}

#[test]
fn case_two_examples() {
    for (s, id) in [
        (spec(1, &[1, 1, 1, 2]), CaseId::II1),
        (spec(2, &[1, 1, 2, 1]), CaseId::II2a),
        (spec(2, &[1, 1, 4]), CaseId::II2bI),
        (spec(2, &[1, 3, 1, 2]), CaseId::II2bII),
        (spec(2, &[3, 1, 1, 2]), CaseId::II2bIII),
    ] {
        match build_region(&s) {
            Ok(_) => assert_eq!(case_recurrence(&s).unwrap().case_id, id, "{s}"),
            Err(e) => panic!("{s}: {e}"),
        }
    }
}

fn reduced(g: &MatchGraph, removed: &[usize]) -> Option<MatchGraph> {
    match reduce_forced(&g.without(removed)) {
        Forced::Reduced { graph, .. } => Some(graph),
        Forced::Zero => None,
    }
}

#[test]
fn single_layer_subgraphs_are_smaller_regions() {
    for n in 3..=6u32 {
        let s = spec(n, &[2 * n]);
        let rec = case_recurrence(&s).unwrap();
        assert_eq!(rec.case_id, CaseId::I1);
        let g = dual_graph(&build_region(&s).unwrap());
        let q = pick_corners(&g).unwrap();
        let sub_dual = |s: &RegionSpec| dual_graph(&build_region(s).unwrap());
        let g1 = sub_dual(&rec.sub_specs[0]);
        let g3 = sub_dual(&rec.sub_specs[2]);
        for pair in [[q.x, q.y], [q.z, q.t], [q.t, q.x], [q.y, q.z]] {
            assert!(congruent(&reduced(&g, &pair).unwrap(), &g1), "{s}");
        }
        assert!(
            congruent(&reduced(&g, &[q.x, q.y, q.z, q.t]).unwrap(), &g3),
            "{s}"
        );
    }
}
