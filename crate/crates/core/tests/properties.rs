use mbqc_core::cluster::{
    build_cluster, cocycle, lu_transition, projective_rep, reference_input, stabilizer_deviation, Boundary,
    ClusterSpec, LuPattern,
};
use mbqc_core::engine::{
    adjoint_lift, run_plan, ByproductWord, MeasurementPlan, PlanStep, ResourceSpec, RunMode, WordTable,
};
use mbqc_core::linalg::{self, Matrix, C64};
use mbqc_core::mps::{validate_channel, KrausSet};
use mbqc_core::ops::{gcd, gellmann_basis, weyl, weyl_words_x_major};
use proptest::prelude::*;

fn hermitian(n: usize, coeffs: &[f64]) -> Matrix {
    let basis = gellmann_basis(n).unwrap();
    let mut h = Matrix::zeros(n);
    for (g, c) in basis.elements().iter().zip(coeffs) {
        h = &h + &g.scale_real(*c);
    }
    h
}

fn random_unitary(n: usize, coeffs: &[f64]) -> Matrix {
    hermitian(n, coeffs).exp_hermitian(1.0)
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, len)
}

fn aklt_spec() -> impl Strategy<Value = ResourceSpec> {
    prop_oneof![
        Just(ResourceSpec::Spin1),
        Just(ResourceSpec::Su { n: 3, transpose: false }),
        Just(ResourceSpec::Su { n: 3, transpose: true }),
        Just(ResourceSpec::SoFund { l: 2 }),
        Just(ResourceSpec::Sp { m: 1 }),
    ]
}

fn cluster_spec() -> impl Strategy<Value = ResourceSpec> {
    (2usize..=5).prop_flat_map(|d| {
        (1..d).prop_filter("coprime", move |x| gcd(*x, d) == 1).prop_map(move |x| ResourceSpec::Cluster {
            d,
            x,
            y: None,
        })
    })
}

/// A short plan of wire and gate steps with random angles.
fn plan_for(spec: ResourceSpec, picks: &[(bool, usize, f64, bool)]) -> MeasurementPlan {
    let r = spec.build().unwrap();
    let labels = r.generator_labels().unwrap();
    let steps = picks
        .iter()
        .map(|&(is_gate, g, theta, adaptive)| {
            if is_gate {
                PlanStep::Gate { generator: labels[g % labels.len()].clone(), theta, adaptive }
            } else {
                PlanStep::Wire
            }
        })
        .collect();
    MeasurementPlan::new(spec, reference_input(r.bond_dim()), steps)
}

fn picks(max: usize) -> impl Strategy<Value = Vec<(bool, usize, f64, bool)>> {
    prop::collection::vec((any::<bool>(), 0usize..64, -3.0f64..3.0, any::<bool>()), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn branch_probabilities_sum_to_one(spec in prop_oneof![aklt_spec(), cluster_spec()], p in picks(2)) {
        let plan = plan_for(spec, &p);
        let branches = run_plan(&plan, RunMode::Enumerate).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for b in &branches {
            let out = b.net_operator.apply(&plan.input);
            prop_assert!((linalg::norm(&out).powi(2) - b.probability).abs() < 1e-12);
        }
    }

    #[test]
    fn logical_gate_reproduces_the_output(spec in prop_oneof![aklt_spec(), cluster_spec()], p in picks(2)) {
        let plan = plan_for(spec, &p);
        let input = linalg::normalized(&plan.input).unwrap();
        for b in run_plan(&plan, RunMode::Enumerate).unwrap() {
            if b.probability < 1e-12 {
                continue;
            }
            if let Some(l) = &b.logical {
                prop_assert!(l.is_unitary(1e-8));
                let r = plan.family.build().unwrap();
                let frame = (0..b.outcomes.len()).fold(Matrix::identity(r.bond_dim()), |acc, k| r.frame(k) * &acc);
                let word = b.byproduct.as_ref().unwrap().matrix(r.table());
                let predicted = (&(&frame * &word) * l).apply(&input);
                prop_assert!(linalg::fidelity(&linalg::normalized(&predicted).unwrap(), &b.output) > 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible(spec in aklt_spec(), p in picks(3), seed in any::<u64>()) {
        let plan = plan_for(spec, &p);
        let a = run_plan(&plan, RunMode::Sample(seed)).unwrap();
        let b = run_plan(&plan, RunMode::Sample(seed)).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        prop_assert!(a[0].probability > 0.0);
    }

    #[test]
    fn adjoint_lift_is_a_homomorphism(c1 in coeffs(8), c2 in coeffs(8)) {
        let r = ResourceSpec::Su { n: 3, transpose: false }.build().unwrap();
        let basis = r.table().basis();
        let (v1, v2) = (random_unitary(3, &c1), random_unitary(3, &c2));
        let l1 = adjoint_lift(&v1, basis, basis.len()).unwrap();
        let l2 = adjoint_lift(&v2, basis, basis.len()).unwrap();
        let l12 = adjoint_lift(&(&v1 * &v2), basis, basis.len()).unwrap();
        prop_assert!(l12.approx_eq(&(&l1 * &l2), 1e-9));
    }

    #[test]
    fn spin1_lift_is_real_orthogonal(c in coeffs(3)) {
        let r = ResourceSpec::Spin1.build().unwrap();
        let u = adjoint_lift(&random_unitary(2, &c), r.table().basis(), 3).unwrap();
        prop_assert!(u.is_real(1e-9));
        prop_assert!(u.is_unitary(1e-9));
    }

    #[test]
    fn rotated_kraus_sets_stay_trace_preserving(spec in aklt_spec(), c in coeffs(99)) {
        let r = spec.build().unwrap();
        let p = r.phys_dim();
        let w = random_unitary(p, &c[..p * p - 1]);
        let k: KrausSet = r.site(0).rotated(&w).unwrap();
        prop_assert!(validate_channel(&k).deviation < 1e-9);
    }

    #[test]
    fn word_reduction_is_associative(d in 2usize..=6, factors in prop::collection::vec(0usize..36, 0..8)) {
        let t = WordTable::new(&weyl_words_x_major(d).unwrap());
        let n = t.basis().len();
        let w = ByproductWord { factors: factors.iter().map(|f| f % n).collect(), phase: C64::new(1.0, 0.0) };
        let left = w.reduce(&t);
        let right = w.reduce_right(&t);
        prop_assert!(left.is_normal());
        prop_assert!(left.approx_eq(&right, 1e-9));
        prop_assert!(left.matrix(&t).approx_eq(&w.matrix(&t), 1e-9));
    }

    #[test]
    fn cocycle_matches_weyl_composition(d in 2usize..=9, x in 1usize..9, i in 0usize..9, j in 0usize..9, a in 0usize..9, b in 0usize..9) {
        let x = 1 + (x - 1) % (d - 1);
        let (i, j, a, b) = (i % d, j % d, a % d, b % d);
        let lhs = &projective_rep(d, x, i, j).unwrap() * &projective_rep(d, x, a, b).unwrap();
        let rhs = projective_rep(d, x, (i + a) % d, (j + b) % d).unwrap().scale(cocycle(d, x, (i, j), (a, b)));
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn weyl_words_are_unitary_and_traceless(d in 2usize..=7, j in 0usize..7, k in 0usize..7) {
        let (j, k) = (j % d, k % d);
        let w = weyl(d, j, k).unwrap();
        prop_assert!(w.is_unitary(1e-12));
        if (j, k) != (0, 0) {
            prop_assert!(w.trace().norm() < 1e-9);
        }
    }

    #[test]
    fn cluster_states_satisfy_their_stabilizers(d in 2usize..=5, x in 1usize..5, n in 2usize..=4, pbc in any::<bool>()) {
        let x = 1 + (x - 1) % (d - 1);
        let bc = if pbc { Boundary::Pbc } else { Boundary::Obc };
        let spec = ClusterSpec::new(d, x, n, bc).unwrap();
        prop_assert!(stabilizer_deviation(&spec).unwrap() < 1e-9);
        prop_assert!((linalg::norm(&build_cluster(&spec).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lu_transitions_land_on_cluster_states(d in 3usize..=6, x in 1usize..6, y in 1usize..6, n in 2usize..=4,
                                            which in 0usize..5, l in 1usize..6, k in 1usize..6) {
        let (x, y) = (1 + (x - 1) % (d - 1), 1 + (y - 1) % (d - 1));
        let pattern = match which {
            0 => LuPattern::PiAlternating { offset: n % 2 },
            1 => LuPattern::PiPairs { offset: l % 2 },
            _ => {
                let (l, k) = (1 + (l - 1) % (d - 1), 1 + (k - 1) % (d - 1));
                prop_assume!(gcd(l, d) == 1 && gcd(k, d) == 1);
                LuPattern::FAlternating { l, k, offset: which % 2 }
            }
        };
        let spec = ClusterSpec::with_orders(d, x, y, n, Boundary::Obc).unwrap();
        match lu_transition(&spec, pattern) {
            Ok(t) => prop_assert!(t.pass, "{:?} deviation {}", pattern, t.deviation),
            Err(mbqc_core::MbqcError::InvalidPattern(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn plans_survive_json(spec in prop_oneof![aklt_spec(), cluster_spec()], p in picks(3)) {
        let plan = plan_for(spec, &p);
        let text = serde_json::to_string(&plan).unwrap();
        let back: MeasurementPlan = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, plan);
    }
}
