//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one status line; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mbqc_core::cluster::{
    cocycle, cocycle_composition_deviation, factorize_noncoprime, lu_transition, reference_input, spt_label,
    stabilizer_sweep, teleport_identities, Boundary, ClusterSpec, LuPattern,
};
use mbqc_core::engine::{
    induced_operators, projection_basis, projection_census, real_vs_virtual_check, run_plan, sp_commutation_census,
    success_census, universality_span_check, MeasurementPlan, PlanStep, PreparedPlan, ResourceSpec, RunMode,
};
use mbqc_core::linalg::{root_of_unity, Matrix, C64};
use mbqc_core::ops::{
    basis_change, basis_projector, fourier_k, gcd, pauli, rebit_embed, split_symplectic_form, su3_e_matrix,
    su3_ladder_basis, weyl, weyl_commutation_phase, weyl_words_x_major,
};
use mbqc_core::{Exec, Result};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn gate(name: &str, theta: f64, adaptive: bool) -> PlanStep {
    PlanStep::Gate { generator: name.into(), theta, adaptive }
}

fn c1_teleport() -> Result<Outcome> {
    let report = teleport_identities(2, 1, &reference_input(2))?;
    let plan = MeasurementPlan::new(
        ResourceSpec::Cluster { d: 2, x: 1, y: None },
        reference_input(2),
        vec![PlanStep::Wire, PlanStep::Wire],
    );
    let table = plan.family.build()?.table().clone();
    let branches = run_plan(&plan, RunMode::Enumerate)?;
    let mut worst = report.shifted_deviation.max(report.rotated_deviation);
    let mut words = Vec::new();
    for b in &branches {
        let (s, t) = (b.outcomes[0], b.outcomes[1]);
        let expected = weyl(2, t, s)?;
        worst = worst.max(b.net_operator.scale_real(2.0).dist_up_to_phase(&expected));
        match &b.byproduct {
            Some(w) => {
                worst = worst.max(w.matrix(&table).dist_up_to_phase(&expected));
                words.push(w.label(&table));
            }
            None => worst = f64::INFINITY,
        }
    }
    outcome(branches.len() == 4 && worst < 1e-9, format!("4 branches, byproducts {words:?}, max deviation {worst:.2e}"))
}

fn euler_target(a: f64, b: f64, g: f64) -> Matrix {
    let x = pauli('X').unwrap();
    let z = pauli('Z').unwrap();
    &(&x.exp_hermitian(2.0 * g) * &z.exp_hermitian(2.0 * b)) * &x.exp_hermitian(2.0 * a)
}

fn c2_spin1() -> Result<Outcome> {
    let r = ResourceSpec::Spin1.build()?;
    let census = success_census(&r, None, Exec::default())?;
    let (a, b, g) = (0.41, -0.73, 1.12);
    let plan = MeasurementPlan::new(
        ResourceSpec::Spin1,
        reference_input(2),
        vec![gate("X", a, false), gate("Z", b, true), gate("X", g, true)],
    );
    let branches = run_plan(&plan, RunMode::Enumerate)?;
    let target = euler_target(a, b, g);
    let active: Vec<_> = branches.iter().filter(|b| b.fully_active()).collect();
    let worst = active
        .iter()
        .map(|b| b.logical.as_ref().map_or(f64::INFINITY, |l| l.dist_up_to_phase(&target)))
        .fold(0.0, f64::max);
    let pass = census.fraction == Ratio::new(2, 3) && census.uniform && active.len() == 8 && worst < 1e-9;
    outcome(
        pass,
        format!(
            "census {} (uniform {}), {} of 27 fully active, gate deviation {worst:.2e}",
            census.fraction,
            census.uniform,
            active.len()
        ),
    )
}

fn c3_table1() -> Result<Outcome> {
    let rows: Vec<(ResourceSpec, Ratio<usize>)> = vec![
        (ResourceSpec::Su { n: 2, transpose: false }, Ratio::new(2, 3)),
        (ResourceSpec::Su { n: 3, transpose: false }, Ratio::new(3, 4)),
        (ResourceSpec::Su { n: 4, transpose: false }, Ratio::new(4, 5)),
        (ResourceSpec::Su { n: 5, transpose: false }, Ratio::new(5, 6)),
        (ResourceSpec::SoFund { l: 1 }, Ratio::new(2, 3)),
        (ResourceSpec::SoFund { l: 2 }, Ratio::new(2, 5)),
        (ResourceSpec::SoFund { l: 3 }, Ratio::new(2, 7)),
        (ResourceSpec::SoAdj { l: 1 }, Ratio::new(2, 3)),
        (ResourceSpec::SoAdj { l: 2 }, Ratio::new(3, 5)),
        (ResourceSpec::SoAdj { l: 3 }, Ratio::new(10, 21)),
        (ResourceSpec::Sp { m: 1 }, Ratio::new(3, 5)),
        (ResourceSpec::Sp { m: 2 }, Ratio::new(5, 9)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (spec, want) in rows {
        let c = success_census(&spec.build()?, None, Exec::default())?;
        let anomalies: usize = c.per_generator.iter().map(|g| g.anomalies).sum();
        let ok = c.fraction == want && c.uniform && anomalies == 0;
        pass &= ok;
        parts.push(format!("{}={}{}", c.family, c.fraction, if ok { "" } else { "(!)" }));
    }
    outcome(pass, parts.join(" "))
}

fn c4_projection() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 2..=5 {
        let r = ResourceSpec::Su { n: d, transpose: false }.build()?;
        let census = projection_census(&r, Exec::default())?;
        let ops = induced_operators(r.site(0), &projection_basis(&r)?)?;
        // X^i P_{−o} for i = 1..d−1, then Z^k, with Kraus weight 1/√(d²−1)
        let w = 1.0 / ((d * d - 1) as f64).sqrt();
        let mut worst: f64 = 0.0;
        for (idx, a) in ops.iter().enumerate() {
            let e = if idx < d * (d - 1) {
                let (i, o) = (idx / d + 1, idx % d);
                (&weyl(d, i, 0)? * &basis_projector(d, (d - o) % d)).scale_real(w * (d as f64).sqrt())
            } else {
                weyl(d, 0, idx - d * (d - 1) + 1)?.scale_real(w)
            };
            worst = worst.max(a.dist(&e));
        }
        let ok = census.fraction == Ratio::new(d, d + 1) && worst < 1e-9;
        pass &= ok;
        parts.push(format!("su{d}={} (set dev {worst:.1e})", census.fraction));
    }
    let so = projection_census(&ResourceSpec::SoFund { l: 2 }.build()?, Exec::default())?;
    pass &= so.hits == 2;
    parts.push(format!("so-fund(l=2) hits={}", so.hits));
    outcome(pass, parts.join(", "))
}

fn c5_basis_change() -> Result<Outcome> {
    let u = basis_change(&weyl_words_x_major(3)?, &su3_ladder_basis())?;
    let f = fourier_k(3, 1)?;
    let expected = Matrix::direct_sum(&[f.clone(), f, su3_e_matrix()]);
    let dev = u.data().iter().zip(expected.data()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    outcome(dev < 1e-9, format!("max entry deviation {dev:.2e}"))
}

fn c6_stabilizers() -> Result<Outcome> {
    let sweep = stabilizer_sweep(&[2, 3, 4, 5], &[2, 3, 4, 5], Exec::default())?;
    let worst = sweep.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    outcome(worst < 1e-9, format!("{} chains, max deviation {worst:.2e}", sweep.len()))
}

fn c7_transitions() -> Result<Outcome> {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for d in [4usize, 5] {
        let units: Vec<usize> = (1..d).filter(|&u| gcd(u, d) == 1).collect();
        let mut patterns = vec![
            LuPattern::Identity,
            LuPattern::PiAlternating { offset: 0 },
            LuPattern::PiAlternating { offset: 1 },
            LuPattern::PiPairs { offset: 0 },
            LuPattern::PiPairs { offset: 1 },
        ];
        for &l in &units {
            for &k in &units {
                for offset in 0..2 {
                    patterns.push(LuPattern::FAlternating { l, k, offset });
                }
            }
        }
        for n in 2..=4 {
            for bc in [Boundary::Obc, Boundary::Pbc] {
                for x in 1..d {
                    for y in 1..d {
                        let Ok(spec) = ClusterSpec::with_orders(d, x, y, n, bc) else { continue };
                        for p in &patterns {
                            match lu_transition(&spec, *p) {
                                Ok(t) => {
                                    checked += 1;
                                    worst = worst.max(t.deviation);
                                    pass &= t.pass;
                                }
                                Err(mbqc_core::MbqcError::InvalidPattern(_)) => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                }
            }
        }
    }
    // named routes
    let route = |d, x, y, n, p: LuPattern, tx, ty| -> Result<bool> {
        let t = lu_transition(&ClusterSpec::with_orders(d, x, y, n, Boundary::Obc)?, p)?;
        Ok(t.pass && (t.target.x, t.target.y()) == (tx, ty))
    };
    let mut named = Vec::new();
    for n in [3, 4] {
        named.push(route(4, 1, 3, n, LuPattern::PiPairs { offset: 0 }, 1, 1)?);
        named.push(route(4, 3, 1, n, LuPattern::PiPairs { offset: 1 }, 1, 1)?);
        named.push(route(5, 1, 4, n, LuPattern::PiPairs { offset: 0 }, 1, 1)?);
        named.push(route(5, 4, 1, n, LuPattern::PiPairs { offset: 1 }, 1, 1)?);
        named.push(route(5, 1, 4, n, LuPattern::FAlternating { l: 3, k: 1, offset: 0 }, 2, 3)?);
        named.push(route(5, 2, 3, n, LuPattern::FAlternating { l: 1, k: 3, offset: 1 }, 1, 4)?);
        named.push(route(4, 1, 3, n, LuPattern::PiAlternating { offset: 0 }, 3, 1)?);
    }
    let named_ok = named.iter().all(|b| *b);
    pass &= named_ok;
    outcome(
        pass,
        format!(
            "{checked} transitions, max deviation {worst:.2e}; named routes to C(1,1) and via F13: {}/{}",
            named.iter().filter(|b| **b).count(),
            named.len()
        ),
    )
}

fn c8_factorization() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (d, x) in [(4, 2), (6, 2), (6, 3)] {
        for (n, bc) in [(2, Boundary::Obc), (3, Boundary::Obc), (3, Boundary::Pbc)] {
            let f = factorize_noncoprime(d, x, n, bc)?;
            worst = worst.max(1.0 - f.fidelity);
            count += 1;
        }
    }
    outcome(worst < 1e-9, format!("{count} chains, max infidelity {worst:.2e}"))
}

fn c9_spt() -> Result<Outcome> {
    let mut pass = true;
    let mut cases = 0;
    for d in 2..=5 {
        for x in 1..d {
            let label = spt_label(d, x)?;
            pass &= (label.cocycle_phase - root_of_unity(d, x as i64)).norm() < 1e-12;
            pass &= cocycle_composition_deviation(d, x)? < 1e-12;
            for a in 0..d {
                for j in 0..d {
                    let expected = weyl_commutation_phase(d, a, x * j)?.conj();
                    pass &= (cocycle(d, x, (0, j), (a, 0)) - expected).norm() < 1e-12;
                }
            }
            cases += 1;
        }
    }
    outcome(pass, format!("{cases} (d, x) pairs, all d⁴ compositions"))
}

fn random_su2(rng: &mut ChaCha8Rng) -> Matrix {
    let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let (a, b) = (C64::new(v[0], v[1]) / n, C64::new(v[2], v[3]) / n);
    Matrix::from_rows(&[vec![a, -b.conj()], vec![b, a.conj()]]).unwrap()
}

fn c10_sp() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2, 4, 8] {
        let t = sp_commutation_census(n)?;
        pass &= t.pass;
        parts.push(format!("n={n}:{}", if t.pass { "ok" } else { "mismatch" }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(85);
    let delta = split_symplectic_form(2)?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (u, v) = (random_su2(&mut rng), random_su2(&mut rng));
        let (su, sv, suv) = (rebit_embed(&u)?, rebit_embed(&v)?, rebit_embed(&(&u * &v))?);
        worst = worst.max((&su.transpose() * &su).dist(&Matrix::identity(4)));
        worst = worst.max((&(&su.transpose() * &delta) * &su).dist(&delta));
        worst = worst.max((&su * &sv).dist(&suv));
    }
    pass &= worst < 1e-9;
    parts.push(format!("rebit deviation {worst:.2e}"));
    outcome(pass, parts.join(", "))
}

fn c11_physical() -> Result<Outcome> {
    let cases: Vec<(ResourceSpec, usize, Vec<PlanStep>)> = vec![
        (ResourceSpec::Cluster { d: 2, x: 1, y: None }, 4, vec![PlanStep::Wire, gate("Z", 0.3, true), PlanStep::Wire]),
        (
            ResourceSpec::Cluster { d: 3, x: 1, y: None },
            4,
            vec![gate("Z1", 0.2, true), gate("Z1:s", 0.5, true), PlanStep::Wire],
        ),
        (ResourceSpec::Spin1, 3, vec![gate("X", 0.41, false), gate("Z", -0.73, true), gate("X", 1.12, true)]),
        (ResourceSpec::Su { n: 3, transpose: false }, 2, vec![gate("XZ-mub:1", 0.3, false), PlanStep::Projection]),
    ];
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut branches = 0;
    for (spec, n, steps) in cases {
        let r = spec.build()?;
        let input = reference_input(r.bond_dim());
        let plan = PreparedPlan::with_resource(r, &input, &steps)?;
        let c = real_vs_virtual_check(&plan, n, Exec::default())?;
        pass &= c.pass;
        worst = worst.max(c.max_infidelity);
        branches += c.branches;
    }
    outcome(pass, format!("{branches} branches, max infidelity {worst:.2e}"))
}

fn c12_span() -> Result<Outcome> {
    let specs = [
        ResourceSpec::Su { n: 2, transpose: false },
        ResourceSpec::Su { n: 3, transpose: false },
        ResourceSpec::Su { n: 5, transpose: false },
        ResourceSpec::SoFund { l: 1 },
        ResourceSpec::SoFund { l: 2 },
        ResourceSpec::SoFund { l: 3 },
        ResourceSpec::SoAdj { l: 1 },
        ResourceSpec::SoAdj { l: 2 },
        ResourceSpec::SoAdj { l: 3 },
        ResourceSpec::Sp { m: 1 },
        ResourceSpec::Sp { m: 2 },
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for s in specs {
        let rep = universality_span_check(&s.build()?)?;
        pass &= rep.pass;
        parts.push(format!("{}:{}/{}", rep.family, rep.rank, rep.expected));
    }
    outcome(pass, parts.join(" "))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("teleportation byproducts", c1_teleport, Some(Duration::from_secs(1))),
        ("spin-1 census and Euler gate", c2_spin1, Some(Duration::from_secs(1))),
        ("family success probabilities", c3_table1, Some(Duration::from_secs(10))),
        ("projection censuses", c4_projection, Some(Duration::from_secs(5))),
        ("SU(3) basis change", c5_basis_change, None),
        ("cluster stabilizers", c6_stabilizers, Some(Duration::from_secs(60))),
        ("local-unitary transitions", c7_transitions, Some(Duration::from_secs(60))),
        ("non-coprime factorization", c8_factorization, None),
        ("SPT cocycles", c9_spt, None),
        ("Sp commutation tables and rebit embedding", c10_sp, None),
        ("real vs virtual simulation", c11_physical, None),
        ("universality span ranks", c12_span, None),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        println!(
            "criterion {:>2} [{}] {name}: {detail} ({:.3} s{budget})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
