//! Command-line front end: builds states, runs the verification suites,
//! executes measurement plans and reproduces the family table.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mbqc_core::aklt::{desk_families, verify_family_symmetry, FamilyTag};
use mbqc_core::cluster::{
    build_cluster, cocycle_composition_deviation, factorize_noncoprime, ground_state_report, lu_transition,
    reference_input, spt_label, stabilizer_deviation, teleport_identities, Boundary, ClusterSpec, LuPattern,
};
use mbqc_core::engine::{
    probability_defect, projection_census, real_vs_virtual_check, run_prepared, sp_commutation_census, success_census,
    universality_span_check, BranchRecord, MeasurementPlan, ModeName, PlanStep, PreparedPlan, ResourceSpec, RunMode,
};
use mbqc_core::linalg::{self, root_of_unity};
use mbqc_core::mps::{assemble_state, dilation_circuit_state, validate_channel, BoundaryPair};
use mbqc_core::ops::gcd;
use mbqc_core::{Exec, MbqcError};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "mbqc", version, about = "Measurement-based quantum computation on symmetric MPS resources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a cluster state vector or a family Kraus set as JSON.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Execute a measurement plan, or a success census with `--census`.
    Run {
        /// Plan file (JSON).
        plan: Option<PathBuf>,
        /// Single-step census over every elementary generator of the family.
        #[arg(long, conflicts_with = "plan")]
        census: bool,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Family table at desk sizes with census probabilities and closed forms.
    Table1 {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Cluster,
    Spin1,
    Su,
    SoFund,
    SoAdj,
    Sp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Obc,
    Pbc,
}

impl From<Bc> for Boundary {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Obc => Boundary::Obc,
            Bc::Pbc => Boundary::Pbc,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cluster,
    Aklt,
    Engine,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Enumerate,
    Sample,
}

/// Family selection. `--N` is the chain length for cluster states and the
/// group rank for `su`.
#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bc: Option<Bc>,
    /// Use the transposed su(N) Kraus set.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub transpose: bool,
}

#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report destination (artifact destination for `build`); stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub deviation: Option<f64>,
    pub expected: Value,
    pub observed: Value,
}

impl Check {
    /// Passes when `deviation ≤ tol`; expected value zero.
    pub fn within(name: impl Into<String>, deviation: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::of(deviation <= tol),
            deviation: Some(deviation),
            expected: json!(0.0),
            observed: json!(deviation),
        }
    }

    /// Passes on exact equality of the JSON forms.
    pub fn exact(name: impl Into<String>, expected: impl Serialize, observed: impl Serialize) -> Self {
        let (e, o) = (json!(expected), json!(observed));
        Self { name: name.into(), status: Status::of(e == o), deviation: None, expected: e, observed: o }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub spec: Value,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub seed: Option<u64>,
    pub timing: Timing,
}

impl Report {
    fn new(command: &str, spec: Value, checks: Vec<Check>, data: Option<Value>, seed: Option<u64>) -> Self {
        let status = Status::of(checks.iter().all(|c| c.status == Status::Pass));
        Self { command: command.into(), spec, status, checks, data, seed, timing: Timing { seconds: 0.0 } }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What a command produced: the report plus, for `build`, the artifact.
#[derive(Debug)]
pub struct Output {
    pub report: Report,
    pub artifact: Option<Value>,
}

fn aklt_spec(f: &FamilyArgs) -> anyhow::Result<ResourceSpec> {
    let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required for this family"));
    Ok(match f.family.context("--family is required")? {
        FamilyName::Cluster => {
            let d = need(f.d, "d")?;
            ResourceSpec::Cluster { d, x: f.x.unwrap_or(1), y: f.y }
        }
        FamilyName::Spin1 => ResourceSpec::Spin1,
        FamilyName::Su => ResourceSpec::Su { n: need(f.n, "N")?, transpose: f.transpose },
        FamilyName::SoFund => ResourceSpec::SoFund { l: need(f.l, "l")? },
        FamilyName::SoAdj => ResourceSpec::SoAdj { l: need(f.l, "l")? },
        FamilyName::Sp => {
            let m = need(f.m, "m")?;
            if let Some(n) = f.n {
                if n != 1 << m {
                    bail!("sp with m = {m} has n = {}, but --N {n} was given", 1usize << m);
                }
            }
            ResourceSpec::Sp { m }
        }
    })
}

/// Closed-form single-step success probability and its formula.
pub fn closed_form(spec: &ResourceSpec) -> Option<(Ratio<usize>, &'static str)> {
    match *spec {
        ResourceSpec::Spin1 => Some((Ratio::new(2, 3), "2/3")),
        ResourceSpec::Su { n, .. } => Some((Ratio::new(n, n + 1), "N/(N+1)")),
        ResourceSpec::SoFund { l } => Some((Ratio::new(2, 2 * l + 1), "2/(2l+1)")),
        ResourceSpec::SoAdj { l } => Some((Ratio::new(2 * (2 * l - 1), l * (2 * l + 1)), "2(2l-1)/(l(2l+1))")),
        ResourceSpec::Sp { m } => {
            let n = 1 << m;
            Some((Ratio::new(n + 1, 2 * n + 1), "(n+1)/(2n+1)"))
        }
        ResourceSpec::Cluster { .. } => None,
    }
}

fn ratio(r: Ratio<usize>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_build(f: &FamilyArgs, echo: &str) -> anyhow::Result<Output> {
    let spec_json = json!(f);
    if f.family == Some(FamilyName::Cluster) {
        let d = f.d.context("--d is required for cluster states")?;
        let n = f.n.context("--N is required for cluster states")?;
        let bc = f.bc.map_or(Boundary::Pbc, Boundary::from);
        let spec = match f.y {
            Some(y) => ClusterSpec::with_orders(d, f.x.unwrap_or(1), y, n, bc)?,
            None => ClusterSpec::new(d, f.x.unwrap_or(1), n, bc)?,
        };
        let state = build_cluster(&spec)?;
        let norm = linalg::norm(&state);
        let checks = vec![
            Check::exact("amplitudes", d.pow(n as u32), state.len()),
            Check::within("norm", (norm - 1.0).abs(), 1e-12),
        ];
        let artifact = json!({ "kind": "state", "spec": spec, "dims": vec![d; n], "amplitudes": state });
        return Ok(Output { report: Report::new(echo, spec_json, checks, None, None), artifact: Some(artifact) });
    }
    let spec = aklt_spec(f)?;
    let r = spec.build()?;
    let fam = r.family().expect("aklt family");
    let k = fam.kraus();
    let channel = validate_channel(k);
    let (p, chi) = fam.tag().dims();
    let checks = vec![
        Check::exact("kraus-operators", p, k.ops().len()),
        Check::exact("bond-dimension", chi, k.bond_dim()),
        Check::within("channel", channel.deviation, 1e-9),
    ];
    let artifact = json!({
        "kind": "kraus",
        "family": spec,
        "phys_dim": k.phys_dim(),
        "bond_dim": k.bond_dim(),
        "labels": fam.kraus_words().labels(),
        "ops": k.ops(),
    });
    Ok(Output { report: Report::new(echo, json!(spec), checks, None, None), artifact: Some(artifact) })
}

fn all_patterns(d: usize) -> Vec<LuPattern> {
    let mut out = vec![
        LuPattern::Identity,
        LuPattern::PiAlternating { offset: 0 },
        LuPattern::PiAlternating { offset: 1 },
        LuPattern::PiPairs { offset: 0 },
        LuPattern::PiPairs { offset: 1 },
    ];
    let units: Vec<usize> = (1..d).filter(|&u| gcd(u, d) == 1).collect();
    for &l in &units {
        for &k in &units {
            for offset in 0..2 {
                out.push(LuPattern::FAlternating { l, k, offset });
            }
        }
    }
    out
}

fn cluster_suite(f: &FamilyArgs, tol: f64) -> anyhow::Result<Vec<Check>> {
    let ds: Vec<usize> = f.d.map_or_else(|| (2..=5).collect(), |d| vec![d]);
    let bcs: Vec<Boundary> = f.bc.map_or_else(|| vec![Boundary::Obc, Boundary::Pbc], |b| vec![b.into()]);
    let mut checks = Vec::new();
    for d in ds {
        if d < 2 {
            bail!("cluster states need d >= 2");
        }
        let xs: Vec<usize> = f.x.map_or_else(|| (1..d).collect(), |x| vec![x]);
        let ns: Vec<usize> = f.n.map_or_else(|| (2..=4).collect(), |n| vec![n]);
        let mut stab: f64 = 0.0;
        for &x in &xs {
            for &n in &ns {
                for &bc in &bcs {
                    stab = stab.max(stabilizer_deviation(&ClusterSpec::new(d, x, n, bc)?)?);
                }
            }
        }
        checks.push(Check::within(format!("stabilizers d={d}"), stab, tol));

        for &x in &xs {
            let spec = ClusterSpec::new(d, x, 3, Boundary::Pbc)?;
            let g = ground_state_report(&spec)?;
            checks.push(Check::within(format!("parent-energy d={d} x={x}"), g.state_energy - g.ground_energy, tol));
            checks.push(Check::exact(format!("ground-degeneracy d={d} x={x}"), 1, g.degeneracy));
            let label = spt_label(d, x)?;
            let phase_dev = (label.cocycle_phase - root_of_unity(d, x as i64)).norm();
            checks.push(Check::within(format!("spt-phase d={d} x={x}"), phase_dev, tol));
            checks.push(Check::within(format!("cocycle d={d} x={x}"), cocycle_composition_deviation(d, x)?, tol));
            if gcd(x, d) == 1 {
                let t = teleport_identities(d, x, &reference_input(d))?;
                checks.push(Check::within(
                    format!("teleport d={d} x={x}"),
                    t.shifted_deviation.max(t.rotated_deviation),
                    tol,
                ));
            } else {
                let mut worst: f64 = 0.0;
                for n in [2, 3] {
                    worst = worst.max(1.0 - factorize_noncoprime(d, x, n, Boundary::Obc)?.fidelity);
                }
                checks.push(Check::within(format!("factorization d={d} x={x}"), worst, tol));
            }
        }

        let mut worst: f64 = 0.0;
        let mut count = 0usize;
        for x in 1..d {
            for y in 1..d {
                for &n in &ns {
                    for &bc in &bcs {
                        let spec = ClusterSpec::with_orders(d, x, y, n, bc)?;
                        for p in all_patterns(d) {
                            match lu_transition(&spec, p) {
                                Ok(t) => {
                                    worst = worst.max(t.deviation);
                                    count += 1;
                                }
                                Err(MbqcError::InvalidPattern(_)) => {}
                                Err(e) => return Err(e.into()),
                            }
                        }
                    }
                }
            }
        }
        let mut c = Check::within(format!("lu-transitions d={d}"), worst, tol);
        c.observed = json!({ "max_deviation": worst, "transitions": count });
        checks.push(c);
    }
    Ok(checks)
}

fn selected_families(f: &FamilyArgs) -> anyhow::Result<Vec<ResourceSpec>> {
    Ok(match f.family {
        None => desk_families().into_iter().map(ResourceSpec::from).collect(),
        Some(FamilyName::Cluster) => bail!("cluster is not an AKLT family; use the cluster suite"),
        Some(_) => vec![aklt_spec(f)?],
    })
}

fn aklt_suite(f: &FamilyArgs, tol: f64, seed: u64) -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for spec in selected_families(f)? {
        let r = spec.build()?;
        let fam = r.family().expect("aklt family");
        let name = spec.name();
        checks.push(Check::within(format!("channel {name}"), validate_channel(fam.kraus()).deviation, tol));
        let sym = verify_family_symmetry(fam, 8, seed)?;
        checks.push(Check::within(format!("symmetry {name}"), sym.max_deviation, tol.max(1e-7)));
        let basis = fam.byproduct_basis();
        checks.push(Check::within(format!("byproduct-basis {name}"), basis.orthogonality_defect(), tol));
        let chi = fam.bond_dim();
        checks.push(Check::exact(format!("byproduct-count {name}"), chi * chi - 1, basis.len()));
        let b = BoundaryPair::standard(chi);
        let a = assemble_state(fam.kraus(), 2, &b)?;
        let c = dilation_circuit_state(fam.kraus(), 2, &b)?;
        checks.push(Check::within(format!("dilation {name}"), linalg::phase_aligned_distance(&a, &c), tol));
    }
    Ok(checks)
}

fn census_checks(spec: &ResourceSpec) -> anyhow::Result<Vec<Check>> {
    let r = spec.build()?;
    let c = success_census(&r, None, Exec::default())?;
    let name = spec.name();
    let mut checks = Vec::new();
    if let Some((want, _)) = closed_form(spec) {
        checks.push(Check::exact(format!("census {name}"), ratio(want), ratio(c.fraction)));
    }
    checks.push(Check::exact(format!("census-uniform {name}"), true, c.uniform));
    let anomalies: usize = c.per_generator.iter().map(|g| g.anomalies).sum();
    checks.push(Check::exact(format!("census-other-class {name}"), 0, anomalies));
    Ok(checks)
}

fn engine_suite(f: &FamilyArgs, tol: f64) -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let specs = selected_families(f)?;
    for spec in &specs {
        checks.extend(census_checks(spec)?);
        let r = spec.build()?;
        let name = spec.name();
        match spec {
            ResourceSpec::Su { n, .. } => {
                let p = projection_census(&r, Exec::default())?;
                checks.push(Check::exact(
                    format!("projection {name}"),
                    ratio(Ratio::new(*n, n + 1)),
                    ratio(p.fraction),
                ));
            }
            ResourceSpec::SoFund { .. } => {
                let p = projection_census(&r, Exec::default())?;
                checks.push(Check::exact(format!("projection {name}"), 2, p.hits));
            }
            _ => {}
        }
        let span = universality_span_check(&r)?;
        checks.push(Check::exact(format!("span {name}"), span.expected, span.rank));
    }
    if f.family.is_none() || f.family == Some(FamilyName::Sp) {
        for n in [2, 4, 8] {
            let t = sp_commutation_census(n)?;
            checks.push(Check::exact(format!("sp-commutation n={n}"), true, t.pass));
        }
    }
    if f.family.is_none() {
        let gate = |g: &str, theta, adaptive| PlanStep::Gate { generator: g.into(), theta, adaptive };
        let cases = [
            (
                ResourceSpec::Cluster { d: 2, x: 1, y: None },
                4,
                vec![PlanStep::Wire, gate("Z", 0.3, true), PlanStep::Wire],
            ),
            (
                ResourceSpec::Cluster { d: 3, x: 1, y: None },
                4,
                vec![gate("Z1", 0.2, true), gate("Z1:s", 0.5, true), PlanStep::Wire],
            ),
            (ResourceSpec::Spin1, 3, vec![gate("X", 0.41, false), gate("Z", -0.73, true), gate("X", 1.12, true)]),
            (ResourceSpec::Su { n: 3, transpose: false }, 2, vec![gate("XZ-mub:1", 0.3, false), PlanStep::Projection]),
        ];
        for (spec, n, steps) in cases {
            let r = spec.build()?;
            let input = reference_input(r.bond_dim());
            let plan = PreparedPlan::with_resource(r, &input, &steps)?;
            let c = real_vs_virtual_check(&plan, n, Exec::default())?;
            checks.push(Check::within(
                format!("real-vs-virtual {} N={n}", spec.name()),
                c.max_infidelity.max(c.max_probability_gap),
                tol.max(1e-8),
            ));
        }
    }
    Ok(checks)
}

/// One row of the family table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub onsite_dim: usize,
    pub virtual_dim: usize,
    pub byproducts: String,
    pub census: String,
    pub closed_form: String,
    pub formula: String,
    pub limit: String,
}

pub fn table1_rows() -> anyhow::Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for tag in desk_families() {
        let spec = ResourceSpec::from(tag);
        let r = spec.build()?;
        let c = success_census(&r, None, Exec::default())?;
        let (want, formula) = closed_form(&spec).expect("aklt family");
        let (byproducts, limit) = match tag {
            FamilyTag::Spin1 => ("Pauli", "-"),
            FamilyTag::Su { .. } => ("Heisenberg-Weyl", "1"),
            FamilyTag::SoFund { .. } => ("Clifford", "0"),
            FamilyTag::SoAdj { .. } => ("Clifford products", "0"),
            FamilyTag::Sp { .. } => ("Pauli words", "1/2"),
        };
        rows.push(TableRow {
            family: spec.name(),
            onsite_dim: r.phys_dim(),
            virtual_dim: r.bond_dim(),
            byproducts: byproducts.into(),
            census: ratio(c.fraction),
            closed_form: ratio(want),
            formula: formula.into(),
            limit: limit.into(),
        });
    }
    Ok(rows)
}

fn branch_row(b: &BranchRecord, plan: &PreparedPlan) -> Value {
    json!({
        "outcomes": b.outcomes,
        "probability": b.probability,
        "byproduct": b.byproduct.as_ref().map(|w| w.label(plan.resource().table())),
        "classes": b.classes,
        "angles": b.angles,
        "logical": b.logical,
        "output": b.output,
    })
}

fn cmd_run(
    path: Option<&PathBuf>,
    census: bool,
    mode: Option<Mode>,
    f: &FamilyArgs,
    c: &CommonArgs,
    echo: &str,
) -> anyhow::Result<Output> {
    if census {
        let spec = aklt_spec(f)?;
        let r = spec.build()?;
        let report = success_census(&r, None, Exec::default())?;
        let mut checks = census_checks(&spec)?;
        checks.push(Check::exact("branches", r.phys_dim(), report.table.len()));
        let data =
            json!({ "fraction": ratio(report.fraction), "per_generator": report.per_generator, "table": report.table });
        return Ok(Output { report: Report::new(echo, json!(spec), checks, Some(data), None), artifact: None });
    }
    let path = path.context("a plan file or --census is required")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut plan: MeasurementPlan =
        serde_json::from_str(&text).with_context(|| format!("parsing plan {}", path.display()))?;
    match mode {
        Some(Mode::Enumerate) => plan.mode = ModeName::Enumerate,
        Some(Mode::Sample) => plan.mode = ModeName::Sample,
        None => {}
    }
    if c.seed.is_some() {
        plan.seed = c.seed;
    }
    let run_mode = plan.run_mode();
    let prepared = PreparedPlan::new(&plan)?;
    let branches = run_prepared(&prepared, run_mode, Exec::default())?;
    let mut checks = Vec::new();
    let seed = match run_mode {
        RunMode::Enumerate => {
            let p = prepared.resource().phys_dim();
            checks.push(Check::exact("branches", p.pow(prepared.len() as u32), branches.len()));
            checks.push(Check::within("probability-sum", probability_defect(&branches), c.tolerance));
            None
        }
        RunMode::Sample(seed) => {
            checks.push(Check::exact("positive-probability", true, branches[0].probability > 0.0));
            Some(seed)
        }
    };
    let rows: Vec<Value> = branches.iter().map(|b| branch_row(b, &prepared)).collect();
    let fully_active = branches.iter().filter(|b| b.fully_active()).count();
    let data = json!({ "fully_active": fully_active, "branches": rows });
    Ok(Output { report: Report::new(echo, json!(plan.family), checks, Some(data), seed), artifact: None })
}

/// Runs a parsed command; `echo` is recorded verbatim in the report.
pub fn execute(cli: &Cli, echo: &str) -> anyhow::Result<Output> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Build { family, .. } => cmd_build(family, echo)?,
        Command::Verify { suite, family, common } => {
            let tol = common.tolerance;
            let seed = common.seed.unwrap_or(0);
            let mut checks = Vec::new();
            if matches!(suite, Suite::Cluster | Suite::All) {
                checks.extend(cluster_suite(family, tol)?);
            }
            if matches!(suite, Suite::Aklt | Suite::All) {
                checks.extend(aklt_suite(family, tol, seed)?);
            }
            if matches!(suite, Suite::Engine | Suite::All) {
                checks.extend(engine_suite(family, tol)?);
            }
            let data = if *suite == Suite::All { Some(json!({ "table1": table1_rows()? })) } else { None };
            let spec = json!({ "suite": suite, "filter": family });
            Output { report: Report::new(echo, spec, checks, data, Some(seed)), artifact: None }
        }
        Command::Run { plan, census, mode, family, common } => {
            cmd_run(plan.as_ref(), *census, *mode, family, common, echo)?
        }
        Command::Table1 { .. } => {
            let rows = table1_rows()?;
            let checks =
                rows.iter().map(|r| Check::exact(format!("census {}", r.family), &r.closed_form, &r.census)).collect();
            Output { report: Report::new(echo, json!("table1"), checks, Some(json!(rows)), None), artifact: None }
        }
    };
    out.report.timing.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

impl Cli {
    pub fn out_path(&self) -> Option<&PathBuf> {
        match &self.command {
            Command::Build { common, .. }
            | Command::Verify { common, .. }
            | Command::Run { common, .. }
            | Command::Table1 { common } => common.out.as_ref(),
        }
    }
}

/// Report JSON without the timing field, for reproducibility comparisons.
pub fn report_body(r: &Report) -> Value {
    let mut v = json!(r);
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing");
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let f = |s| closed_form(&s).map(|(r, _)| ratio(r));
        assert_eq!(f(ResourceSpec::Su { n: 4, transpose: false }).unwrap(), "4/5");
        assert_eq!(f(ResourceSpec::SoFund { l: 3 }).unwrap(), "2/7");
        assert_eq!(f(ResourceSpec::SoAdj { l: 3 }).unwrap(), "10/21");
        assert_eq!(f(ResourceSpec::Sp { m: 3 }).unwrap(), "9/17");
        assert!(f(ResourceSpec::Cluster { d: 3, x: 1, y: None }).is_none());
    }

    #[test]
    fn checks_and_status() {
        assert_eq!(Check::within("a", 1e-12, 1e-9).status, Status::Pass);
        assert_eq!(Check::within("a", 1e-6, 1e-9).status, Status::Fail);
        assert_eq!(Check::exact("b", 3, 3).status, Status::Pass);
        assert_eq!(Check::exact("b", "2/3", "3/4").status, Status::Fail);
        let r = Report::new("x", json!(null), vec![Check::exact("b", 1, 2)], None, None);
        assert!(!r.passed());
    }

    #[test]
    fn family_flags_are_validated() {
        let f = FamilyArgs { family: Some(FamilyName::Sp), m: Some(1), n: Some(2), ..Default::default() };
        assert_eq!(aklt_spec(&f).unwrap(), ResourceSpec::Sp { m: 1 });
        let f = FamilyArgs { n: Some(4), ..f };
        assert!(aklt_spec(&f).is_err());
        assert!(aklt_spec(&FamilyArgs::default()).is_err());
    }
}
