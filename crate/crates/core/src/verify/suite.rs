use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CoeffSeries, RationalSymbol};
use crate::inner::InnerFunction;
use crate::operators::OperatorKind;
use crate::symbol::Symbol;
use crate::C64;

use super::checks::{
    check_intertwining, check_backward_shift, check_projection_identity, check_rho_defect, check_rto_defect, check_vanishing,
    probe_intertwining,
};
use super::corpus::vanishing_corpus;
use super::decompositions::check_decompositions;
use super::random;
use super::rank::rank_study;
use super::report::{CheckReport, Expect};
use super::VerifyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Defects,
    Vanishing,
    Decompositions,
    Intertwining,
    Projections,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::All, Suite::Defects, Suite::Vanishing, Suite::Decompositions, Suite::Intertwining, Suite::Projections];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Defects => "defects",
            Suite::Vanishing => "vanishing",
            Suite::Decompositions => "decompositions",
            Suite::Intertwining => "intertwining",
            Suite::Projections => "projections",
        }
    }

    fn includes(&self, part: Suite) -> bool {
        *self == Suite::All || *self == part
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite '{s}'")))
    }
}

/// Random-instance sizes per suite.
pub const PROJECTION_INSTANCES: usize = 20;
pub const DEFECT_INSTANCES: usize = 100;
pub const KERNEL_INSTANCES: usize = 10;
pub const FORWARD_INSTANCES: usize = 50;
pub const PROBE_INSTANCES: usize = 20;
pub const DECOMPOSITION_INSTANCES: usize = 30;
/// Windows of the rank studies.
pub const RANK_WINDOWS: [usize; 3] = [50, 100, 200];

// One RNG stream per family keeps families independent of each other's sizes.
const STREAM_PROJECTIONS: u64 = 1;
const STREAM_DEFECTS: u64 = 2;
const STREAM_KERNEL: u64 = 3;
const STREAM_FORWARD: u64 = 4;
const STREAM_PROBES: u64 = 5;
const STREAM_DECOMPOSITIONS: u64 = 6;

type Job = Box<dyn Fn() -> Result<CheckReport> + Send + Sync>;

struct Task {
    id: String,
    seed: Option<u64>,
    job: Job,
}

fn task(id: String, seed: Option<u64>, job: impl Fn() -> Result<CheckReport> + Send + Sync + 'static) -> Task {
    Task { id, seed, job: Box::new(job) }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn b(zeros: &[C64]) -> InnerFunction {
    InnerFunction::blaschke(zeros).expect("fixed zeros lie inside the disk")
}

fn z(k: usize) -> InnerFunction {
    InnerFunction::power_of_z(k)
}

fn projection_tasks(cfg: VerifyConfig, seed: u64, out: &mut Vec<Task>) {
    let fixed = [z(3), b(&[c(0.5, 0.0)]), b(&[c(0.5, 0.0), c(0.0, 0.3)])];
    for (i, th) in fixed.into_iter().enumerate() {
        out.push(task(format!("projections/fixed/{i:02}"), None, move || check_projection_identity(&th, &cfg)));
    }
    let mut rng = random::rng(seed, STREAM_PROJECTIONS);
    for i in 0..PROJECTION_INSTANCES {
        let th = random::blaschke(&mut rng, 1, 4);
        out.push(task(format!("projections/random/{i:03}"), Some(seed), move || check_projection_identity(&th, &cfg)));
    }
}

fn defect_tasks(cfg: VerifyConfig, seed: u64, out: &mut Vec<Task>) {
    let zbar = Symbol::from_terms(&[(-1, c(1.0, 0.0))]);
    out.push(task("defects/rto/exact".into(), None, move || check_rto_defect(&zbar, &z(1), &z(1), &cfg)));
    let mut rng = random::rng(seed, STREAM_DEFECTS);
    for i in 0..DEFECT_INSTANCES {
        let phi = Symbol::laurent(random::laurent(&mut rng, 5));
        let eta = random::blaschke(&mut rng, 0, 3);
        let theta = random::blaschke(&mut rng, 1, 3);
        let (p, e, t) = (phi.clone(), eta.clone(), theta.clone());
        out.push(task(format!("defects/rto/random/{i:03}"), Some(seed), move || check_rto_defect(&p, &e, &t, &cfg)));
        out.push(task(format!("defects/rho/random/{i:03}"), Some(seed), move || check_rho_defect(&phi, &eta, &theta, &cfg)));
    }
    // φ = θ̆η̄q: the defect itself vanishes, so both sides must be zero.
    let mut rng = random::rng(seed, STREAM_KERNEL);
    for i in 0..KERNEL_INSTANCES {
        let q = random::analytic(&mut rng, 3);
        let eta = random::blaschke(&mut rng, 0, 3);
        let theta = random::blaschke(&mut rng, 1, 3);
        out.push(task(format!("defects/rho/kernel/{i:02}"), Some(seed), move || {
            let phi = Symbol::laurent(q.clone()).times_inner(&theta.star(), -1).times_inner(&eta, -1);
            let r = check_rho_defect(&phi, &eta, &theta, &cfg)?;
            let defect = r.components[0].residual;
            let residual = r.residual.max(defect);
            let components = r.components.iter().map(|c| (c.name.clone(), c.residual)).collect();
            Ok(CheckReport::new("", "A𝒮_(η) = S_θ*A when φ ∈ θ̆η̄H∞", Expect::Vanish, residual, cfg.tol_identity)
                .components(components)
                .heuristic(r.status == super::CheckStatus::Heuristic)
                .window(&r.trusted_window)
                .digest(&[&r.inputs_digest, "kernel"]))
        }));
    }
}

fn intertwining_tasks(cfg: VerifyConfig, seed: u64, out: &mut Vec<Task>) {
    let one_plus_z = CoeffSeries::from_terms(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]);
    out.push(task("intertwining/fixed/00".into(), None, move || check_intertwining(&one_plus_z, &z(1), &b(&[c(0.5, 0.0)]), &cfg)));
    let zz = CoeffSeries::monomial(1, c(1.0, 0.0));
    out.push(task("intertwining/fixed/01".into(), None, move || check_intertwining(&zz, &InnerFunction::unit(), &z(2), &cfg)));
    let zbar2 = Symbol::from_terms(&[(-2, c(1.0, 0.0))]);
    out.push(task("intertwining/fixed/02".into(), None, move || probe_intertwining(&zbar2, &z(1), &z(3), &cfg)));

    let mut rng = random::rng(seed, STREAM_FORWARD);
    for i in 0..FORWARD_INSTANCES {
        let psi = random::analytic(&mut rng, 5);
        let eta = random::blaschke(&mut rng, 0, 3);
        let theta = random::blaschke(&mut rng, 1, 3);
        out.push(task(format!("intertwining/forward/{i:03}"), Some(seed), move || check_intertwining(&psi, &eta, &theta, &cfg)));
    }
    // η̄(ψ + c·z̄^m) with |c| ≥ 1/2 is certified outside η̄H∞.
    let mut rng = random::rng(seed, STREAM_PROBES);
    for i in 0..PROBE_INSTANCES {
        use rand::Rng;
        let psi = random::analytic(&mut rng, 5);
        let m = rng.gen_range(1..=3i64);
        let cm = C64::from_polar(rng.gen_range(0.5..=1.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let eta = random::blaschke(&mut rng, 0, 3);
        let theta = random::blaschke(&mut rng, 1, 3);
        let phi = Symbol::laurent(psi.add(&CoeffSeries::monomial(-m, cm))).times_inner(&eta, -1);
        out.push(task(format!("intertwining/probe/{i:03}"), Some(seed), move || probe_intertwining(&phi, &eta, &theta, &cfg)));
    }
}

fn vanishing_tasks(cfg: VerifyConfig, out: &mut Vec<Task>) {
    for e in vanishing_corpus() {
        out.push(task(format!("vanishing/{}", e.label), None, move || check_vanishing(e.kind, &e.phi, &e.eta, &e.theta, &cfg)));
    }
}

fn decomposition_tasks(cfg: VerifyConfig, seed: u64, out: &mut Vec<Task>) {
    let three = Symbol::from_terms(&[(-1, c(1.0, 0.0)), (0, c(1.0, 0.0)), (1, c(1.0, 0.0))]);
    out.push(task("decompositions/fixed/00".into(), None, move || check_decompositions(&three, &z(1), &z(2), &cfg)));
    let zbar2 = Symbol::from_terms(&[(-2, c(1.0, 0.0))]);
    out.push(task("decompositions/fixed/01".into(), None, move || {
        check_decompositions(&zbar2, &InnerFunction::unit(), &b(&[c(0.5, 0.0)]), &cfg)
    }));
    let shift_thetas = [z(3), b(&[c(0.5, 0.0)]), b(&[c(0.5, 0.0), c(0.0, 0.3)])];
    for (i, th) in shift_thetas.into_iter().enumerate() {
        out.push(task(format!("decompositions/backward_shift/{i:02}"), None, move || check_backward_shift(&th, &cfg)));
    }
    let mut rng = random::rng(seed, STREAM_DECOMPOSITIONS);
    for i in 0..DECOMPOSITION_INSTANCES {
        let phi = Symbol::laurent(random::laurent(&mut rng, 4));
        let eta = random::blaschke(&mut rng, 0, 3);
        let theta = random::blaschke(&mut rng, 1, 3);
        out.push(task(format!("decompositions/random/{i:03}"), Some(seed), move || check_decompositions(&phi, &eta, &theta, &cfg)));
    }
}

fn rank_tasks(cfg: VerifyConfig, out: &mut Vec<Task>) {
    let atom = InnerFunction::single_atom(0.0, 1.0).expect("valid atom");
    // φ = η̄θψ with ψ = 1/(z − 0.4) ∈ ℛ.
    let psi = RationalSymbol::from_polys(&[c(1.0, 0.0)], &[c(-0.4, 0.0), c(1.0, 0.0)]).expect("valid symbol");
    let plateau = Symbol::rational(psi).times_inner(&z(1), -1).times_inner(&atom, 1);
    let generic = Symbol::from_terms(&[(-1, c(1.0, 0.0)), (0, c(0.5, 0.0)), (1, c(0.3, 0.0))]);
    let cases: [(&str, Symbol, InnerFunction, Expect); 3] = [
        ("rank/atom/kronecker", plateau, atom.clone(), Expect::Plateau),
        ("rank/atom/generic", generic.clone(), atom, Expect::Growing),
        ("rank/blaschke/degree_two", generic, b(&[c(0.5, 0.0), c(0.0, -0.4)]), Expect::Plateau),
    ];
    for (id, phi, theta, expect) in cases {
        out.push(task(id.into(), None, move || {
            let s = rank_study(OperatorKind::Rto, &phi, &z(1), &theta, &RANK_WINDOWS, cfg.tol_rank, cfg.expansion_factor)?;
            Ok(s.to_report("", expect, &["rank", &phi.label(), &theta.label(), &cfg.describe()]))
        }));
    }
}

/// Run a suite. Random instances are drawn from `seed`; the result is sorted
/// by `check_id` and does not depend on scheduling.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig, seed: u64) -> Vec<CheckReport> {
    let cfg = *cfg;
    let mut tasks = Vec::new();
    if suite.includes(Suite::Projections) {
        projection_tasks(cfg, seed, &mut tasks);
    }
    if suite.includes(Suite::Defects) {
        defect_tasks(cfg, seed, &mut tasks);
    }
    if suite.includes(Suite::Intertwining) {
        intertwining_tasks(cfg, seed, &mut tasks);
    }
    if suite.includes(Suite::Vanishing) {
        vanishing_tasks(cfg, &mut tasks);
    }
    if suite.includes(Suite::Decompositions) {
        decomposition_tasks(cfg, seed, &mut tasks);
    }
    if suite == Suite::All {
        rank_tasks(cfg, &mut tasks);
    }
    let mut reports: Vec<CheckReport> = tasks
        .par_iter()
        .map(|t| match (t.job)() {
            Ok(r) => r.with_id(t.id.clone()).seed(t.seed),
            Err(e) => CheckReport::errored(t.id.clone(), "evaluation error", e.to_string()).seed(t.seed),
        })
        .collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports
}
