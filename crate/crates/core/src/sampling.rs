//! Monte Carlo sampling of the composite scenario.
//!
//! Each proposal draws `a, b, x, y ~ Bernoulli(0.5)` and `c ~ Uniform[0, 1)`
//! and is accepted iff `c < p[x][y][a][b]`. An accepted outcome increments its
//! vertex count and the count of every hyperedge containing it. Counting stops
//! at exactly `target_accepted` accepted samples; the counts are normalized
//! only once, at the end (see [`normalize`]).
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Worker
//! `w` uses stream `w` of that seed, so the single-worker run is stream 0.
//! Golden values in the test suite are recorded against this generator.

use std::fmt;
use std::str::FromStr;
use std::thread;

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::constraints::ConstraintTable;
use crate::error::SamplingError;
use crate::scenario::{JointVertex, Scenario, EDGES_PER_VERTEX, JOINT_EDGES, JOINT_VERTICES};

pub type SimRng = ChaCha8Rng;

/// Generator for `seed`, positioned on stream `stream`.
pub fn seeded_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Returns 1 with probability `bias`.
pub fn sample_bernoulli<R: Rng + ?Sized>(rng: &mut R, bias: f64) -> Result<u8, SamplingError> {
    let dist = Bernoulli::new(bias).map_err(|_| SamplingError::InvalidBias(bias))?;
    Ok(dist.sample(rng) as u8)
}

/// Uniform on `[0, 1)`.
pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// One proposal at a time, stopping at exactly the target.
    Rejection,
    /// Batches of proposals from a Metropolis chain, filtered afterwards.
    MetropolisBatch,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Rejection, Method::MetropolisBatch];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rejection => "rejection",
            Method::MetropolisBatch => "metropolis",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SamplingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rejection" | "rejection-atomic" => Ok(Method::Rejection),
            "metropolis" | "metropolis-batch" => Ok(Method::MetropolisBatch),
            other => Err(SamplingError::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub target_accepted: u64,
    pub seed: u64,
    pub method: Method,
    /// Proposals per Metropolis batch.
    pub batch_size: usize,
    pub workers: usize,
    /// Metropolis steps discarded before the first batch.
    pub burn_in: u64,
    /// Largest tolerated proposals-per-accepted ratio for the Metropolis
    /// sampler before it reports non-convergence.
    pub max_proposal_ratio: f64,
}

impl SamplerConfig {
    pub const DEFAULT_BATCH_SIZE: usize = 1000;
    pub const DEFAULT_MAX_PROPOSAL_RATIO: f64 = 1000.0;

    pub fn new(target_accepted: u64, seed: u64) -> Self {
        Self {
            target_accepted,
            seed,
            method: Method::Rejection,
            batch_size: Self::DEFAULT_BATCH_SIZE,
            workers: 1,
            burn_in: 0,
            max_proposal_ratio: Self::DEFAULT_MAX_PROPOSAL_RATIO,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        let bad = |msg: &str| Err(SamplingError::InvalidConfig(msg.to_string()));
        if self.target_accepted < 1 {
            return bad("target_accepted must be at least 1");
        }
        if self.batch_size < 1 {
            return bad("batch_size must be at least 1");
        }
        if self.workers < 1 {
            return bad("workers must be at least 1");
        }
        if !(self.max_proposal_ratio.is_finite() && self.max_proposal_ratio >= 1.0) {
            return bad("max_proposal_ratio must be a finite number >= 1");
        }
        Ok(())
    }

    /// Accepted-sample share of each worker; the first `N mod workers`
    /// workers take one extra.
    pub fn shares(&self) -> Vec<u64> {
        let w = self.workers as u64;
        (0..w)
            .map(|i| self.target_accepted / w + u64::from(i < self.target_accepted % w))
            .collect()
    }
}

/// Vertex-to-edge incidence of the composite scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence([[usize; EDGES_PER_VERTEX]; JOINT_VERTICES]);

impl Incidence {
    pub fn of(scenario: &Scenario) -> Result<Self, SamplingError> {
        if !scenario.is_binary_composite() {
            return Err(SamplingError::UnsupportedScenario);
        }
        let mut table = [[0; EDGES_PER_VERTEX]; JOINT_VERTICES];
        for (v, edges) in scenario.incidence().into_iter().enumerate() {
            table[v].copy_from_slice(&edges);
        }
        Ok(Self(table))
    }

    pub fn edges_of(&self, vertex: usize) -> &[usize; EDGES_PER_VERTEX] {
        &self.0[vertex]
    }
}

/// Raw accepted-sample counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Tally {
    pub vertex_counts: [u64; JOINT_VERTICES],
    pub edge_counts: [u64; JOINT_EDGES],
    pub accepted: u64,
    pub proposed: u64,
}

impl Tally {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a consistent tally from vertex counts alone; `proposed` is set
    /// to the accepted total.
    pub fn from_vertex_counts(
        counts: [u64; JOINT_VERTICES],
        scenario: &Scenario,
    ) -> Result<Self, SamplingError> {
        let incidence = Incidence::of(scenario)?;
        let mut tally = Self::empty();
        for (v, &n) in counts.iter().enumerate() {
            tally.vertex_counts[v] = n;
            for &e in incidence.edges_of(v) {
                tally.edge_counts[e] += n;
            }
            tally.accepted += n;
        }
        tally.proposed = tally.accepted;
        Ok(tally)
    }

    #[inline]
    pub fn record(&mut self, vertex: usize, incidence: &Incidence) {
        self.vertex_counts[vertex] += 1;
        for &e in incidence.edges_of(vertex) {
            self.edge_counts[e] += 1;
        }
        self.accepted += 1;
    }

    /// Checks the bookkeeping invariants against `scenario`.
    pub fn is_consistent(&self, scenario: &Scenario) -> bool {
        let Ok(expected) = Self::from_vertex_counts(self.vertex_counts, scenario) else {
            return false;
        };
        expected.edge_counts == self.edge_counts
            && expected.accepted == self.accepted
            && self.proposed >= self.accepted
    }
}

/// Componentwise sum of two tallies over the same scenario.
pub fn merge_tallies(t1: &Tally, t2: &Tally) -> Tally {
    let mut out = *t1;
    for (o, n) in out.vertex_counts.iter_mut().zip(t2.vertex_counts) {
        *o += n;
    }
    for (o, n) in out.edge_counts.iter_mut().zip(t2.edge_counts) {
        *o += n;
    }
    out.accepted += t2.accepted;
    out.proposed += t2.proposed;
    out
}

/// The sixteen normalized weights; position `k` is the weight of vertex `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalDistribution {
    weights: [f64; JOINT_VERTICES],
}

impl Serialize for GlobalDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.weights.serialize(s)
    }
}

impl GlobalDistribution {
    pub fn new(weights: [f64; JOINT_VERTICES]) -> Self {
        Self { weights }
    }

    /// The conditional distribution a table describes, read off directly.
    pub fn from_table(table: &ConstraintTable) -> Self {
        Self::new(table.by_vertex())
    }

    pub fn weights(&self) -> &[f64; JOINT_VERTICES] {
        &self.weights
    }

    pub fn weight(&self, vertex: JointVertex) -> f64 {
        self.weights[vertex.index()]
    }

    /// Sum of the weights on each hyperedge of `scenario`.
    pub fn edge_sums(&self, scenario: &Scenario) -> Vec<f64> {
        scenario
            .edges()
            .iter()
            .map(|e| e.vertices.iter().map(|&v| self.weights[v]).sum())
            .collect()
    }

    /// Largest `|edge sum - 1|` over the hyperedges of `scenario`.
    pub fn max_edge_deviation(&self, scenario: &Scenario) -> f64 {
        self.edge_sums(scenario)
            .into_iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Weight of one vertex: its count divided by the summed counts of the
/// hyperedges containing it, times the number of those hyperedges.
///
/// ```
/// assert_eq!(bellgraph::sampling::vertex_weight(10.0, 40.0, 3), 0.75);
/// ```
pub fn vertex_weight(count: f64, edge_sum: f64, n_edges: usize) -> f64 {
    count / edge_sum * n_edges as f64
}

/// Normalizes a tally into a [`GlobalDistribution`].
///
/// Every hyperedge must have a nonzero count.
pub fn normalize(tally: &Tally, scenario: &Scenario) -> Result<GlobalDistribution, SamplingError> {
    let incidence = Incidence::of(scenario)?;
    if let Some(edge) = tally.edge_counts.iter().position(|&n| n == 0) {
        return Err(SamplingError::StarvedEdge { edge });
    }
    let mut weights = [0.0; JOINT_VERTICES];
    for (v, w) in weights.iter_mut().enumerate() {
        let edges = incidence.edges_of(v);
        let edge_sum: u64 = edges.iter().map(|&e| tally.edge_counts[e]).sum();
        *w = vertex_weight(tally.vertex_counts[v] as f64, edge_sum as f64, edges.len());
    }
    Ok(GlobalDistribution::new(weights))
}

/// The large-sample limit of [`normalize`] for `table`: the same formula
/// applied to counts proportional to the table entries.
///
/// For a table satisfying no-signalling this is the table itself.
pub fn expected_distribution(
    table: &ConstraintTable,
    scenario: &Scenario,
) -> Result<GlobalDistribution, SamplingError> {
    let incidence = Incidence::of(scenario)?;
    let mass = table.by_vertex();
    let edge_mass: Vec<f64> = scenario
        .edges()
        .iter()
        .map(|e| e.vertices.iter().map(|&v| mass[v]).sum())
        .collect();
    let mut weights = [0.0; JOINT_VERTICES];
    for (v, w) in weights.iter_mut().enumerate() {
        let edges = incidence.edges_of(v);
        let edge_sum: f64 = edges.iter().map(|&e| edge_mass[e]).sum();
        if edge_sum == 0.0 {
            return Err(SamplingError::StarvedEdge { edge: edges[0] });
        }
        *w = vertex_weight(mass[v], edge_sum, edges.len());
    }
    Ok(GlobalDistribution::new(weights))
}

struct Acceptance {
    by_vertex: [f64; JOINT_VERTICES],
    incidence: Incidence,
}

impl Acceptance {
    fn new(table: &ConstraintTable, scenario: &Scenario) -> Result<Self, SamplingError> {
        let incidence = Incidence::of(scenario)?;
        if table.is_all_zero() {
            return Err(SamplingError::AcceptanceImpossible);
        }
        Ok(Self {
            by_vertex: table.by_vertex(),
            incidence,
        })
    }

    #[inline]
    fn accepts(&self, vertex: usize, c: f64) -> bool {
        c < self.by_vertex[vertex]
    }
}

#[inline]
fn joint_id(a: u8, b: u8, x: u8, y: u8) -> usize {
    8 * x as usize + 4 * y as usize + 2 * a as usize + b as usize
}

/// Atomic rejection sampler. Successive calls to [`RejectionSampler::sample`]
/// continue the same random stream.
pub struct RejectionSampler {
    acceptance: Acceptance,
    fair: Bernoulli,
    rng: SimRng,
}

impl RejectionSampler {
    pub fn new(
        table: &ConstraintTable,
        scenario: &Scenario,
        rng: SimRng,
    ) -> Result<Self, SamplingError> {
        Ok(Self {
            acceptance: Acceptance::new(table, scenario)?,
            fair: Bernoulli::new(0.5).expect("valid bias"),
            rng,
        })
    }

    /// Draws until exactly `accepted` samples are accepted.
    pub fn sample(&mut self, accepted: u64) -> Tally {
        let mut tally = Tally::empty();
        while tally.accepted < accepted {
            let a = self.fair.sample(&mut self.rng) as u8;
            let b = self.fair.sample(&mut self.rng) as u8;
            let x = self.fair.sample(&mut self.rng) as u8;
            let y = self.fair.sample(&mut self.rng) as u8;
            let c = sample_uniform(&mut self.rng);
            tally.proposed += 1;
            let v = joint_id(a, b, x, y);
            if self.acceptance.accepts(v, c) {
                tally.record(v, &self.acceptance.incidence);
            }
        }
        tally
    }
}

/// Current state of the Metropolis chain over `(a, b, x, y, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainState {
    pub bits: [u8; 4],
    pub c: f64,
}

impl ChainState {
    fn vertex(&self) -> usize {
        let [a, b, x, y] = self.bits;
        joint_id(a, b, x, y)
    }
}

/// Batch sampler driven by a Metropolis chain.
///
/// The chain targets the uniform prior over the four bits and `c`. Each step
/// proposes flipping one uniformly chosen bit, which is symmetric, and
/// redraws `c` uniformly. With a flat target the Metropolis ratio is always
/// one, so every proposal is taken. Consecutive states differ in exactly one
/// bit, so batches are autocorrelated; the stationary distribution is still
/// uniform. The chain starts from an independent uniform draw and persists
/// across batches.
pub struct MetropolisSampler {
    acceptance: Acceptance,
    rng: SimRng,
    state: ChainState,
    batch_size: usize,
    max_proposal_ratio: f64,
    pending_burn_in: u64,
}

impl MetropolisSampler {
    pub fn new(
        table: &ConstraintTable,
        scenario: &Scenario,
        mut rng: SimRng,
        batch_size: usize,
        burn_in: u64,
        max_proposal_ratio: f64,
    ) -> Result<Self, SamplingError> {
        let acceptance = Acceptance::new(table, scenario)?;
        let fair = Bernoulli::new(0.5).expect("valid bias");
        let mut bits = [0; 4];
        for bit in &mut bits {
            *bit = fair.sample(&mut rng) as u8;
        }
        let c = sample_uniform(&mut rng);
        Ok(Self {
            acceptance,
            rng,
            state: ChainState { bits, c },
            batch_size,
            max_proposal_ratio,
            pending_burn_in: burn_in,
        })
    }

    pub fn state(&self) -> ChainState {
        self.state
    }

    fn step(&mut self) {
        let k = self.rng.random_range(0..4);
        self.state.bits[k] ^= 1;
        self.state.c = sample_uniform(&mut self.rng);
    }

    fn next_batch(&mut self) -> Vec<ChainState> {
        while self.pending_burn_in > 0 {
            self.step();
            self.pending_burn_in -= 1;
        }
        (0..self.batch_size)
            .map(|_| {
                self.step();
                self.state
            })
            .collect()
    }

    /// Runs batches until `accepted` samples are tallied. The final batch is
    /// truncated at the target; `proposed` counts whole batches.
    pub fn sample(&mut self, accepted: u64) -> Result<Tally, SamplingError> {
        let mut tally = Tally::empty();
        while tally.accepted < accepted {
            let batch = self.next_batch();
            tally.proposed += batch.len() as u64;
            for s in batch {
                let v = s.vertex();
                if self.acceptance.accepts(v, s.c) {
                    tally.record(v, &self.acceptance.incidence);
                    if tally.accepted == accepted {
                        break;
                    }
                }
            }
            if tally.proposed as f64 > self.max_proposal_ratio * tally.accepted.max(1) as f64 {
                return Err(SamplingError::NonConvergence {
                    proposed: tally.proposed,
                    accepted: tally.accepted,
                    cap: self.max_proposal_ratio,
                });
            }
        }
        Ok(tally)
    }
}

fn run_workers<F>(cfg: &SamplerConfig, worker: F) -> Result<Tally, SamplingError>
where
    F: Fn(SimRng, u64) -> Result<Tally, SamplingError> + Sync,
{
    let shares = cfg.shares();
    if shares.len() == 1 {
        return worker(seeded_rng(cfg.seed, 0), shares[0]);
    }
    let results: Vec<Result<Tally, SamplingError>> = thread::scope(|scope| {
        let handles: Vec<_> = shares
            .iter()
            .enumerate()
            .map(|(w, &share)| {
                let worker = &worker;
                scope.spawn(move || {
                    if share == 0 {
                        return Ok(Tally::empty());
                    }
                    worker(seeded_rng(cfg.seed, w as u64), share)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler worker panicked"))
            .collect()
    });
    results
        .into_iter()
        .try_fold(Tally::empty(), |acc, t| Ok(merge_tallies(&acc, &t?)))
}

fn require_method(cfg: &SamplerConfig, method: Method) -> Result<(), SamplingError> {
    cfg.validate()?;
    if cfg.method != method {
        return Err(SamplingError::InvalidConfig(format!(
            "configured method is {}, expected {method}",
            cfg.method
        )));
    }
    Ok(())
}

/// Rejection sampling to exactly `cfg.target_accepted` accepted samples.
pub fn rejection_sample_run(
    table: &ConstraintTable,
    cfg: &SamplerConfig,
    scenario: &Scenario,
) -> Result<Tally, SamplingError> {
    require_method(cfg, Method::Rejection)?;
    Acceptance::new(table, scenario)?;
    run_workers(cfg, |rng, share| {
        Ok(RejectionSampler::new(table, scenario, rng)?.sample(share))
    })
}

/// Metropolis batch sampling to exactly `cfg.target_accepted` accepted samples.
pub fn metropolis_batch_run(
    table: &ConstraintTable,
    cfg: &SamplerConfig,
    scenario: &Scenario,
) -> Result<Tally, SamplingError> {
    require_method(cfg, Method::MetropolisBatch)?;
    Acceptance::new(table, scenario)?;
    run_workers(cfg, |rng, share| {
        MetropolisSampler::new(
            table,
            scenario,
            rng,
            cfg.batch_size,
            cfg.burn_in,
            cfg.max_proposal_ratio,
        )?
        .sample(share)
    })
}

/// Runs the sampler selected by `cfg.method`.
pub fn run(
    table: &ConstraintTable,
    cfg: &SamplerConfig,
    scenario: &Scenario,
) -> Result<Tally, SamplingError> {
    match cfg.method {
        Method::Rejection => rejection_sample_run(table, cfg, scenario),
        Method::MetropolisBatch => metropolis_batch_run(table, cfg, scenario),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::scenario::epr_scenario;

    #[test]
    fn bernoulli_degenerate_biases() {
        let mut rng = seeded_rng(1, 0);
        assert!((0..1000).all(|_| sample_bernoulli(&mut rng, 0.0).unwrap() == 0));
        assert!((0..1000).all(|_| sample_bernoulli(&mut rng, 1.0).unwrap() == 1));
        assert_eq!(
            sample_bernoulli(&mut rng, 1.5),
            Err(SamplingError::InvalidBias(1.5))
        );
        assert!(sample_bernoulli(&mut rng, -0.1).is_err());
    }

    #[test]
    fn uniform_range_and_determinism() {
        let mut r1 = seeded_rng(9, 0);
        let mut r2 = seeded_rng(9, 0);
        for _ in 0..10_000 {
            let u = sample_uniform(&mut r1);
            assert!((0.0..1.0).contains(&u));
            assert_eq!(u, sample_uniform(&mut r2));
        }
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(0, 1).validate().is_err());
        assert!(SamplerConfig::new(1, 1).with_batch_size(0).validate().is_err());
        assert!(SamplerConfig::new(1, 1).with_workers(0).validate().is_err());
        assert_eq!(SamplerConfig::new(10, 1).with_workers(3).shares(), vec![4, 3, 3]);
        assert_eq!("metropolis".parse::<Method>().unwrap(), Method::MetropolisBatch);
        assert!("gibbs".parse::<Method>().is_err());
    }

    #[test]
    fn method_mismatch_is_rejected() {
        let s = epr_scenario();
        let cfg = SamplerConfig::new(10, 1).with_method(Method::MetropolisBatch);
        assert!(matches!(
            rejection_sample_run(&presets::pr_box(), &cfg, &s),
            Err(SamplingError::InvalidConfig(_))
        ));
    }

    #[test]
    fn all_zero_table_is_impossible() {
        let s = epr_scenario();
        let zero = ConstraintTable::from_acceptance([[[[0.0; 2]; 2]; 2]; 2]).unwrap();
        for method in Method::ALL {
            let cfg = SamplerConfig::new(10, 1).with_method(method);
            assert_eq!(run(&zero, &cfg, &s), Err(SamplingError::AcceptanceImpossible));
        }
    }

    #[test]
    fn tiny_acceptance_trips_the_cap() {
        let s = epr_scenario();
        let tiny = ConstraintTable::from_acceptance([[[[1e-6; 2]; 2]; 2]; 2]).unwrap();
        let mut cfg = SamplerConfig::new(10, 1).with_method(Method::MetropolisBatch);
        cfg.max_proposal_ratio = 100.0;
        assert!(matches!(
            run(&tiny, &cfg, &s),
            Err(SamplingError::NonConvergence { .. })
        ));
    }

    #[test]
    fn local_scenario_is_not_sampleable() {
        let local = crate::scenario::make_local_scenario();
        let cfg = SamplerConfig::new(10, 1);
        assert_eq!(
            run(&presets::pr_box(), &cfg, &local),
            Err(SamplingError::UnsupportedScenario)
        );
    }

    #[test]
    fn normalize_names_starved_edge() {
        let s = epr_scenario();
        let mut counts = [1; JOINT_VERTICES];
        // vertices of edge 0 (context 00|00) only
        for v in 0..4 {
            counts[v] = 0;
        }
        let t = Tally::from_vertex_counts(counts, &s).unwrap();
        assert_eq!(normalize(&t, &s), Err(SamplingError::StarvedEdge { edge: 0 }));
    }

    #[test]
    fn worked_example_weight() {
        // vertex 0 has count 10; its edges (0, 4, 8) sum to 40
        let s = epr_scenario();
        let mut counts = [0; JOINT_VERTICES];
        counts[0] = 10;
        counts[1] = 5;
        counts[4] = 1;
        counts[8] = 1;
        counts[12] = 1;
        let t = Tally::from_vertex_counts(counts, &s).unwrap();
        let edge_sum: u64 = [0, 4, 8].iter().map(|&e| t.edge_counts[e]).sum();
        assert_eq!(edge_sum, 40);
        assert_eq!(normalize(&t, &s).unwrap().weights()[0], 0.75);
    }

    #[test]
    fn metropolis_batch_of_one() {
        let s = epr_scenario();
        let cfg = SamplerConfig::new(500, 3)
            .with_method(Method::MetropolisBatch)
            .with_batch_size(1);
        let t = run(&presets::classical_uniform(), &cfg, &s).unwrap();
        assert_eq!(t.accepted, 500);
        assert!(t.is_consistent(&s));
    }

    #[test]
    fn metropolis_burn_in_shifts_the_stream() {
        let s = epr_scenario();
        let table = presets::classical_uniform();
        let mut cfg = SamplerConfig::new(200, 3).with_method(Method::MetropolisBatch);
        let plain = run(&table, &cfg, &s).unwrap();
        cfg.burn_in = 17;
        let burned = run(&table, &cfg, &s).unwrap();
        assert_eq!(burned.accepted, 200);
        assert_ne!(plain, burned);
    }
}
