//! Sequential preferential attachment where vertex `s+m` arrives with `τ_m`
//! edges, attached one at a time proportionally to the current weights, and
//! the correspondence of cumulative degrees with the immigration urn.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::error::{PolyaError, Result};
use crate::interarrival::{ArrivalSequence, InterArrivalSpec};
use crate::rng::{derive_seed, map_streams, stream};
use crate::stats::{ks_critical_99, ks_two_sample};
use crate::urn::{exact_pmf_given_arrivals, urn_white_given_taus};

/// Seed graph degrees `d_1..d_s` with cumulative sums `c_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedGraph {
    degrees: Vec<u64>,
    cumulative: Vec<u64>,
}

impl SeedGraph {
    pub fn new(degrees: &[u64]) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(PolyaError::InvalidParameter("seed degrees must be non-empty and positive".into()));
        }
        let cumulative = degrees
            .iter()
            .scan(0u64, |acc, &d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        Ok(Self { degrees: degrees.to_vec(), cumulative })
    }

    pub fn s(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `c_i` for `1 <= i <= s`.
    pub fn c(&self, i: usize) -> u64 {
        self.cumulative[i - 1]
    }

    pub fn total(&self) -> u64 {
        *self.cumulative.last().expect("non-empty")
    }
}

/// Binary indexed tree over vertex weights that can grow by appending.
#[derive(Debug, Clone)]
struct Fenwick {
    // 1-based; tree[0] unused
    tree: Vec<u64>,
}

impl Fenwick {
    fn new() -> Self {
        Self { tree: vec![0] }
    }

    fn len(&self) -> usize {
        self.tree.len() - 1
    }

    /// Sum of the first `i` weights.
    fn prefix(&self, mut i: usize) -> u64 {
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }

    fn push(&mut self, weight: u64) {
        let i = self.len() + 1;
        let low = i & i.wrapping_neg();
        let node = weight + self.prefix(i - 1) - self.prefix(i - low);
        self.tree.push(node);
    }

    fn add(&mut self, index: usize, delta: u64) {
        let mut i = index + 1;
        while i <= self.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// 0-based index of the vertex owning unit `u` in `0..total`.
    fn find(&self, mut u: u64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut step = 1usize << (usize::BITS - 1 - n.leading_zeros());
        while step > 0 {
            if pos + step <= n && self.tree[pos + step] <= u {
                pos += step;
                u -= self.tree[pos];
            }
            step >>= 1;
        }
        pos
    }
}

/// The graph `G(n)` reduced to its vertex weights.
#[derive(Debug, Clone)]
pub struct PAState {
    weights: Vec<u64>,
    tree: Fenwick,
    steps: u64,
    edges: u64,
    total: u64,
}

impl PAState {
    pub fn new(seed: &SeedGraph) -> Self {
        let mut tree = Fenwick::new();
        for &d in seed.degrees() {
            tree.push(d);
        }
        Self { weights: seed.degrees().to_vec(), tree, steps: 0, edges: 0, total: seed.total() }
    }

    /// `d_i(n)` for vertices `1..=s+n`, 0-based.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    /// Vertices added so far, `n`.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Edges attached so far, `T_n`.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// Add one vertex with `tau` edges, attached sequentially.
    pub fn step<R: Rng + ?Sized>(&mut self, tau: u64, rng: &mut R) {
        for _ in 0..tau {
            let target = self.tree.find(rng.random_range(0..self.total));
            self.weights[target] += 1;
            self.tree.add(target, 1);
            self.total += 1;
        }
        self.edges += tau;
        self.weights.push(1);
        self.tree.push(1);
        self.total += 1;
        self.steps += 1;
    }
}

/// Grow `G(n)` from the seed graph with `τ_m ~ π`.
pub fn simulate_pa<R: Rng + ?Sized>(seed: &SeedGraph, pi: &InterArrivalSpec, n: u64, rng: &mut R) -> PAState {
    let mut state = PAState::new(seed);
    for _ in 0..n {
        let tau = pi.sample(rng);
        state.step(tau, rng);
    }
    state
}

/// Grow the graph with the given edge counts.
pub fn simulate_pa_given_taus<R: Rng + ?Sized>(seed: &SeedGraph, taus: &[u64], rng: &mut R) -> PAState {
    let mut state = PAState::new(seed);
    for &tau in taus {
        state.step(tau, rng);
    }
    state
}

/// `Σ_{i<=k} d_i(n)`.
pub fn cumulative_degree(state: &PAState, k: usize) -> Result<u64> {
    if k == 0 || k > state.vertex_count() {
        return Err(PolyaError::Index(format!("vertex {k} not in 1..={}", state.vertex_count())));
    }
    Ok(state.tree.prefix(k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSnapshot {
    pub step: u64,
    pub weights: Vec<u64>,
}

/// As [`simulate_pa`], also keeping the weights after each listed step.
pub fn simulate_pa_snapshots<R: Rng + ?Sized>(
    seed: &SeedGraph,
    pi: &InterArrivalSpec,
    n: u64,
    checkpoints: &[u64],
    rng: &mut R,
) -> (PAState, Vec<DegreeSnapshot>) {
    let mut state = PAState::new(seed);
    let mut snapshots = Vec::new();
    let mut keep = |state: &PAState| {
        if checkpoints.contains(&state.steps) {
            snapshots.push(DegreeSnapshot { step: state.steps, weights: state.weights.clone() });
        }
    };
    keep(&state);
    for _ in 0..n {
        let tau = pi.sample(rng);
        state.step(tau, rng);
        keep(&state);
    }
    (state, snapshots)
}

pub fn write_degree_csv<W: Write>(out: &mut W, snapshots: &[DegreeSnapshot]) -> std::io::Result<()> {
    writeln!(out, "step,vertex,weight")?;
    for snap in snapshots {
        for (i, w) in snap.weights.iter().enumerate() {
            writeln!(out, "{},{},{}", snap.step, i + 1, w)?;
        }
    }
    Ok(())
}

/// The urn matching `Σ_{i<=k} d_i(n)` given all gaps: `(black, white, gaps)`.
/// For `k < s` it is `(c_s − c_k, c_k, τ_1..τ_n)`; for `k >= s` it is
/// `(1, c_s + (k−s) + T_{k−s+1}, τ_{k−s+2}..τ_n)`.
pub fn matching_urn(seed: &SeedGraph, k: usize, taus: &[u64]) -> Result<(u64, u64, Vec<u64>)> {
    let s = seed.s();
    if k == 0 {
        return Err(PolyaError::Index("vertices start at 1".into()));
    }
    if k < s {
        return Ok((seed.total() - seed.c(k), seed.c(k), taus.to_vec()));
    }
    let head = k - s + 1;
    if taus.len() < head {
        return Err(PolyaError::Index(format!("vertex {k} needs n >= {head}")));
    }
    let white = seed.total() + (k - s) as u64 + taus[..head].iter().sum::<u64>();
    Ok((1, white, taus[head..].to_vec()))
}

// Leaves of the attachment tree beyond this are refused in exact mode.
const MAX_LEAVES: f64 = 2e6;

/// Exact law of `Σ_{i<=k} d_i(n)` given the gaps, by following every
/// attachment to an individual vertex.
pub fn exact_pa_pmf_given_taus(seed: &SeedGraph, taus: &[u64], k: usize) -> Result<BTreeMap<u64, f64>> {
    let mut leaves = 1.0;
    for (m, &tau) in taus.iter().enumerate() {
        leaves *= ((seed.s() + m) as f64).powi(tau as i32);
    }
    if leaves > MAX_LEAVES {
        return Err(PolyaError::TooLarge(format!("{leaves:.0} attachment paths")));
    }
    if k == 0 || k > seed.s() + taus.len() {
        return Err(PolyaError::Index(format!("vertex {k} not in the final graph")));
    }
    let mut layer: Vec<(Vec<u64>, f64)> = vec![(seed.degrees().to_vec(), 1.0)];
    for &tau in taus {
        for _ in 0..tau {
            let mut next = Vec::with_capacity(layer.len() * (layer[0].0.len()));
            for (weights, p) in &layer {
                let total: u64 = weights.iter().sum();
                for i in 0..weights.len() {
                    let mut w = weights.clone();
                    w[i] += 1;
                    next.push((w, p * weights[i] as f64 / total as f64));
                }
            }
            layer = next;
        }
        for (weights, _) in &mut layer {
            weights.push(1);
        }
    }
    let mut pmf = BTreeMap::new();
    for (weights, p) in layer {
        *pmf.entry(weights[..k].iter().sum()).or_insert(0.0) += p;
    }
    Ok(pmf)
}

fn max_gap(a: &BTreeMap<u64, f64>, b: &BTreeMap<u64, f64>) -> f64 {
    a.keys().chain(b.keys()).map(|x| (a.get(x).unwrap_or(&0.0) - b.get(x).unwrap_or(&0.0)).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactCorrespondence {
    pub k: usize,
    pub n: u64,
    /// Gap sequences enumerated.
    pub sequences: usize,
    /// Largest pmf difference given a gap sequence.
    pub max_conditional_gap: f64,
    /// Largest difference of the mixed laws.
    pub max_gap: f64,
    /// `(value, P_graph, P_urn)`.
    pub pmf: Vec<(u64, f64, f64)>,
}

/// Enumerate all gap sequences of length `n` and compare the graph law with
/// the urn driven by the same gaps.
pub fn correspondence_exact(seed: &SeedGraph, pi: &InterArrivalSpec, k: usize, n: u64) -> Result<ExactCorrespondence> {
    let atoms = pi.atoms().ok_or_else(|| PolyaError::TooLarge("exact mode needs finite-support pi".into()))?;
    if (atoms.len() as f64).powi(n as i32) > 4096.0 {
        return Err(PolyaError::TooLarge(format!("{} atoms over {n} steps", atoms.len())));
    }
    let mut sequences: Vec<(Vec<u64>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..n {
        sequences = sequences
            .into_iter()
            .flat_map(|(taus, p)| {
                atoms.iter().map(move |&(v, q)| {
                    let mut t = taus.clone();
                    t.push(v);
                    (t, p * q)
                })
            })
            .collect();
    }
    let (mut graph, mut urn) = (BTreeMap::new(), BTreeMap::new());
    let mut conditional: f64 = 0.0;
    for (taus, p) in &sequences {
        let g = exact_pa_pmf_given_taus(seed, taus, k)?;
        let (black, white, rest) = matching_urn(seed, k, taus)?;
        let draws: u64 = rest.iter().sum();
        let seq = ArrivalSequence::from_taus(&rest, draws);
        let u: BTreeMap<u64, f64> = exact_pmf_given_arrivals(black, white, &seq, draws).probs;
        conditional = conditional.max(max_gap(&g, &u));
        for (x, q) in g {
            *graph.entry(x).or_insert(0.0) += p * q;
        }
        for (x, q) in u {
            *urn.entry(x).or_insert(0.0) += p * q;
        }
    }
    let max_gap = max_gap(&graph, &urn);
    let keys: std::collections::BTreeSet<u64> = graph.keys().chain(urn.keys()).copied().collect();
    let pmf = keys.into_iter().map(|x| (x, *graph.get(&x).unwrap_or(&0.0), *urn.get(&x).unwrap_or(&0.0))).collect();
    Ok(ExactCorrespondence { k, n, sequences: sequences.len(), max_conditional_gap: conditional, max_gap, pmf })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloCorrespondence {
    pub k: usize,
    pub n: u64,
    pub paths: usize,
    pub ks: f64,
    pub p_value: f64,
    pub critical_99: f64,
    pub passed: bool,
    pub graph_mean: f64,
    pub urn_mean: f64,
}

/// Graph and urn samples per path. Path `i` draws its gaps, graph and urn
/// from stream `i` of seeds derived from `seed`; graph and urn share gaps.
pub fn correspondence_samples(
    seed_graph: &SeedGraph,
    pi: &InterArrivalSpec,
    k: usize,
    n: u64,
    paths: usize,
    seed: u64,
) -> Result<Vec<(u64, u64)>> {
    let (tau_seed, urn_seed) = (derive_seed(seed, "tau"), derive_seed(seed, "urn"));
    map_streams(derive_seed(seed, "graph"), paths, |i, rng| {
        let mut tau_rng = stream(tau_seed, i);
        let taus: Vec<u64> = (0..n).map(|_| pi.sample(&mut tau_rng)).collect();
        let state = simulate_pa_given_taus(seed_graph, &taus, rng);
        let (black, white, rest) = matching_urn(seed_graph, k, &taus)?;
        let urn = urn_white_given_taus(black, white, &rest, &mut stream(urn_seed, i));
        Ok((cumulative_degree(&state, k)?, urn))
    })
    .into_iter()
    .collect()
}

/// Two-sample KS between graph cumulative degrees and urn white counts.
pub fn correspondence_mc(
    seed_graph: &SeedGraph,
    pi: &InterArrivalSpec,
    k: usize,
    n: u64,
    paths: usize,
    seed: u64,
) -> Result<MonteCarloCorrespondence> {
    let samples = correspondence_samples(seed_graph, pi, k, n, paths, seed)?;
    let graph: Vec<f64> = samples.iter().map(|s| s.0 as f64).collect();
    let urn: Vec<f64> = samples.iter().map(|s| s.1 as f64).collect();
    let (ks, p_value) = ks_two_sample(&graph, &urn)?;
    let critical_99 = ks_critical_99(paths, paths);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(MonteCarloCorrespondence {
        k,
        n,
        paths,
        ks,
        p_value,
        critical_99,
        passed: ks < critical_99,
        graph_mean: mean(&graph),
        urn_mean: mean(&urn),
    })
}
