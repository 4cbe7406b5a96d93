//! Binary pairwise models: exact partition functions, the subdivision-graph
//! identity, the Bethe partition function, and cover-lift comparisons.
//!
//! Spins take values in `{0, 1}` and a configuration `s` has weight
//! `exp(Σ_uv J_uv s_u s_v + Σ_v h_v s_v)`. All partition functions are
//! accumulated in log space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::{
    build_cover, enumerate_assignments, AssignmentSampler, CoverError, CoverGraph, VoltageAssignment,
};
use crate::families::{generating_polynomial, StructureFamily};
use crate::graph::{subdivide, Graph, GraphError};

/// Largest vertex count accepted by exhaustive summation.
pub const MAX_EXACT_VERTICES: usize = 30;

/// Largest subdivision graph whose independent sets are enumerated.
pub const MAX_SUBDIVISION_VERTICES: usize = 48;

/// Relative slack for `Z(G)^M ≥ Z(G̃)` and `Z ≥ Z_B` comparisons.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetheError {
    #[error("{found} vertices exceed the exhaustive-summation limit of {limit}")]
    TooLarge { found: usize, limit: usize },
    #[error("edge {edge} has coupling {coupling} < 0; the model is not attractive")]
    NonAttractive { edge: usize, coupling: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("cover was not built over this model's graph")]
    ModelMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// A binary pairwise model on a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseModel {
    graph: Graph,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

impl PairwiseModel {
    pub fn new(graph: Graph, couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self, BetheError> {
        if couplings.len() != graph.edge_count() {
            return Err(BetheError::InvalidModel(format!(
                "{} couplings for {} edges",
                couplings.len(),
                graph.edge_count()
            )));
        }
        if fields.len() != graph.vertex_count() {
            return Err(BetheError::InvalidModel(format!(
                "{} fields for {} vertices",
                fields.len(),
                graph.vertex_count()
            )));
        }
        if couplings.iter().chain(&fields).any(|x| !x.is_finite()) {
            return Err(BetheError::InvalidModel("interactions must be finite".into()));
        }
        Ok(PairwiseModel { graph, couplings, fields })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// All couplings non-negative.
    pub fn is_attractive(&self) -> bool {
        self.couplings.iter().all(|&j| j >= 0.0)
    }

    fn require_attractive(&self) -> Result<(), BetheError> {
        match self.couplings.iter().position(|&j| j < 0.0) {
            Some(edge) => Err(BetheError::NonAttractive { edge, coupling: self.couplings[edge] }),
            None => Ok(()),
        }
    }

    /// Disjoint union of two models.
    pub fn disjoint_union(&self, other: &PairwiseModel) -> PairwiseModel {
        PairwiseModel {
            graph: self.graph.disjoint_union(&other.graph),
            couplings: [self.couplings.as_slice(), &other.couplings].concat(),
            fields: [self.fields.as_slice(), &other.fields].concat(),
        }
    }

    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            n: self.graph.vertex_count(),
            edges: self
                .graph
                .edges()
                .iter()
                .zip(&self.couplings)
                .map(|(&(u, v), &j)| ModelEdge { u, v, j })
                .collect(),
            h: self.fields.clone(),
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Self, BetheError> {
        let graph = Graph::new(doc.n, doc.edges.iter().map(|e| (e.u, e.v)))?;
        Self::new(graph, doc.edges.iter().map(|e| e.j).collect(), doc.h.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, BetheError> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| BetheError::InvalidModel(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// `{"n": int, "edges": [{"u":int,"v":int,"J":float}], "h": [float, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub n: usize,
    pub edges: Vec<ModelEdge>,
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEdge {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "J")]
    pub j: f64,
}

/// `ln Z` by exhaustive summation over all `2^n` configurations, visited in
/// Gray-code order so each step updates the energy in O(degree).
pub fn log_partition_function(model: &PairwiseModel) -> Result<f64, BetheError> {
    let g = &model.graph;
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(BetheError::TooLarge { found: n, limit: MAX_EXACT_VERTICES });
    }
    let mut state = vec![false; n];
    let mut energy = 0.0;
    let mut acc = LogSumExp::default();
    acc.push(energy);
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let mut delta = model.fields[v];
        for &(w, e) in g.neighbors(v) {
            if state[w] {
                delta += model.couplings[e];
            }
        }
        if state[v] {
            energy -= delta;
        } else {
            energy += delta;
        }
        state[v] = !state[v];
        acc.push(energy);
    }
    Ok(acc.value())
}

/// `Z(G; J, h)`.
pub fn partition_function(model: &PairwiseModel) -> Result<f64, BetheError> {
    log_partition_function(model).map(f64::exp)
}

/// Streaming `ln Σ exp(x_i)` with a running maximum and compensated sum.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, sum: 0.0, comp: 0.0 }
    }
}

impl LogSumExp {
    fn push(&mut self, x: f64) {
        if x > self.max {
            let scale = (self.max - x).exp();
            self.sum *= scale;
            self.comp *= scale;
            self.max = x;
            self.add(1.0);
        } else {
            self.add((x - self.max).exp());
        }
    }

    // Neumaier summation
    fn add(&mut self, y: f64) {
        let t = self.sum + y;
        if self.sum.abs() >= y.abs() {
            self.comp += (self.sum - t) + y;
        } else {
            self.comp += (y - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.max + (self.sum + self.comp).ln()
    }
}

/// Interactions induced on a cover: every cover edge and vertex inherits the
/// coupling and field of its projection.
pub fn lift_model(model: &PairwiseModel, cover: &CoverGraph) -> Result<PairwiseModel, BetheError> {
    if cover.base() != &model.graph {
        return Err(BetheError::ModelMismatch);
    }
    PairwiseModel::new(
        cover.graph().clone(),
        cover.edge_proj().iter().map(|&e| model.couplings[e]).collect(),
        cover.vertex_proj().iter().map(|&v| model.fields[v]).collect(),
    )
}

/// Relative error between `Z` and `∏_v e^{h_v} · p(G'; A, B)`, where `G'` is
/// the subdivision of the model graph, each midpoint carries
/// `A_uv = e^{J_uv} - 1` and each original vertex `B_v = e^{-h_v}`.
pub fn verify_subdivision_identity(model: &PairwiseModel) -> Result<f64, BetheError> {
    model.require_attractive()?;
    let g = &model.graph;
    let (sub, midpoints) = subdivide(g);
    if sub.vertex_count() > MAX_SUBDIVISION_VERTICES {
        return Err(BetheError::TooLarge { found: sub.vertex_count(), limit: MAX_SUBDIVISION_VERTICES });
    }
    let lhs = partition_function(model)?;

    let mut point = vec![0.0; sub.vertex_count()];
    for (v, &h) in model.fields.iter().enumerate() {
        point[v] = (-h).exp();
    }
    for (&mid, &j) in midpoints.iter().zip(&model.couplings) {
        point[mid] = j.exp_m1();
    }
    let indep = generating_polynomial(&sub, StructureFamily::IndependentSet);
    let value = indep.evaluate_f64(&point).expect("point sized to the subdivision");
    let rhs = model.fields.iter().sum::<f64>().exp() * value;
    Ok((lhs - rhs).abs() / lhs)
}

/// Node beliefs `b_v(s)` and edge beliefs `b_uv(s_u, s_v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoMarginals {
    pub node: Vec<[f64; 2]>,
    pub edge: Vec<[[f64; 2]; 2]>,
}

impl PseudoMarginals {
    /// Tables from node means `μ_v = b_v(1)` and edge correlations
    /// `ξ_uv = b_uv(1, 1)`.
    pub fn from_coordinates(g: &Graph, mu: &[f64], xi: &[f64]) -> Self {
        let node = mu.iter().map(|&m| [1.0 - m, m]).collect();
        let edge = g
            .edges()
            .iter()
            .zip(xi)
            .map(|(&(u, v), &x)| edge_table(mu[u], 1.0 - mu[u], mu[v], x))
            .collect();
        PseudoMarginals { node, edge }
    }

    /// Maximum violation of normalization, range or marginalization.
    pub fn consistency_error(&self, g: &Graph) -> f64 {
        let mut worst: f64 = 0.0;
        for b in &self.node {
            worst = worst.max((b[0] + b[1] - 1.0).abs());
            worst = worst.max(range_violation(b));
        }
        for (&(u, v), t) in g.edges().iter().zip(&self.edge) {
            let flat = [t[0][0], t[0][1], t[1][0], t[1][1]];
            worst = worst.max(range_violation(&flat));
            worst = worst.max((flat.iter().sum::<f64>() - 1.0).abs());
            for (s, row) in t.iter().enumerate() {
                worst = worst.max((row[0] + row[1] - self.node[u][s]).abs());
                worst = worst.max((t[0][s] + t[1][s] - self.node[v][s]).abs());
            }
        }
        worst
    }
}

fn range_violation(xs: &[f64]) -> f64 {
    xs.iter().map(|&x| (-x).max(x - 1.0).max(0.0)).fold(0.0, f64::max)
}

fn edge_table(mu_u: f64, nu_u: f64, mu_v: f64, xi: f64) -> [[f64; 2]; 2] {
    let b10 = mu_u - xi;
    let b01 = mu_v - xi;
    let b00 = nu_u - b01;
    [[b00, b01], [b10, xi]]
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn safe_ln(x: f64) -> f64 {
    x.max(f64::MIN_POSITIVE).ln()
}

/// The pairwise Bethe free energy
/// `F_B = Σ_uv Σ b_uv (ln b_uv − ln ψ_uv) − Σ_v (d_v − 1) Σ b_v ln b_v − Σ_v Σ b_v ln ψ_v`
/// with `ψ_uv = exp(J s_u s_v)` and `ψ_v = exp(h s)`.
pub fn bethe_free_energy(model: &PairwiseModel, b: &PseudoMarginals) -> f64 {
    let g = &model.graph;
    let mut f = 0.0;
    for (t, &j) in b.edge.iter().zip(&model.couplings) {
        f += t.iter().flatten().map(|&x| xlogx(x)).sum::<f64>() - j * t[1][1];
    }
    for (v, (nb, &h)) in b.node.iter().zip(&model.fields).enumerate() {
        let d = g.degree(v) as f64;
        f -= (d - 1.0) * (xlogx(nb[0]) + xlogx(nb[1]));
        f -= h * nb[1];
    }
    f
}

/// Partial derivatives of [`bethe_free_energy`] with respect to the node
/// means `μ` and edge correlations `ξ` at an interior point.
pub fn bethe_gradient(model: &PairwiseModel, mu: &[f64], xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let g = &model.graph;
    let mut grad_mu: Vec<f64> = mu
        .iter()
        .enumerate()
        .map(|(v, &m)| {
            let d = g.degree(v) as f64;
            -model.fields[v] - (d - 1.0) * (safe_ln(m) - safe_ln(1.0 - m))
        })
        .collect();
    let mut grad_xi = Vec::with_capacity(g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let t = edge_table(mu[u], 1.0 - mu[u], mu[v], xi[e]);
        let (l00, l01, l10, l11) = (safe_ln(t[0][0]), safe_ln(t[0][1]), safe_ln(t[1][0]), safe_ln(t[1][1]));
        grad_xi.push(-model.couplings[e] + l11 - l10 - l01 + l00);
        grad_mu[u] += l10 - l00;
        grad_mu[v] += l01 - l00;
    }
    (grad_mu, grad_xi)
}

/// The correlation `ξ` minimizing the edge term of `F_B` for fixed node means:
/// the root in the feasible interval of
/// `α ξ² − (1 + α(μ_u + μ_v)) ξ + (1 + α) μ_u μ_v = 0`, `α = e^J − 1`.
pub fn optimal_correlation(coupling: f64, mu_u: f64, mu_v: f64) -> f64 {
    let alpha = coupling.exp_m1();
    let b = 1.0 + alpha * (mu_u + mu_v);
    let disc = (b * b - 4.0 * alpha * (1.0 + alpha) * mu_u * mu_v).max(0.0);
    let xi = 2.0 * (1.0 + alpha) * mu_u * mu_v / (b + disc.sqrt());
    let lo = (mu_u + mu_v - 1.0).max(0.0);
    let hi = mu_u.min(mu_v);
    xi.clamp(lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetheOptions {
    pub restarts: usize,
    /// Convergence threshold on the projected gradient's max-norm.
    pub tolerance: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for BetheOptions {
    fn default() -> Self {
        BetheOptions { restarts: 100, tolerance: 1e-9, max_iters: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheResult {
    pub z_b: f64,
    pub log_z_b: f64,
    pub f_b_min: f64,
    pub minimizer: PseudoMarginals,
    pub restarts_used: usize,
    pub converged: bool,
    /// Distinct free-energy values of converged restarts, ascending.
    pub local_minima: Vec<f64>,
}

/// Cap on gradient-only iterations after values stop decreasing.
const POLISH_ITERS: usize = 200;

/// Node means are kept in `[ε, 1 − ε]`.
const MEAN_CLAMP: f64 = 1e-9;

/// Reduced objective over node logits: edge correlations are set to their
/// closed-form optimum, so by the envelope theorem the gradient is the
/// partial in `μ` at that point.
struct Reduced<'a> {
    model: &'a PairwiseModel,
    bound: f64,
}

impl<'a> Reduced<'a> {
    fn new(model: &'a PairwiseModel) -> Self {
        Reduced { model, bound: (MEAN_CLAMP / (1.0 - MEAN_CLAMP)).ln().abs() }
    }

    fn means(theta: &[f64]) -> Vec<f64> {
        theta.iter().map(|&t| 1.0 / (1.0 + (-t).exp())).collect()
    }

    fn correlations(&self, mu: &[f64]) -> Vec<f64> {
        self.model
            .graph
            .edges()
            .iter()
            .zip(&self.model.couplings)
            .map(|(&(u, v), &j)| optimal_correlation(j, mu[u], mu[v]))
            .collect()
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let mu = Self::means(theta);
        let xi = self.correlations(&mu);
        bethe_free_energy(self.model, &PseudoMarginals::from_coordinates(&self.model.graph, &mu, &xi))
    }

    /// Gradient in logit coordinates, with components that push out of the
    /// clamp box zeroed.
    fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let mu = Self::means(theta);
        let xi = self.correlations(&mu);
        let (grad_mu, _) = bethe_gradient(self.model, &mu, &xi);
        grad_mu
            .iter()
            .zip(&mu)
            .zip(theta)
            .map(|((&g, &m), &t)| {
                let gt = g * m * (1.0 - m);
                if (t >= self.bound && gt < 0.0) || (t <= -self.bound && gt > 0.0) {
                    0.0
                } else {
                    gt
                }
            })
            .collect()
    }

    fn clamp(&self, theta: &mut [f64]) {
        for t in theta {
            *t = t.clamp(-self.bound, self.bound);
        }
    }
}

struct Descent {
    theta: Vec<f64>,
    value: f64,
    converged: bool,
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Projected gradient descent with Barzilai–Borwein trial steps and Armijo
/// backtracking.
fn descend(obj: &Reduced, mut theta: Vec<f64>, opts: &BetheOptions) -> Descent {
    obj.clamp(&mut theta);
    let mut value = obj.value(&theta);
    let mut grad = obj.gradient(&theta);
    let mut step = 1.0;
    for _ in 0..opts.max_iters {
        if max_norm(&grad) <= opts.tolerance {
            return Descent { theta, value, converged: true };
        }
        let sq: f64 = grad.iter().map(|g| g * g).sum();
        let mut accepted = None;
        let mut trial_step = step;
        for _ in 0..60 {
            let mut trial: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - trial_step * g).collect();
            obj.clamp(&mut trial);
            let v = obj.value(&trial);
            if v <= value - 1e-4 * trial_step * sq {
                accepted = Some((trial, v));
                break;
            }
            trial_step *= 0.5;
        }
        let Some((next, next_value)) = accepted.filter(|(_, v)| *v < value) else {
            // values are flat at machine precision; finish on the gradient alone
            return polish(obj, theta, grad, step, opts);
        };
        let next_grad = obj.gradient(&next);
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..theta.len() {
            let s = next[i] - theta[i];
            let y = next_grad[i] - grad[i];
            ss += s * s;
            sy += s * y;
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-10, 1e10) } else { 1.0 };
        theta = next;
        value = next_value;
        grad = next_grad;
    }
    let converged = max_norm(&grad) <= opts.tolerance;
    Descent { theta, value, converged }
}

/// Drives the gradient below tolerance once objective values no longer
/// resolve progress: a step is accepted when it shrinks the gradient norm.
fn polish(obj: &Reduced, mut theta: Vec<f64>, mut grad: Vec<f64>, mut step: f64, opts: &BetheOptions) -> Descent {
    let mut norm = max_norm(&grad);
    for _ in 0..POLISH_ITERS {
        if norm <= opts.tolerance {
            break;
        }
        let mut accepted = None;
        let mut trial_step = step;
        for _ in 0..30 {
            let mut trial: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - trial_step * g).collect();
            obj.clamp(&mut trial);
            let g = obj.gradient(&trial);
            if max_norm(&g) < norm {
                accepted = Some((trial, g));
                break;
            }
            trial_step *= 0.5;
        }
        let Some((next, next_grad)) = accepted else { break };
        let (mut ss, mut sy) = (0.0, 0.0);
        for i in 0..theta.len() {
            let s = next[i] - theta[i];
            let y = next_grad[i] - grad[i];
            ss += s * s;
            sy += s * y;
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-10, 1e10) } else { trial_step };
        theta = next;
        grad = next_grad;
        norm = max_norm(&grad);
    }
    Descent { value: obj.value(&theta), theta, converged: norm <= opts.tolerance }
}

/// `Z_B = exp(−min F_B)` by multi-start minimization over the local
/// consistency polytope. Restart `r` starts from logits drawn uniformly in
/// `[−3, 3]` with seed `opts.seed + r`.
pub fn bethe_partition_function(model: &PairwiseModel, opts: &BetheOptions) -> BetheResult {
    let obj = Reduced::new(model);
    let n = model.graph.vertex_count();
    let restarts = opts.restarts.max(1);
    let runs: Vec<Descent> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
            let start = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            descend(&obj, start, opts)
        })
        .collect();

    let best = runs
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one restart");
    let mut minima: Vec<f64> = runs.iter().filter(|d| d.converged).map(|d| d.value).collect();
    minima.sort_by(f64::total_cmp);
    minima.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + b.abs()));

    // a non-stationary run may undercut a converged one by rounding noise
    let converged = runs
        .iter()
        .any(|d| d.converged && d.value - best.value <= 1e-10 * (1.0 + best.value.abs()));

    let mu = Reduced::means(&best.theta);
    let xi = obj.correlations(&mu);
    BetheResult {
        z_b: (-best.value).exp(),
        log_z_b: -best.value,
        f_b_min: best.value,
        minimizer: PseudoMarginals::from_coordinates(&model.graph, &mu, &xi),
        restarts_used: restarts,
        converged,
        local_minima: minima,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanMode {
    Exact { cap: u64 },
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverMean {
    pub m: usize,
    pub covers: u64,
    pub log_mean: f64,
    pub mean: f64,
    /// `⟨Z(G̃)⟩^{1/M}`.
    pub mean_root: f64,
    pub log_z: f64,
    pub z: f64,
}

/// Average of `Z(G̃)` over all (or sampled) M-covers, summed in fixed
/// enumeration order.
pub fn cover_mean(model: &PairwiseModel, m: usize, mode: MeanMode) -> Result<CoverMean, BetheError> {
    let g = &model.graph;
    let lift_log_z = |a: &VoltageAssignment| -> Result<f64, BetheError> {
        let cover = build_cover(g, a)?;
        log_partition_function(&lift_model(model, &cover)?)
    };
    if m * g.vertex_count() > MAX_EXACT_VERTICES {
        return Err(BetheError::TooLarge { found: m * g.vertex_count(), limit: MAX_EXACT_VERTICES });
    }
    let logs: Vec<f64> = match mode {
        MeanMode::Exact { cap } => {
            let total = enumerate_assignments(g, m, cap)?.total() as u64;
            (0..total)
                .into_par_iter()
                .map(|r| lift_log_z(&VoltageAssignment::from_rank(g.edge_count(), m, r as u128)?))
                .collect::<Result<_, _>>()?
        }
        MeanMode::Sampled { count, seed } => {
            let samples: Vec<VoltageAssignment> = AssignmentSampler::new(g, m, seed)?.take(count as usize).collect();
            samples.par_iter().map(lift_log_z).collect::<Result<_, _>>()?
        }
    };
    let mut acc = LogSumExp::default();
    for &l in &logs {
        acc.push(l);
    }
    let covers = logs.len() as u64;
    let log_mean = acc.value() - (covers as f64).ln();
    let log_z = log_partition_function(model)?;
    Ok(CoverMean {
        m,
        covers,
        log_mean,
        mean: log_mean.exp(),
        mean_root: (log_mean / m as f64).exp(),
        log_z,
        z: log_z.exp(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverBound {
    pub m: usize,
    pub log_z_base_pow: f64,
    pub log_z_cover: f64,
    pub z_base_pow: f64,
    pub z_cover: f64,
    /// `Z(G̃) ≤ Z(G)^M (1 + 1e-9)`.
    pub holds: bool,
    /// Both sides agree to relative `1e-9`.
    pub equal: bool,
}

/// Compares `Z(G)^M` with `Z(G̃)` for the cover given by `a`.
pub fn check_cover_bound(model: &PairwiseModel, a: &VoltageAssignment) -> Result<CoverBound, BetheError> {
    model.require_attractive()?;
    let cover = build_cover(&model.graph, a)?;
    let lifted = lift_model(model, &cover)?;
    let log_z_base_pow = a.m() as f64 * log_partition_function(model)?;
    let log_z_cover = log_partition_function(&lifted)?;
    let slack = BOUND_TOLERANCE.ln_1p();
    Ok(CoverBound {
        m: a.m(),
        log_z_base_pow,
        log_z_cover,
        z_base_pow: log_z_base_pow.exp(),
        z_cover: log_z_cover.exp(),
        holds: log_z_cover <= log_z_base_pow + slack,
        equal: (log_z_cover - log_z_base_pow).abs() <= slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{trivial_cover, Permutation};
    use crate::graph::named;

    fn uniform(g: Graph, j: f64, h: f64) -> PairwiseModel {
        let (m, n) = (g.edge_count(), g.vertex_count());
        PairwiseModel::new(g, vec![j; m], vec![h; n]).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn k2_partition_functions() {
        assert!(rel(partition_function(&uniform(named::path(2), 0.0, 0.0)).unwrap(), 4.0) < 1e-15);
        assert!(rel(partition_function(&uniform(named::path(2), 2f64.ln(), 0.0)).unwrap(), 5.0) < 1e-15);
    }

    #[test]
    fn large_weights_stay_finite_in_log_space() {
        let model = uniform(named::complete(6), 200.0, 50.0);
        let lz = log_partition_function(&model).unwrap();
        // all-ones state dominates: 15·200 + 6·50
        assert!((lz - 3300.0).abs() < 1e-9);
    }

    #[test]
    fn size_guard() {
        let model = uniform(Graph::empty(31), 0.0, 0.0);
        assert_eq!(log_partition_function(&model), Err(BetheError::TooLarge { found: 31, limit: 30 }));
    }

    #[test]
    fn model_validation_and_json() {
        let g = named::path(2);
        assert!(PairwiseModel::new(g.clone(), vec![1.0, 2.0], vec![0.0; 2]).is_err());
        assert!(PairwiseModel::new(g.clone(), vec![f64::NAN], vec![0.0; 2]).is_err());
        let model = PairwiseModel::from_json(r#"{"n":2,"edges":[{"u":0,"v":1,"J":0.5}],"h":[0.1,-0.2]}"#).unwrap();
        assert_eq!(model.couplings(), &[0.5]);
        assert!(model.is_attractive());
        let text = serde_json::to_string(&model.to_doc()).unwrap();
        assert!(text.contains("\"J\":0.5"));
        assert_eq!(PairwiseModel::from_json(&text).unwrap(), model);
    }

    #[test]
    fn lifted_trivial_cover_factorizes() {
        let model = uniform(named::path(2), 1.0, 0.0);
        let cover = trivial_cover(model.graph(), 2).unwrap();
        let lifted = lift_model(&model, &cover).unwrap();
        assert_eq!(lifted.couplings(), &[1.0, 1.0]);
        let z = partition_function(&model).unwrap();
        assert!(rel(partition_function(&lifted).unwrap(), z * z) < 1e-14);
        let one = trivial_cover(model.graph(), 1).unwrap();
        assert_eq!(lift_model(&model, &one).unwrap(), model);
    }

    #[test]
    fn lifted_twisted_c4_repeats_pattern() {
        let g = named::cycle(4);
        let model = PairwiseModel::new(g.clone(), vec![0.1, 0.2, 0.3, 0.4], vec![0.0; 4]).unwrap();
        let mut perms = vec![Permutation::identity(2); 4];
        perms[3] = Permutation::from_images(vec![1, 0]).unwrap();
        let cover = build_cover(&g, &VoltageAssignment::new(2, perms).unwrap()).unwrap();
        let lifted = lift_model(&model, &cover).unwrap();
        assert_eq!(lifted.couplings(), &[0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4]);
        assert!(lift_model(&uniform(named::cycle(5), 0.0, 0.0), &cover).is_err());
    }

    #[test]
    fn subdivision_identity_examples() {
        let k2 = uniform(named::path(2), 2f64.ln(), 0.0);
        assert!(verify_subdivision_identity(&k2).unwrap() < 1e-15);
        let free = uniform(named::grid(2, 3), 0.0, 0.0);
        assert!(verify_subdivision_identity(&free).unwrap() < 1e-15);
        let repulsive = uniform(named::path(2), -0.5, 0.0);
        assert!(matches!(verify_subdivision_identity(&repulsive), Err(BetheError::NonAttractive { edge: 0, .. })));
    }

    #[test]
    fn single_vertex_bethe_is_exact() {
        for h in [-2.0, 0.0, 0.7, 3.0] {
            let model = uniform(Graph::empty(1), 0.0, h);
            let r = bethe_partition_function(&model, &BetheOptions { restarts: 3, ..Default::default() });
            assert!(r.converged);
            assert!(rel(r.z_b, 1.0 + f64::exp(h)) < 1e-12, "h={h}: {}", r.z_b);
        }
    }

    #[test]
    fn path_bethe_is_exact() {
        let model = PairwiseModel::new(named::path(4), vec![0.5, -1.0, 2.0], vec![0.3, -0.4, 0.1, 1.2]).unwrap();
        let r = bethe_partition_function(&model, &BetheOptions { restarts: 5, ..Default::default() });
        let z = partition_function(&model).unwrap();
        assert!(r.converged);
        assert!(rel(r.z_b, z) < 1e-8, "{} vs {z}", r.z_b);
        assert!(r.minimizer.consistency_error(model.graph()) < 1e-12);
        assert!((r.z_b.ln() + r.f_b_min).abs() < 1e-12);
    }

    #[test]
    fn optimal_correlation_is_stationary() {
        for &(j, mu_u, mu_v) in &[(0.0, 0.3, 0.6), (1.5, 0.2, 0.9), (-2.0, 0.5, 0.5), (4.0, 0.01, 0.02)] {
            let xi = optimal_correlation(j, mu_u, mu_v);
            let t = edge_table(mu_u, 1.0 - mu_u, mu_v, xi);
            let log_ratio = (t[1][1] * t[0][0] / (t[1][0] * t[0][1])).ln();
            assert!((log_ratio - j).abs() < 1e-9, "J={j}: {log_ratio}");
        }
        assert!((optimal_correlation(0.0, 0.3, 0.6) - 0.18).abs() < 1e-15);
    }

    #[test]
    fn cover_means_of_an_edge() {
        let model = uniform(named::path(2), 0.8, -0.3);
        let z = partition_function(&model).unwrap();
        for m in 1..=3 {
            let cm = cover_mean(&model, m, MeanMode::Exact { cap: 1000 }).unwrap();
            assert!(rel(cm.mean_root, z) < 1e-12);
        }
        let cm = cover_mean(&uniform(named::cycle(4), 0.5, 0.1), 1, MeanMode::Exact { cap: 10 }).unwrap();
        assert_eq!(cm.covers, 1);
        assert!(rel(cm.mean, cm.z) < 1e-14);
    }

    #[test]
    fn sampled_cover_mean_is_reproducible() {
        let model = uniform(named::cycle(4), 0.5, 0.1);
        let a = cover_mean(&model, 2, MeanMode::Sampled { count: 20, seed: 3 }).unwrap();
        let b = cover_mean(&model, 2, MeanMode::Sampled { count: 20, seed: 3 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.covers, 20);
    }

    #[test]
    fn trivial_cover_bound_is_equality() {
        let model = uniform(named::cycle(4), 1.0, -0.5);
        let a = VoltageAssignment::identity(4, 3).unwrap();
        let b = check_cover_bound(&model, &a).unwrap();
        assert!(b.holds && b.equal);
    }
}
