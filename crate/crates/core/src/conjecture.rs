//! Coefficient-wise dominance checks of projected cover polynomials against
//! the M-th power of the base polynomial.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, One};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::covers::{
    assignment_count, build_cover, enumerate_assignments, switching, trivial_cover, AssignmentDoc, AssignmentSampler,
    CoverError, CoverGraph, VoltageAssignment, DEFAULT_ENUMERATION_CAP,
};
use crate::families::{for_each_structure, generating_polynomial, is_structure, StructureFamily};
use crate::graph::Graph;
use crate::poly::{dominates, dominates_by_support, GroundKind, Polynomial};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Refuse exhaustive enumeration above this many assignments.
    pub cap: u64,
    /// Check one representative per switching (cover isomorphism) class.
    pub dedup: bool,
    /// Report inadmissible inputs as skipped instead of checking them.
    pub skip_inadmissible: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { cap: DEFAULT_ENUMERATION_CAP, dedup: false, skip_inadmissible: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    SkippedInadmissible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationDoc {
    pub exp: Vec<u32>,
    pub projected: String,
    pub power: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetViolationDoc {
    pub support: Vec<usize>,
    pub projected: String,
    pub power: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub cover_structures: String,
    pub projected_monomials: usize,
    pub power_monomials: usize,
}

/// Outcome of checking a single cover.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub graph_digest: String,
    pub family: StructureFamily,
    pub m: usize,
    pub assignment: AssignmentDoc,
    pub status: Status,
    pub inadmissible: bool,
    pub violations: Vec<ViolationDoc>,
    pub checked: u64,
    /// Digest of (graph, assignment, family).
    pub digest: String,
    /// Comparison after summing coefficients over equal supports.
    pub set_violations: Vec<SetViolationDoc>,
    pub counters: Counters,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Outcome of checking every cover of a given degree.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateReport {
    pub graph_digest: String,
    pub family: StructureFamily,
    pub m: usize,
    pub status: Status,
    pub inadmissible: bool,
    pub checked: u64,
    pub held: u64,
    pub violated: u64,
    /// `(m!)^|E|`, as a decimal string.
    pub total_assignments: String,
    pub dedup: bool,
    /// Sampler seed when covers were drawn rather than enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// The violating assignment of smallest enumeration rank.
    pub first_violation: Option<CheckReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Counts structures of `cover` grouped by projected exponent vector, using
/// counter type `C`. Returns `None` if any count overflows `C`.
pub fn accumulate_projected<C>(cover: &CoverGraph, f: StructureFamily) -> Option<HashMap<Vec<u32>, C>>
where
    C: CheckedAdd + One + Copy,
{
    let (proj, size) = projection(cover, f);
    let mut counts: HashMap<Vec<u32>, C> = HashMap::new();
    let mut exps = vec![0u32; size];
    let mut overflow = false;
    for_each_structure(cover.graph(), f, |members| {
        if overflow {
            return;
        }
        exps.iter_mut().for_each(|e| *e = 0);
        for &w in members {
            exps[proj[w]] += 1;
        }
        match counts.get_mut(exps.as_slice()) {
            Some(c) => match c.checked_add(&C::one()) {
                Some(next) => *c = next,
                None => overflow = true,
            },
            None => {
                counts.insert(exps.clone(), C::one());
            }
        }
    });
    (!overflow).then_some(counts)
}

fn projection(cover: &CoverGraph, f: StructureFamily) -> (&[usize], usize) {
    match f.ground_kind() {
        GroundKind::Vertices => (cover.vertex_proj(), cover.base().vertex_count()),
        GroundKind::Edges => (cover.edge_proj(), cover.base().edge_count()),
    }
}

/// `Π(p(cover))` computed in one pass over the cover's structures, with a
/// `u64` fast path that falls back to exact projection on overflow.
pub fn projected_generating_polynomial(cover: &CoverGraph, f: StructureFamily) -> Polynomial {
    let ground = f.ground_set(cover.base());
    match accumulate_projected::<u64>(cover, f) {
        Some(counts) => Polynomial::from_terms(ground, counts),
        None => generating_polynomial(cover.graph(), f).project(cover).expect("cover ground set"),
    }
}

/// Checks every cover of one base graph, family and degree against a
/// precomputed power polynomial.
#[derive(Debug, Clone)]
pub struct Checker<'g> {
    graph: &'g Graph,
    family: StructureFamily,
    m: usize,
    power: Polynomial,
    admissible: bool,
    graph_digest: String,
    options: CheckOptions,
}

impl<'g> Checker<'g> {
    pub fn new(graph: &'g Graph, family: StructureFamily, m: usize, options: CheckOptions) -> Result<Self, Error> {
        if m == 0 {
            return Err(CoverError::ZeroDegree.into());
        }
        let exponent = u32::try_from(m).map_err(|_| CoverError::TooMany { count: m.to_string(), cap: u32::MAX as u64 })?;
        Ok(Checker {
            graph,
            family,
            m,
            power: generating_polynomial(graph, family).pow(exponent),
            admissible: family.admissible(graph),
            graph_digest: graph.digest(),
            options,
        })
    }

    pub fn power(&self) -> &Polynomial {
        &self.power
    }

    pub fn admissible(&self) -> bool {
        self.admissible
    }

    pub fn check(&self, a: &VoltageAssignment) -> Result<CheckReport, Error> {
        let start = Instant::now();
        if a.m() != self.m {
            return Err(Error::DegreeMismatch { expected: self.m, found: a.m() });
        }
        let doc = a.to_doc(self.graph);
        let digest = content_digest(self.graph, &doc, self.family);
        let mut report = CheckReport {
            graph_digest: self.graph_digest.clone(),
            family: self.family,
            m: self.m,
            assignment: doc,
            status: Status::SkippedInadmissible,
            inadmissible: !self.admissible,
            violations: Vec::new(),
            checked: 0,
            digest,
            set_violations: Vec::new(),
            counters: Counters {
                cover_structures: "0".into(),
                projected_monomials: 0,
                power_monomials: self.power.len(),
            },
            elapsed: Duration::ZERO,
        };
        if !self.admissible && self.options.skip_inadmissible {
            report.elapsed = start.elapsed();
            return Ok(report);
        }

        let cover = build_cover(self.graph, a)?;
        let projected = projected_generating_polynomial(&cover, self.family);
        let violations = dominates(&self.power, &projected)?;
        let set_violations = dominates_by_support(&self.power, &projected)?;

        report.status = if violations.is_empty() { Status::Holds } else { Status::Violated };
        report.violations = violations
            .into_iter()
            .map(|v| ViolationDoc {
                exp: v.monomial.exponents().to_vec(),
                projected: v.small.to_string(),
                power: v.big.to_string(),
            })
            .collect();
        report.set_violations = set_violations
            .into_iter()
            .map(|v| SetViolationDoc { support: v.support, projected: v.small.to_string(), power: v.big.to_string() })
            .collect();
        report.checked = 1;
        report.counters.cover_structures = projected.terms().map(|(_, c)| c).sum::<BigUint>().to_string();
        report.counters.projected_monomials = projected.len();
        report.elapsed = start.elapsed();
        Ok(report)
    }

    /// Checks every assignment (or one per switching class when deduplicating).
    pub fn check_all(&self) -> Result<AggregateReport, Error> {
        let start = Instant::now();
        let total = assignment_count(self.graph.edge_count(), self.m);
        let total_str = total.map_or_else(|| format!("({}!)^{}", self.m, self.graph.edge_count()), |t| t.to_string());
        let mut agg = AggregateReport {
            graph_digest: self.graph_digest.clone(),
            family: self.family,
            m: self.m,
            status: Status::SkippedInadmissible,
            inadmissible: !self.admissible,
            checked: 0,
            held: 0,
            violated: 0,
            total_assignments: total_str,
            dedup: self.options.dedup,
            seed: None,
            first_violation: None,
            elapsed: Duration::ZERO,
        };
        if !self.admissible && self.options.skip_inadmissible {
            agg.elapsed = start.elapsed();
            return Ok(agg);
        }

        let partial = if self.options.dedup {
            let forest = switching::Forest::new(self.graph);
            let reps = assignment_count(forest.cotree_edges(), self.m)
                .filter(|&c| c <= self.options.cap as u128)
                .ok_or_else(|| CoverError::TooMany {
                    count: format!("({}!)^{}", self.m, forest.cotree_edges()),
                    cap: self.options.cap,
                })?;
            self.check_ranks(reps as u64, |r| {
                let a = switching::gauge_fixed_from_rank(self.graph, &forest, self.m, r as u128);
                (switching::canonical(self.graph, &forest, &a) == a).then_some(a)
            })?
        } else {
            let stream = enumerate_assignments(self.graph, self.m, self.options.cap)?;
            let edges = self.graph.edge_count();
            let m = self.m;
            self.check_ranks(stream.total() as u64, |r| {
                Some(VoltageAssignment::from_rank(edges, m, r as u128).expect("m >= 1"))
            })?
        };

        agg.checked = partial.checked;
        agg.violated = partial.violated;
        agg.held = partial.checked - partial.violated;
        agg.status = if partial.violated == 0 { Status::Holds } else { Status::Violated };
        agg.first_violation = partial.first.map(|(_, r)| r);
        agg.elapsed = start.elapsed();
        Ok(agg)
    }

    /// Checks `count` assignments drawn from the sampler seeded with `seed`;
    /// the first violation is the earliest in draw order.
    pub fn check_sampled(&self, count: u64, seed: u64) -> Result<AggregateReport, Error> {
        let start = Instant::now();
        let samples: Vec<VoltageAssignment> = AssignmentSampler::new(self.graph, self.m, seed)?.take(count as usize).collect();
        let mut agg = AggregateReport {
            graph_digest: self.graph_digest.clone(),
            family: self.family,
            m: self.m,
            status: Status::SkippedInadmissible,
            inadmissible: !self.admissible,
            checked: 0,
            held: 0,
            violated: 0,
            total_assignments: assignment_count(self.graph.edge_count(), self.m)
                .map_or_else(|| format!("({}!)^{}", self.m, self.graph.edge_count()), |t| t.to_string()),
            dedup: false,
            seed: Some(seed),
            first_violation: None,
            elapsed: Duration::ZERO,
        };
        if !self.admissible && self.options.skip_inadmissible {
            agg.elapsed = start.elapsed();
            return Ok(agg);
        }
        let partial = self.check_ranks(count, |i| Some(samples[i as usize].clone()))?;
        agg.checked = partial.checked;
        agg.violated = partial.violated;
        agg.held = partial.checked - partial.violated;
        agg.status = if partial.violated == 0 { Status::Holds } else { Status::Violated };
        agg.first_violation = partial.first.map(|(_, r)| r);
        agg.elapsed = start.elapsed();
        Ok(agg)
    }

    fn check_ranks<F>(&self, total: u64, assignment_at: F) -> Result<Partial, Error>
    where
        F: Fn(u64) -> Option<VoltageAssignment> + Sync,
    {
        (0..total)
            .into_par_iter()
            .try_fold(Partial::default, |mut acc, rank| -> Result<Partial, Error> {
                if let Some(a) = assignment_at(rank) {
                    let report = self.check(&a)?;
                    acc.checked += 1;
                    if report.status == Status::Violated {
                        acc.violated += 1;
                        if acc.first.as_ref().is_none_or(|(r, _)| rank < *r) {
                            acc.first = Some((rank, report));
                        }
                    }
                }
                Ok(acc)
            })
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))
    }
}

#[derive(Default)]
struct Partial {
    checked: u64,
    violated: u64,
    first: Option<(u64, CheckReport)>,
}

impl Partial {
    fn merge(self, other: Partial) -> Partial {
        let first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        Partial { checked: self.checked + other.checked, violated: self.violated + other.violated, first }
    }
}

/// SHA-256 over the graph serialization, assignment JSON and family tag.
pub fn content_digest(g: &Graph, assignment: &AssignmentDoc, family: StructureFamily) -> String {
    let mut h = Sha256::new();
    h.update(g.to_edge_list().as_bytes());
    h.update(serde_json::to_vec(assignment).expect("assignment serializes"));
    h.update(family.as_str().as_bytes());
    hex::encode(h.finalize())
}

/// Checks `Π(p(G̃)) ⪯ p(G)^M` for the cover given by `a`.
pub fn check_cover(g: &Graph, a: &VoltageAssignment, f: StructureFamily) -> Result<CheckReport, Error> {
    Checker::new(g, f, a.m(), CheckOptions::default())?.check(a)
}

/// Checks every M-cover of `g`.
pub fn check_all_covers(g: &Graph, m: usize, f: StructureFamily, options: CheckOptions) -> Result<AggregateReport, Error> {
    Checker::new(g, f, m, options)?.check_all()
}

/// Looks for a violating cover over `graphs` and degrees `1..=m_max`.
/// Degrees within the enumeration cap are exhausted; larger ones are sampled
/// `budget` times from a stream seeded by `(seed, graph index, degree)`.
pub fn search_counterexample(
    graphs: &[Graph],
    m_max: usize,
    f: StructureFamily,
    budget: u64,
    seed: u64,
    options: CheckOptions,
) -> Result<Option<CheckReport>, Error> {
    for (gi, g) in graphs.iter().enumerate() {
        for m in 1..=m_max {
            let checker = Checker::new(g, f, m, options)?;
            let enumerable = if options.dedup {
                assignment_count(switching::Forest::new(g).cotree_edges(), m)
            } else {
                assignment_count(g.edge_count(), m)
            }
            .is_some_and(|c| c <= options.cap as u128);
            if enumerable {
                if let Some(report) = checker.check_all()?.first_violation {
                    return Ok(Some(report));
                }
                continue;
            }
            let stream_seed = seed ^ ((gi as u64) << 32 | m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let samples: Vec<VoltageAssignment> =
                AssignmentSampler::new(g, m, stream_seed)?.take(budget as usize).collect();
            let first = samples
                .par_iter()
                .enumerate()
                .map(|(i, a)| checker.check(a).map(|r| (r.status == Status::Violated).then_some((i, r))))
                .try_reduce(
                    || None,
                    |a, b| {
                        Ok(match (a, b) {
                            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                            (x, y) => x.or(y),
                        })
                    },
                )?;
            if let Some((_, report)) = first {
                return Ok(Some(report));
            }
        }
    }
    Ok(None)
}

/// Counts structures of `cover` whose projection has exponent vector `exps`
/// by choosing, for every base element, that many members of its fiber and
/// testing the union with [`is_structure`].
pub fn recount_signature(cover: &CoverGraph, f: StructureFamily, exps: &[u32]) -> BigUint {
    let (proj, size) = projection(cover, f);
    assert_eq!(exps.len(), size, "exponent vector length");
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (w, &b) in proj.iter().enumerate() {
        fibers[b].push(w);
    }
    let mut count = BigUint::default();
    let mut chosen = Vec::new();
    recount_rec(cover.graph(), f, &fibers, exps, 0, &mut chosen, &mut count);
    count
}

fn recount_rec(
    g: &Graph,
    f: StructureFamily,
    fibers: &[Vec<usize>],
    exps: &[u32],
    i: usize,
    chosen: &mut Vec<usize>,
    count: &mut BigUint,
) {
    if i == fibers.len() {
        if is_structure(g, f, chosen) {
            *count += 1u8;
        }
        return;
    }
    let k = exps[i] as usize;
    if k > fibers[i].len() {
        return;
    }
    let mut pick = Vec::with_capacity(k);
    choose(&fibers[i], k, 0, &mut pick, &mut |subset| {
        let before = chosen.len();
        chosen.extend_from_slice(subset);
        recount_rec(g, f, fibers, exps, i + 1, chosen, count);
        chosen.truncate(before);
    });
}

fn choose(items: &[usize], k: usize, from: usize, pick: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        visit(pick);
        return;
    }
    for j in from..items.len() {
        if items.len() - j < k - pick.len() {
            break;
        }
        pick.push(items[j]);
        choose(items, k, j + 1, pick, visit);
        pick.pop();
    }
}

/// Re-derives every violation in `report` independently: the projected
/// coefficient by fiber-signature recounting in the cover, the power
/// coefficient by the same recount in the trivial cover.
pub fn reverify(g: &Graph, report: &CheckReport) -> Result<bool, Error> {
    let a = VoltageAssignment::from_doc(g, &report.assignment)?;
    let cover = build_cover(g, &a)?;
    let trivial = trivial_cover(g, a.m())?;
    for v in &report.violations {
        let projected = recount_signature(&cover, report.family, &v.exp);
        let power = recount_signature(&trivial, report.family, &v.exp);
        if projected.to_string() != v.projected || power.to_string() != v.power || projected <= power {
            return Ok(false);
        }
    }
    Ok(report.status != Status::Violated || !report.violations.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::Permutation;
    use crate::graph::named;

    fn twisted_c3() -> (Graph, VoltageAssignment) {
        let g = named::cycle(3);
        let mut perms = vec![Permutation::identity(2); 3];
        perms[0] = Permutation::from_images(vec![1, 0]).unwrap();
        (g, VoltageAssignment::new(2, perms).unwrap())
    }

    fn c12_cover() -> (Graph, VoltageAssignment) {
        let g = named::cycle(4);
        let mut perms = vec![Permutation::identity(3); 4];
        perms[3] = Permutation::from_images(vec![1, 2, 0]).unwrap();
        (g, VoltageAssignment::new(3, perms).unwrap())
    }

    #[test]
    fn c12_example_holds() {
        let (g, a) = c12_cover();
        let r = check_cover(&g, &a, StructureFamily::IndependentSet).unwrap();
        assert_eq!(r.status, Status::Holds);
        assert!(!r.inadmissible);
        assert_eq!(r.counters.cover_structures, "322");
    }

    #[test]
    fn twisted_triangle_cover_violates() {
        let (g, a) = twisted_c3();
        let r = check_cover(&g, &a, StructureFamily::IndependentSet).unwrap();
        assert_eq!(r.status, Status::Violated);
        assert!(r.inadmissible);
        assert_eq!(
            r.violations,
            vec![ViolationDoc { exp: vec![1, 1, 1], projected: "2".into(), power: "0".into() }]
        );
        assert!(reverify(&g, &r).unwrap());
        // supports {0,1,2} only arise from the violating monomial
        assert_eq!(r.set_violations.len(), 1);
        assert_eq!(r.set_violations[0].support, vec![0, 1, 2]);
    }

    #[test]
    fn skip_mode_reports_inadmissible() {
        let (g, a) = twisted_c3();
        let opts = CheckOptions { skip_inadmissible: true, ..CheckOptions::default() };
        let r = Checker::new(&g, StructureFamily::IndependentSet, 2, opts).unwrap().check(&a).unwrap();
        assert_eq!(r.status, Status::SkippedInadmissible);
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn trivial_covers_hold_with_equality() {
        for g in [named::cycle(4), named::complete(4), named::path(4)] {
            for f in StructureFamily::ALL {
                let a = VoltageAssignment::identity(g.edge_count(), 2).unwrap();
                let cover = build_cover(&g, &a).unwrap();
                let checker = Checker::new(&g, f, 2, CheckOptions::default()).unwrap();
                assert_eq!(projected_generating_polynomial(&cover, f), *checker.power());
                assert_eq!(checker.check(&a).unwrap().status, Status::Holds);
            }
        }
    }

    #[test]
    fn fast_projection_matches_exact_route() {
        let g = named::complete_bipartite(2, 3);
        for f in StructureFamily::ALL {
            for seed in 0..4 {
                let a = crate::covers::sample_assignment(&g, 2, seed).unwrap();
                let cover = build_cover(&g, &a).unwrap();
                let exact = generating_polynomial(cover.graph(), f).project(&cover).unwrap();
                assert_eq!(projected_generating_polynomial(&cover, f), exact);
            }
        }
    }

    #[test]
    fn narrow_counters_detect_overflow() {
        // 11 isolated cover vertices over one base vertex: coefficient of
        // x0^5 is C(11,5) = 462
        let g = Graph::empty(1);
        let cover = trivial_cover(&g, 11).unwrap();
        assert!(accumulate_projected::<u8>(&cover, StructureFamily::IndependentSet).is_none());
        let wide = accumulate_projected::<u64>(&cover, StructureFamily::IndependentSet).unwrap();
        assert_eq!(wide[&vec![5]], 462);
    }

    #[test]
    fn exhaustive_small_cases() {
        let c4 = named::cycle(4);
        let r = check_all_covers(&c4, 2, StructureFamily::IndependentSet, CheckOptions::default()).unwrap();
        assert_eq!((r.checked, r.held, r.status), (16, 16, Status::Holds));

        let c3 = named::cycle(3);
        let r = check_all_covers(&c3, 2, StructureFamily::IndependentSet, CheckOptions::default()).unwrap();
        assert_eq!(r.checked, 8);
        assert_eq!(r.status, Status::Violated);
        let first = r.first_violation.unwrap();
        // rank 1 flips the last edge: the smallest-rank twisted cover
        assert_eq!(first.assignment.edges[2].perm, vec![1, 0]);
        assert!(reverify(&c3, &first).unwrap());
    }

    #[test]
    fn dedup_checks_one_cover_per_class() {
        let c4 = named::cycle(4);
        let opts = CheckOptions { dedup: true, ..CheckOptions::default() };
        let r = check_all_covers(&c4, 2, StructureFamily::IndependentSet, opts).unwrap();
        assert_eq!(r.checked, 2);
        assert_eq!(r.status, Status::Holds);

        let c3 = named::cycle(3);
        let r = check_all_covers(&c3, 2, StructureFamily::IndependentSet, opts).unwrap();
        assert_eq!((r.checked, r.violated), (2, 1));
    }

    #[test]
    fn cap_is_enforced() {
        let opts = CheckOptions { cap: 10, ..CheckOptions::default() };
        assert!(matches!(
            check_all_covers(&named::cycle(4), 2, StructureFamily::IndependentSet, opts),
            Err(Error::Cover(CoverError::TooMany { .. }))
        ));
    }

    #[test]
    fn search_examples() {
        let opts = CheckOptions::default();
        let bip = [named::cycle(4), named::complete_bipartite(2, 3), named::path(4)];
        assert!(search_counterexample(&bip, 2, StructureFamily::IndependentSet, 0, 1, opts).unwrap().is_none());
        let found = search_counterexample(&[named::cycle(3)], 2, StructureFamily::IndependentSet, 0, 1, opts)
            .unwrap()
            .unwrap();
        assert_eq!(found.violations[0].exp, vec![1, 1, 1]);
        assert!(search_counterexample(&[], 3, StructureFamily::Matching, 10, 1, opts).unwrap().is_none());
    }

    #[test]
    fn sampled_search_is_deterministic() {
        let opts = CheckOptions { cap: 1, ..CheckOptions::default() };
        let graphs = [named::cycle(5)];
        let a = search_counterexample(&graphs, 2, StructureFamily::IndependentSet, 50, 9, opts).unwrap();
        let b = search_counterexample(&graphs, 2, StructureFamily::IndependentSet, 50, 9, opts).unwrap();
        assert_eq!(a.map(|r| r.digest), b.map(|r| r.digest));
    }

    #[test]
    fn recount_matches_coefficients() {
        let (g, a) = c12_cover();
        let cover = build_cover(&g, &a).unwrap();
        let projected = projected_generating_polynomial(&cover, StructureFamily::IndependentSet);
        for (m, c) in projected.terms() {
            assert_eq!(recount_signature(&cover, StructureFamily::IndependentSet, m.exponents()), *c);
        }
    }
}
