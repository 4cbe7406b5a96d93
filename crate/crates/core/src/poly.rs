//! Exact sparse multivariate polynomials with non-negative integer
//! coefficients over a vertex or edge ground set.
//!
//! Terms live in a `BTreeMap` keyed by dense exponent vectors, so iteration
//! follows ascending lexicographic order of exponent vectors and two
//! polynomials are equal exactly when their term maps are.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::CoverGraph;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ground set mismatch: {left} vs {right}")]
    GroundMismatch { left: GroundSet, right: GroundSet },
    #[error("point has {found} coordinates, ground set has {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("invalid polynomial document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundKind {
    Vertices,
    Edges,
}

/// The indeterminates of a polynomial: `x_i` per vertex or `y_i` per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    pub kind: GroundKind,
    pub size: usize,
}

impl GroundSet {
    pub fn vertices(size: usize) -> Self {
        GroundSet { kind: GroundKind::Vertices, size }
    }

    pub fn edges(size: usize) -> Self {
        GroundSet { kind: GroundKind::Edges, size }
    }

    /// The vertex or edge ground set of `g`.
    pub fn of_graph(g: &Graph, kind: GroundKind) -> Self {
        match kind {
            GroundKind::Vertices => Self::vertices(g.vertex_count()),
            GroundKind::Edges => Self::edges(g.edge_count()),
        }
    }

    pub fn label(&self, index: usize) -> String {
        match self.kind {
            GroundKind::Vertices => format!("x{index}"),
            GroundKind::Edges => format!("y{index}"),
        }
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            GroundKind::Vertices => "vertices",
            GroundKind::Edges => "edges",
        };
        write!(f, "{kind}[{}]", self.size)
    }
}

/// Dense exponent vector, one entry per ground-set element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(size: usize) -> Self {
        Monomial(vec![0; size])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// Square-free monomial with exponent 1 on each listed index.
    pub fn from_support(size: usize, support: &[usize]) -> Self {
        let mut exps = vec![0; size];
        for &i in support {
            exps[i] += 1;
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Indices with non-zero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ground: GroundSet,
    terms: BTreeMap<Monomial, BigUint>,
}

impl Polynomial {
    pub fn zero(ground: GroundSet) -> Self {
        Polynomial { ground, terms: BTreeMap::new() }
    }

    pub fn one(ground: GroundSet) -> Self {
        Self::constant(ground, BigUint::one())
    }

    pub fn constant(ground: GroundSet, c: BigUint) -> Self {
        let mut p = Self::zero(ground);
        p.add_term(Monomial::one(ground.size), c);
        p
    }

    /// The single indeterminate at `index`.
    pub fn var(ground: GroundSet, index: usize) -> Self {
        let mut p = Self::zero(ground);
        p.add_term(Monomial::from_support(ground.size, &[index]), BigUint::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I, C>(ground: GroundSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigUint>,
    {
        let mut p = Self::zero(ground);
        for (exps, c) in terms {
            assert_eq!(exps.len(), ground.size, "exponent vector length");
            p.add_term(Monomial(exps), c.into());
        }
        p
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    /// Coefficient of `m` (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> BigUint {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn coeff_of(&self, exps: &[u32]) -> BigUint {
        self.coeff(&Monomial(exps.to_vec()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_default() += c;
    }

    fn check_ground(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ground != other.ground {
            return Err(PolyError::GroundMismatch { left: self.ground, right: other.ground });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ground(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ground(other)?;
        let mut acc: HashMap<Monomial, BigUint> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Ok(Polynomial { ground: self.ground, terms: acc.into_iter().collect() })
    }

    /// `self^m` by square-and-multiply; `pow(0)` is 1.
    pub fn pow(&self, mut m: u32) -> Polynomial {
        let mut result = Polynomial::one(self.ground);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base).expect("same ground");
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base).expect("same ground");
            }
        }
        result
    }

    /// Pushes every monomial forward along `proj` (ground index → target
    /// index), summing exponents over each fiber.
    pub fn project_along(&self, proj: &[usize], target: GroundSet) -> Result<Polynomial, PolyError> {
        if proj.len() != self.ground.size || target.kind != self.ground.kind {
            return Err(PolyError::GroundMismatch {
                left: self.ground,
                right: GroundSet { kind: target.kind, size: proj.len() },
            });
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.size];
            for (i, &e) in m.0.iter().enumerate() {
                exps[proj[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// The projection homomorphism `x_w ↦ x_{π(w)}` from a cover's ground set
    /// to the base's.
    pub fn project(&self, cover: &CoverGraph) -> Result<Polynomial, PolyError> {
        let (proj, target) = match self.ground.kind {
            GroundKind::Vertices => (cover.vertex_proj(), GroundSet::vertices(cover.base().vertex_count())),
            GroundKind::Edges => (cover.edge_proj(), GroundSet::edges(cover.base().edge_count())),
        };
        self.project_along(proj, target)
    }

    /// Exact value at a rational point.
    pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        self.check_point(point.len())?;
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone().into());
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Floating-point value at a real point.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let coef = c.to_f64().unwrap_or(f64::INFINITY);
                m.0.iter().zip(point).filter(|(&e, _)| e > 0).fold(coef, |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum())
    }

    fn check_point(&self, len: usize) -> Result<(), PolyError> {
        if len != self.ground.size {
            return Err(PolyError::PointLength { expected: self.ground.size, found: len });
        }
        Ok(())
    }

    /// Sums coefficients over monomials with equal support.
    pub fn aggregate_by_support(&self) -> BTreeMap<Vec<usize>, BigUint> {
        let mut out: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        for (m, c) in &self.terms {
            *out.entry(m.support()).or_default() += c;
        }
        out
    }

    pub fn to_doc(&self) -> PolynomialDoc {
        PolynomialDoc {
            ground: self.ground.kind,
            size: self.ground.size,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermDoc { exp: m.0.clone(), coef: c.to_str_radix(10) })
                .collect(),
        }
    }

    pub fn from_doc(doc: &PolynomialDoc) -> Result<Self, PolyError> {
        let ground = GroundSet { kind: doc.ground, size: doc.size };
        let mut p = Polynomial::zero(ground);
        for t in &doc.terms {
            if t.exp.len() != doc.size {
                return Err(PolyError::Document(format!("exponent vector of length {} for size {}", t.exp.len(), doc.size)));
            }
            let c = BigUint::parse_bytes(t.coef.as_bytes(), 10)
                .ok_or_else(|| PolyError::Document(format!("bad coefficient {:?}", t.coef)))?;
            p.add_term(Monomial(t.exp.clone()), c);
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { self.ground.label(j) } else { format!("{}^{e}", self.ground.label(j)) })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => f.write_str(&vars.join(""))?,
                (false, false) => write!(f, "{c}{}", vars.join(""))?,
            }
        }
        Ok(())
    }
}

/// `{"ground": ..., "size": n, "terms": [{"exp": [...], "coef": "..."}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDoc {
    pub ground: GroundKind,
    pub size: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exp: Vec<u32>,
    pub coef: String,
}

/// A monomial whose coefficient in the dominated polynomial exceeds the
/// coefficient in the dominating one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub monomial: Monomial,
    pub small: BigUint,
    pub big: BigUint,
}

/// Every monomial where `small` has a larger coefficient than `big`
/// (missing terms count as zero). Empty means `small ⪯ big`.
pub fn dominates(big: &Polynomial, small: &Polynomial) -> Result<Vec<Violation>, PolyError> {
    big.check_ground(small)?;
    Ok(small
        .terms
        .iter()
        .filter_map(|(m, c)| {
            let b = big.coeff(m);
            (*c > b).then(|| Violation { monomial: m.clone(), small: c.clone(), big: b })
        })
        .collect())
}

/// Dominance after summing coefficients over monomials of equal support.
pub fn dominates_by_support(big: &Polynomial, small: &Polynomial) -> Result<Vec<SupportViolation>, PolyError> {
    big.check_ground(small)?;
    let big_sets = big.aggregate_by_support();
    Ok(small
        .aggregate_by_support()
        .into_iter()
        .filter_map(|(support, c)| {
            let b = big_sets.get(&support).cloned().unwrap_or_default();
            (c > b).then_some(SupportViolation { support, small: c, big: b })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportViolation {
    pub support: Vec<usize>,
    pub small: BigUint,
    pub big: BigUint,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{build_cover, trivial_cover, Permutation, VoltageAssignment};
    use crate::graph::named;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn c4_indep() -> Polynomial {
        Polynomial::from_terms(
            GroundSet::vertices(4),
            [
                (vec![0, 0, 0, 0], 1u32),
                (vec![1, 0, 0, 0], 1),
                (vec![0, 1, 0, 0], 1),
                (vec![0, 0, 1, 0], 1),
                (vec![0, 0, 0, 1], 1),
                (vec![1, 0, 1, 0], 1),
                (vec![0, 1, 0, 1], 1),
            ],
        )
    }

    #[test]
    fn product_of_linear_factors() {
        let g = GroundSet::vertices(2);
        let one = Polynomial::one(g);
        let a = one.add(&Polynomial::var(g, 0)).unwrap();
        let b = one.add(&Polynomial::var(g, 1)).unwrap();
        let expected = Polynomial::from_terms(g, [(vec![0, 0], 1u32), (vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)]);
        assert_eq!(a.mul(&b).unwrap(), expected);
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    /// Brute-force convolution over explicit term lists.
    fn convolve(p: &Polynomial, q: &Polynomial) -> BTreeMap<Vec<u32>, u64> {
        let mut out = BTreeMap::new();
        for (ma, ca) in p.terms() {
            for (mb, cb) in q.terms() {
                let key: Vec<u32> = ma.exponents().iter().zip(mb.exponents()).map(|(a, b)| a + b).collect();
                *out.entry(key).or_insert(0) += ca.to_u64().unwrap() * cb.to_u64().unwrap();
            }
        }
        out
    }

    #[test]
    fn square_matches_convolution_oracle() {
        let p = c4_indep();
        let sq = p.mul(&p).unwrap();
        let oracle = convolve(&p, &p);
        assert_eq!(sq.len(), oracle.len());
        for (exps, c) in oracle {
            assert_eq!(sq.coeff_of(&exps), big(c));
        }
        // x0 x2 arises from 1·x0x2, x0x2·1, x0·x2, x2·x0
        assert_eq!(sq.coeff_of(&[1, 0, 1, 0]), big(4));
    }

    #[test]
    fn powers() {
        let p = c4_indep();
        assert_eq!(p.pow(1), p);
        assert_eq!(p.pow(0), Polynomial::one(p.ground()));
        let g = GroundSet::vertices(1);
        let lin = Polynomial::one(g).add(&Polynomial::var(g, 0)).unwrap();
        assert_eq!(lin.pow(2), Polynomial::from_terms(g, [(vec![0], 1u32), (vec![1], 2), (vec![2], 1)]));

        let cube = p.pow(3);
        assert_eq!(cube.coeff_of(&[0, 0, 0, 0]), big(1));
        for i in 0..4 {
            let mut e = vec![0; 4];
            e[i] = 1;
            assert_eq!(cube.coeff_of(&e), big(3));
        }
        assert_eq!(cube, p.mul(&p).unwrap().mul(&p).unwrap());
    }

    #[test]
    fn ground_mismatch_is_an_error() {
        let a = Polynomial::one(GroundSet::vertices(2));
        let b = Polynomial::one(GroundSet::edges(2));
        assert!(matches!(a.mul(&b), Err(PolyError::GroundMismatch { .. })));
        assert!(matches!(dominates(&a, &b), Err(PolyError::GroundMismatch { .. })));
        assert!(matches!(
            a.evaluate_f64(&[1.0]),
            Err(PolyError::PointLength { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn projection_of_identity_one_cover_is_unchanged() {
        let g = named::cycle(4);
        let cover = trivial_cover(&g, 1).unwrap();
        let p = c4_indep();
        assert_eq!(p.project(&cover).unwrap(), p);
    }

    #[test]
    fn projection_of_trivial_double_cover_of_k2() {
        let k2 = named::path(2);
        let cover = trivial_cover(&k2, 2).unwrap();
        // two disjoint edges 0-1, 2-3: independent sets of the cover by hand
        let cover_poly = Polynomial::from_terms(
            GroundSet::vertices(4),
            [
                (vec![0, 0, 0, 0], 1u32),
                (vec![1, 0, 0, 0], 1),
                (vec![0, 1, 0, 0], 1),
                (vec![0, 0, 1, 0], 1),
                (vec![0, 0, 0, 1], 1),
                (vec![1, 0, 1, 0], 1),
                (vec![1, 0, 0, 1], 1),
                (vec![0, 1, 1, 0], 1),
                (vec![0, 1, 0, 1], 1),
            ],
        );
        let g = GroundSet::vertices(2);
        let base = Polynomial::from_terms(g, [(vec![0, 0], 1u32), (vec![1, 0], 1), (vec![0, 1], 1)]);
        assert_eq!(cover_poly.project(&cover).unwrap(), base.pow(2));
    }

    #[test]
    fn projection_follows_cover_layout() {
        let c3 = named::cycle(3);
        let mut perms = vec![Permutation::identity(2); 3];
        perms[0] = Permutation::from_images(vec![1, 0]).unwrap();
        let cover = build_cover(&c3, &VoltageAssignment::new(2, perms).unwrap()).unwrap();
        let x = |i| Polynomial::var(GroundSet::vertices(6), i);
        let proj = x(0).mul(&x(4)).unwrap().mul(&x(5)).unwrap().project(&cover).unwrap();
        assert_eq!(proj, Polynomial::from_terms(GroundSet::vertices(3), [(vec![1, 1, 1], 1u32)]));
    }

    #[test]
    fn dominance_examples() {
        let p = c4_indep();
        assert!(dominates(&p, &p).unwrap().is_empty());
        let bigger = p.add(&Polynomial::one(p.ground())).unwrap();
        assert!(dominates(&bigger, &p).unwrap().is_empty());
        let v = dominates(&p, &bigger).unwrap();
        assert_eq!(v, vec![Violation { monomial: Monomial::one(4), small: big(2), big: big(1) }]);
    }

    #[test]
    fn support_aggregation() {
        let g = GroundSet::vertices(2);
        let p = Polynomial::from_terms(g, [(vec![2, 1], 1u32), (vec![1, 1], 3), (vec![1, 0], 2)]);
        let agg = p.aggregate_by_support();
        assert_eq!(agg[&vec![0, 1]], big(4));
        assert_eq!(agg[&vec![0]], big(2));
        let q = Polynomial::from_terms(g, [(vec![1, 2], 3u32)]);
        assert!(dominates_by_support(&p, &q).unwrap().is_empty());
        assert!(!dominates(&p, &q).unwrap().is_empty());
    }

    #[test]
    fn evaluation() {
        let p = c4_indep();
        assert_eq!(p.evaluate_f64(&[1.0; 4]).unwrap(), 7.0);
        let half = BigRational::new(1.into(), 2.into());
        // 1 + 4·(1/2) + 2·(1/4) = 7/2
        assert_eq!(p.evaluate_rational(&vec![half; 4]).unwrap(), BigRational::new(7.into(), 2.into()));
        let one = Polynomial::one(GroundSet::vertices(3));
        assert_eq!(one.evaluate_f64(&[9.0, -2.0, 0.5]).unwrap(), 1.0);
    }

    #[test]
    fn display_and_doc_round_trip() {
        let p = c4_indep();
        assert_eq!(p.to_string(), "1 + x3 + x2 + x1 + x1x3 + x0 + x0x2");
        let sq = p.pow(2);
        assert!(sq.to_string().contains("2x3"));
        let json = serde_json::to_string(&sq.to_doc()).unwrap();
        let back: PolynomialDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(Polynomial::from_doc(&back).unwrap(), sq);
        assert_eq!(Polynomial::zero(GroundSet::edges(3)).to_string(), "0");
    }
}
