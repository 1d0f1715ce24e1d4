//! Bounded deciders for aperiodicity, cofinality, and the simplicity verdict,
//! plus the separating-path constructor and the non-cofinal ray builder.
//!
//! All three properties quantify over unbounded data, so the deciders are
//! three-valued: `holds` and `fails` are qualified by the recorded bounds, and
//! every `fails` carries an independently checkable certificate. `fails` for
//! aperiodicity means some pair was never separated within the path bound;
//! cofinality failure is certified only by the component argument.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::KGraph;
use crate::cube::CubeMorphism;
use crate::degree::{box_points, Colour, Degree};
use crate::error::{Error, Result};
use crate::graph::{ColouredPath, VertexIx};
use crate::quotient::PathPrefixFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

/// A vertex and pair of degrees that no path within the bound separates:
/// for every lambda in v Lambda with m v n <= d(lambda) <= bound,
/// lambda(m, m + d - m v n) = lambda(n, n + d - m v n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityWitness {
    pub vertex: String,
    pub m: Degree,
    pub n: Degree,
    pub bound: Degree,
}

impl PeriodicityWitness {
    /// Re-verifies the witness by exhaustive re-enumeration.
    pub fn verify(&self, kg: &KGraph<'_>) -> Result<bool> {
        let v = kg.graph().vertex(&self.vertex)?;
        let join = self.m.join(&self.n);
        for d in box_points(&join, &self.bound) {
            let tail = d.minus(&join).expect("d >= join by box_points");
            for lambda in kg.paths_of_degree(Some(v), &d)? {
                if segments_differ(&lambda, &self.m, &self.n, &tail)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Certificate that no path from w ever reaches into R(v): the downstream
/// closures of v and w are disjoint, so for every n, every lambda in
/// w Lambda^n has source outside R(v) while w Lambda^n is nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofinalityCertificate {
    pub v: String,
    pub w: String,
}

impl CofinalityCertificate {
    pub fn verify(&self, kg: &KGraph<'_>) -> Result<bool> {
        let g = kg.graph();
        let rv = g.downstream_closure(g.vertex(&self.v)?);
        let rw = g.downstream_closure(g.vertex(&self.w)?);
        Ok(rv.is_disjoint(&rw))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisWitness {
    Periodicity(PeriodicityWitness),
    Cofinality(CofinalityCertificate),
}

/// Three-valued bounded decision with the bounds that qualify it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalysisVerdict {
    pub status: Status,
    pub witness: Option<AnalysisWitness>,
    pub bounds: BTreeMap<String, Degree>,
    /// Searches that exhausted their bound without resolving.
    pub unresolved: Vec<String>,
}

impl AnalysisVerdict {
    fn new(status: Status, bounds: BTreeMap<String, Degree>) -> Self {
        AnalysisVerdict {
            status,
            witness: None,
            bounds,
            unresolved: Vec::new(),
        }
    }
}

fn segments_differ(
    lambda: &CubeMorphism<'_>,
    m: &Degree,
    n: &Degree,
    tail: &Degree,
) -> Result<bool> {
    let left = lambda.segment(m, &m.plus(tail))?;
    let right = lambda.segment(n, &n.plus(tail))?;
    Ok(left != right)
}

/// Per-vertex, per-pair search outcome.
enum PairSearch {
    Separated,
    AllEqual,
    Overflow,
}

/// Bounded aperiodicity: for every vertex v and pair of distinct degrees
/// m != n below `pair_bound`, searches v Lambda for a separating path of
/// degree between m v n and `path_bound`.
pub fn check_aperiodic(
    kg: &KGraph<'_>,
    pair_bound: &Degree,
    path_bound: &Degree,
) -> Result<AnalysisVerdict> {
    kg.require_row_finite_no_sources()?;
    let mut bounds = BTreeMap::new();
    bounds.insert("pair_bound".to_string(), pair_bound.clone());
    bounds.insert("path_bound".to_string(), path_bound.clone());

    let zero = Degree::zero(kg.k());
    let degrees = box_points(&zero, pair_bound);
    let mut cache: BTreeMap<(VertexIx, Degree), Vec<CubeMorphism<'_>>> = BTreeMap::new();
    let mut unresolved = Vec::new();

    for v in kg.graph().vertices() {
        for (a, m) in degrees.iter().enumerate() {
            for n in degrees.iter().skip(a + 1) {
                match search_separator(kg, v, m, n, path_bound, &mut cache)? {
                    PairSearch::Separated => {}
                    PairSearch::AllEqual => {
                        let mut verdict = AnalysisVerdict::new(Status::Fails, bounds);
                        verdict.witness =
                            Some(AnalysisWitness::Periodicity(PeriodicityWitness {
                                vertex: kg.graph().vertex_id(v).to_string(),
                                m: m.clone(),
                                n: n.clone(),
                                bound: path_bound.clone(),
                            }));
                        verdict.unresolved = unresolved;
                        return Ok(verdict);
                    }
                    PairSearch::Overflow => unresolved.push(format!(
                        "vertex {} pair ({m}, {n}): search space exceeds path bound",
                        kg.graph().vertex_id(v)
                    )),
                }
            }
        }
    }
    let status = if unresolved.is_empty() {
        Status::Holds
    } else {
        Status::Inconclusive
    };
    let mut verdict = AnalysisVerdict::new(status, bounds);
    verdict.unresolved = unresolved;
    Ok(verdict)
}

#[allow(clippy::map_entry)] // entry API does not mix with fallible enumeration
fn search_separator<'g>(
    kg: &KGraph<'g>,
    v: VertexIx,
    m: &Degree,
    n: &Degree,
    path_bound: &Degree,
    cache: &mut BTreeMap<(VertexIx, Degree), Vec<CubeMorphism<'g>>>,
) -> Result<PairSearch> {
    let join = m.join(n);
    if !join.le(path_bound) {
        return Ok(PairSearch::Overflow);
    }
    // degrees ordered by total then lex: separators are typically short
    let mut candidates = box_points(&join, path_bound);
    candidates.sort_by_key(|d| (d.total(), d.clone()));
    for d in candidates {
        let tail = d.minus(&join).expect("d >= join by construction");
        if !cache.contains_key(&(v, d.clone())) {
            let cubes = kg.paths_of_degree(Some(v), &d)?;
            cache.insert((v, d.clone()), cubes);
        }
        for lambda in &cache[&(v, d.clone())] {
            if segments_differ(lambda, m, n, &tail)? {
                return Ok(PairSearch::Separated);
            }
        }
    }
    Ok(PairSearch::AllEqual)
}

/// Bounded cofinality: computes R(v) by reverse reachability, then for each
/// pair (v, w) searches n <= n_bound with every lambda in w Lambda^n ending
/// inside R(v). Failure is only concluded from the component certificate.
pub fn check_cofinal(kg: &KGraph<'_>, n_bound: &Degree) -> Result<AnalysisVerdict> {
    kg.require_row_finite_no_sources()?;
    let mut bounds = BTreeMap::new();
    bounds.insert("n_bound".to_string(), n_bound.clone());

    let g = kg.graph();
    let closures: Vec<_> = g.vertices().map(|v| g.downstream_closure(v)).collect();
    let zero = Degree::zero(kg.k());
    let mut ens = box_points(&zero, n_bound);
    ens.sort_by_key(|d| (d.total(), d.clone()));

    let mut unresolved = Vec::new();
    for v in g.vertices() {
        for w in g.vertices() {
            let rv = &closures[v.index()];
            if closures[w.index()].is_disjoint(rv) {
                let mut verdict = AnalysisVerdict::new(Status::Fails, bounds);
                verdict.witness = Some(AnalysisWitness::Cofinality(CofinalityCertificate {
                    v: g.vertex_id(v).to_string(),
                    w: g.vertex_id(w).to_string(),
                }));
                verdict.unresolved = unresolved;
                return Ok(verdict);
            }
            let mut witnessed = false;
            for n in &ens {
                let all_inside = kg
                    .paths_of_degree(Some(w), n)?
                    .iter()
                    .all(|lambda| rv.contains(&lambda.source()));
                if all_inside {
                    witnessed = true;
                    break;
                }
            }
            if !witnessed {
                unresolved.push(format!(
                    "pair ({}, {}): no level within the bound lands in R(v)",
                    g.vertex_id(v),
                    g.vertex_id(w)
                ));
            }
        }
    }
    let status = if unresolved.is_empty() {
        Status::Holds
    } else {
        Status::Inconclusive
    };
    let mut verdict = AnalysisVerdict::new(status, bounds);
    verdict.unresolved = unresolved;
    Ok(verdict)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub aperiodicity: AnalysisVerdict,
    pub cofinality: AnalysisVerdict,
    pub simplicity: AnalysisVerdict,
}

/// Combines the two bounded checks per the simplicity criterion: simple iff
/// aperiodic and cofinal.
pub fn simplicity_verdict(
    kg: &KGraph<'_>,
    pair_bound: &Degree,
    path_bound: &Degree,
    n_bound: &Degree,
) -> Result<SimplicityReport> {
    let aperiodicity = check_aperiodic(kg, pair_bound, path_bound)?;
    let cofinality = check_cofinal(kg, n_bound)?;
    let mut bounds = aperiodicity.bounds.clone();
    bounds.extend(cofinality.bounds.clone());
    let status = match (aperiodicity.status, cofinality.status) {
        (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
        (Status::Holds, Status::Holds) => Status::Holds,
        _ => Status::Inconclusive,
    };
    let mut simplicity = AnalysisVerdict::new(status, bounds);
    simplicity.witness = if aperiodicity.status == Status::Fails {
        aperiodicity.witness.clone()
    } else if cofinality.status == Status::Fails {
        cofinality.witness.clone()
    } else {
        None
    };
    simplicity.unresolved = aperiodicity
        .unresolved
        .iter()
        .chain(&cofinality.unresolved)
        .cloned()
        .collect();
    Ok(SimplicityReport {
        aperiodicity,
        cofinality,
        simplicity,
    })
}

/// A cheap path of the exact given degree with the given range, walked along
/// the sorted colour word taking the first incoming edge each step. Requires
/// no sources.
fn greedy_path<'g>(kg: &KGraph<'g>, v: VertexIx, degree: &Degree) -> Result<ColouredPath<'g>> {
    let g = kg.graph();
    let mut letters = Vec::new();
    for c in 0..kg.k() {
        for _ in 0..degree.get(c) {
            letters.push(Colour::new(c));
        }
    }
    if letters.is_empty() {
        return Ok(ColouredPath::empty(g, v));
    }
    let mut edges = Vec::new();
    let mut at = v;
    for colour in letters {
        let e = *g.in_edges(at, colour).first().ok_or_else(|| {
            Error::Precondition(format!(
                "vertex {:?} has no incoming colour-{} edge",
                g.vertex_id(at),
                colour
            ))
        })?;
        edges.push(e);
        at = g.source(e);
    }
    ColouredPath::new(g, edges)
}

/// Constructs a path lambda with range v and degree >= l such that appending
/// lambda separates every pair of distinct paths into v of degree <= l:
/// (alpha lambda)(0, d(lambda)) are pairwise distinct. The construction
/// chains one separating segment per pair of degrees below l and finishes
/// with an arbitrary tail of degree l; the separation property is then
/// verified by brute force before returning.
pub fn separating_path<'g>(
    kg: &KGraph<'g>,
    v: VertexIx,
    l: &Degree,
    search_bound: &Degree,
) -> Result<CubeMorphism<'g>> {
    kg.require_row_finite_no_sources()?;
    let zero = Degree::zero(kg.k());
    let degrees = box_points(&zero, l);
    let mut pairs = Vec::new();
    for (a, m) in degrees.iter().enumerate() {
        for n in degrees.iter().skip(a + 1) {
            pairs.push((m.clone(), n.clone()));
        }
    }

    let mut cache: BTreeMap<(VertexIx, Degree), Vec<CubeMorphism<'g>>> = BTreeMap::new();
    let mut pieces: Vec<CubeMorphism<'g>> = Vec::new();
    let mut at = v;
    for (m, n) in &pairs {
        let mu = find_separating_segment(kg, at, m, n, search_bound, &mut cache)?;
        at = mu.source();
        pieces.push(mu);
    }
    // arbitrary tail with degree exactly l
    let tail_path = greedy_path(kg, at, l)?;
    let tail = kg.collection().normalize(&tail_path)?;
    let mut lambda = tail;
    for mu in pieces.iter().rev() {
        lambda = kg.collection().compose(mu, &lambda)?;
    }
    debug_assert_eq!(lambda.range(), v);

    // brute-force verification over all alpha != beta into v with d <= l
    let mut into_v: Vec<CubeMorphism<'g>> = Vec::new();
    for d in box_points(&zero, l) {
        for alpha in kg.paths_of_degree(None, &d)? {
            if alpha.source() == v {
                into_v.push(alpha);
            }
        }
    }
    let mut initial_segments = std::collections::BTreeSet::new();
    for alpha in &into_v {
        let extended = kg.collection().compose(alpha, &lambda)?;
        let segment = extended.restrict(&zero, lambda.degree())?;
        if !initial_segments.insert(segment) {
            return Err(Error::CheckFailed {
                check: "separating path".into(),
                detail: format!(
                    "two paths into {:?} share the initial segment after appending lambda",
                    kg.graph().vertex_id(v)
                ),
            });
        }
    }
    Ok(lambda)
}

#[allow(clippy::map_entry)] // entry API does not mix with fallible enumeration
fn find_separating_segment<'g>(
    kg: &KGraph<'g>,
    v: VertexIx,
    m: &Degree,
    n: &Degree,
    search_bound: &Degree,
    cache: &mut BTreeMap<(VertexIx, Degree), Vec<CubeMorphism<'g>>>,
) -> Result<CubeMorphism<'g>> {
    let join = m.join(n);
    let exhausted = || Error::SearchExhausted {
        vertex: kg.graph().vertex_id(v).to_string(),
        m: m.to_string(),
        n: n.to_string(),
        bound: search_bound.to_string(),
    };
    if !join.le(search_bound) {
        return Err(exhausted());
    }
    let mut candidates = box_points(&join, search_bound);
    candidates.sort_by_key(|d| (d.total(), d.clone()));
    for d in candidates {
        let tail = d.minus(&join).expect("d >= join");
        if !cache.contains_key(&(v, d.clone())) {
            let cubes = kg.paths_of_degree(Some(v), &d)?;
            cache.insert((v, d.clone()), cubes);
        }
        for lambda in &cache[&(v, d.clone())] {
            if segments_differ(lambda, m, n, &tail)? {
                return Ok(lambda.clone());
            }
        }
    }
    Err(exhausted())
}

/// Builds the finite-depth non-cofinal ray: given a certified cofinality
/// failure for (v, w), walks `depth` blocks of degree (1,...,1) from w. Every
/// visited corner stays outside R(v), which is re-checked.
pub fn noncofinal_ray<'g>(
    kg: &KGraph<'g>,
    v: VertexIx,
    w: VertexIx,
    depth: usize,
) -> Result<PathPrefixFamily<'g>> {
    kg.require_row_finite_no_sources()?;
    let g = kg.graph();
    let rv = g.downstream_closure(v);
    let rw = g.downstream_closure(w);
    if !rv.is_disjoint(&rw) {
        return Err(Error::NoCofinalityCertificate {
            v: g.vertex_id(v).to_string(),
            w: g.vertex_id(w).to_string(),
        });
    }
    let ones = Degree::from_coords(vec![1; kg.k()]);
    let mut path = ColouredPath::empty(g, w);
    let mut corners = vec![w];
    for _ in 0..depth {
        let block = greedy_path(kg, path.source(), &ones)?;
        path = path.concat(&block)?;
        corners.push(path.source());
    }
    for corner in corners {
        if rv.contains(&corner) {
            return Err(Error::CheckFailed {
                check: "noncofinal ray".into(),
                detail: format!(
                    "visited vertex {:?} is reachable into {:?}",
                    g.vertex_id(corner),
                    g.vertex_id(v)
                ),
            });
        }
    }
    PathPrefixFamily::new(path)
}
