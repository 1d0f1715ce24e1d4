//! The k-graph Lambda_(E,C): validated (E,C) pairs, degree-indexed path
//! enumeration, the row-finite/no-sources predicate, and a category-law
//! regression harness.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cube::CubeMorphism;
use crate::degree::{box_points, Colour, Degree};
use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, VertexIx};
use crate::squares::{Limits, Square, SquareCollection};

/// A coloured graph with a validated complete associative square collection.
/// Construction fails unless both checks pass, so downstream operations can
/// assume the k-graph axioms.
#[derive(Clone, Debug)]
pub struct KGraph<'g> {
    graph: &'g ColouredGraph,
    collection: SquareCollection<'g>,
}

impl<'g> KGraph<'g> {
    pub fn new(graph: &'g ColouredGraph, squares: Vec<Square>) -> Result<Self> {
        let collection = SquareCollection::new(graph, squares)?;
        Self::from_collection(collection)
    }

    pub fn from_collection(collection: SquareCollection<'g>) -> Result<Self> {
        let completeness = collection.check_complete();
        if !completeness.complete {
            return Err(Error::IncompleteCollection {
                violations: completeness.violations.len(),
            });
        }
        let assoc = collection.check_associative(false)?;
        if let Some(v) = assoc.violations.first() {
            return Err(Error::NonAssociative {
                f: v.f.clone(),
                g: v.g.clone(),
                h: v.h.clone(),
            });
        }
        Ok(KGraph {
            graph: collection.graph(),
            collection,
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.collection = self.collection.with_limits(limits);
        self
    }

    pub fn graph(&self) -> &'g ColouredGraph {
        self.graph
    }

    pub fn collection(&self) -> &SquareCollection<'g> {
        &self.collection
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// v Lambda^m (or all of Lambda^m when `v` is None): every C-compatible
    /// morphism of degree m with the given range, sorted canonically.
    ///
    /// Enumeration extends cubes edge-by-edge along the sorted colour word,
    /// deduplicating after every step.
    pub fn paths_of_degree(
        &self,
        v: Option<VertexIx>,
        m: &Degree,
    ) -> Result<Vec<CubeMorphism<'g>>> {
        if m.k() != self.k() {
            return Err(Error::DegreeLength {
                got: m.k(),
                expected: self.k(),
            });
        }
        let mut frontier: BTreeSet<CubeMorphism<'g>> = match v {
            Some(v) => std::iter::once(CubeMorphism::identity_at(self.graph, v)).collect(),
            None => self
                .graph
                .vertices()
                .map(|v| CubeMorphism::identity_at(self.graph, v))
                .collect(),
        };
        for c in 0..self.k() {
            let colour = Colour::new(c);
            for _ in 0..m.get(c) {
                let mut next = BTreeSet::new();
                for cube in &frontier {
                    for &f in self.graph.in_edges(cube.source(), colour) {
                        next.insert(self.collection.extend(cube, f)?);
                        if next.len() > self.collection.limits().max_enumeration {
                            return Err(Error::EnumerationLimit {
                                budget: self.collection.limits().max_enumeration,
                            });
                        }
                    }
                }
                frontier = next;
            }
        }
        Ok(frontier.into_iter().collect())
    }

    /// All morphisms grouped by degree, for every degree with |m| <= total.
    pub fn morphisms_by_degree(
        &self,
        total: u32,
    ) -> Result<BTreeMap<Degree, Vec<CubeMorphism<'g>>>> {
        let top = Degree::from_coords(vec![total; self.k()]);
        let mut out = BTreeMap::new();
        for m in box_points(&Degree::zero(self.k()), &top) {
            if m.total() <= total {
                out.insert(m.clone(), self.paths_of_degree(None, &m)?);
            }
        }
        Ok(out)
    }

    pub fn is_row_finite_no_sources(&self) -> SourcesReport {
        let mut violations = Vec::new();
        for v in self.graph.vertices() {
            for c in 0..self.k() {
                if self.graph.in_edges(v, Colour::new(c)).is_empty() {
                    violations.push(SourceViolation {
                        vertex: self.graph.vertex_id(v).to_string(),
                        colour: c + 1,
                    });
                }
            }
        }
        SourcesReport {
            row_finite_no_sources: violations.is_empty(),
            violations,
        }
    }

    pub fn require_row_finite_no_sources(&self) -> Result<()> {
        let report = self.is_row_finite_no_sources();
        if report.row_finite_no_sources {
            Ok(())
        } else {
            let v = &report.violations[0];
            Err(Error::Precondition(format!(
                "not row-finite with no sources: vertex {:?} has no incoming colour-{} edge",
                v.vertex, v.colour
            )))
        }
    }

    /// Regression harness for the k-graph axioms: identities, associativity,
    /// degree additivity, and unique factorisation, exhaustive over all
    /// morphisms with |m| <= degree_total_bound, capped by `budget` checks.
    /// Any violation indicates an implementation bug, never expected.
    pub fn check_category_laws(&self, degree_total_bound: u32, budget: usize) -> Result<LawReport> {
        let by_degree = self.morphisms_by_degree(degree_total_bound)?;
        let mut report = LawReport::default();
        let mut spent = 0usize;
        let mut charge = |report_field: &mut usize| {
            *report_field += 1;
            spent += 1;
            spent <= budget
        };

        // identity laws
        'ids: for cubes in by_degree.values() {
            for cube in cubes {
                let idl = CubeMorphism::identity_at(self.graph, cube.range());
                let idr = CubeMorphism::identity_at(self.graph, cube.source());
                if self.collection.compose(&idl, cube)? != *cube
                    || self.collection.compose(cube, &idr)? != *cube
                {
                    report.violation = Some(format!(
                        "identity law fails at a degree-{} morphism",
                        cube.degree()
                    ));
                    return Ok(report);
                }
                if !charge(&mut report.identities) {
                    break 'ids;
                }
            }
        }

        // degree additivity and restriction on composable pairs
        'pairs: for (m1, cubes1) in &by_degree {
            for (m2, cubes2) in &by_degree {
                if m1.total() + m2.total() > degree_total_bound {
                    continue;
                }
                for mu in cubes1 {
                    for nu in cubes2 {
                        if mu.source() != nu.range() {
                            continue;
                        }
                        let prod = self.collection.compose(mu, nu)?;
                        if prod.degree() != &m1.plus(m2) {
                            report.violation =
                                Some(format!("degree not additive at {m1} + {m2}"));
                            return Ok(report);
                        }
                        let (head, tail) = prod.factorise(m1)?;
                        if &head != mu || &tail != nu {
                            report.violation = Some(format!(
                                "composition does not restrict to its factors at {m1} + {m2}"
                            ));
                            return Ok(report);
                        }
                        if !charge(&mut report.pairs) {
                            break 'pairs;
                        }
                    }
                }
            }
        }

        // associativity on composable triples
        'triples: for (m1, cubes1) in &by_degree {
            for (m2, cubes2) in &by_degree {
                for (m3, cubes3) in &by_degree {
                    if m1.total() + m2.total() + m3.total() > degree_total_bound {
                        continue;
                    }
                    for a in cubes1 {
                        for b in cubes2.iter().filter(|b| b.range() == a.source()) {
                            for c in cubes3.iter().filter(|c| c.range() == b.source()) {
                                let left =
                                    self.collection.compose(&self.collection.compose(a, b)?, c)?;
                                let right =
                                    self.collection.compose(a, &self.collection.compose(b, c)?)?;
                                if left != right {
                                    report.violation = Some(format!(
                                        "associativity fails at degrees {m1}, {m2}, {m3}"
                                    ));
                                    return Ok(report);
                                }
                                if !charge(&mut report.triples) {
                                    break 'triples;
                                }
                            }
                        }
                    }
                }
            }
        }

        // unique factorisation: the splitting of lambda at m is the only pair
        // with the right degrees composing to lambda
        let mut by_vertex: BTreeMap<(VertexIx, &Degree), Vec<&CubeMorphism<'g>>> = BTreeMap::new();
        for (m, cubes) in &by_degree {
            for cube in cubes {
                by_vertex.entry((cube.range(), m)).or_default().push(cube);
            }
        }
        let empty = Vec::new();
        'facts: for (d, cubes) in &by_degree {
            for lambda in cubes {
                for m in box_points(&Degree::zero(self.k()), d) {
                    let (head, tail) = lambda.factorise(&m)?;
                    if self.collection.compose(&head, &tail)? != *lambda {
                        report.violation =
                            Some(format!("factorise at {m} does not recompose to its input"));
                        return Ok(report);
                    }
                    let n = d.minus(&m).expect("m <= d by box_points");
                    let mut matches = 0usize;
                    for mu in by_vertex.get(&(lambda.range(), &m)).unwrap_or(&empty) {
                        for nu in by_vertex.get(&(mu.source(), &n)).unwrap_or(&empty) {
                            if nu.source() == lambda.source()
                                && self.collection.compose(mu, nu)? == *lambda
                            {
                                matches += 1;
                            }
                        }
                    }
                    if matches != 1 {
                        report.violation = Some(format!(
                            "factorisation at {m} of a degree-{d} morphism has {matches} splittings"
                        ));
                        return Ok(report);
                    }
                    if !charge(&mut report.factorisations) {
                        break 'facts;
                    }
                }
            }
        }

        Ok(report)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceViolation {
    pub vertex: String,
    /// one-based colour index
    pub colour: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourcesReport {
    pub row_finite_no_sources: bool,
    pub violations: Vec<SourceViolation>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LawReport {
    pub identities: usize,
    pub pairs: usize,
    pub triples: usize,
    pub factorisations: usize,
    pub violation: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}
