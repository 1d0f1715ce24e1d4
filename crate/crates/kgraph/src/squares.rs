//! Commuting squares: the collection C, completeness, flips, and the
//! associativity (cube) condition.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::degree::Colour;
use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, ColouredPath, EdgeIx, VertexIx};

/// A commuting square, i.e. a coloured-graph morphism E_{k,e_i+e_j} -> E with
/// i < j, stored by its four edges:
///
/// - `a`  at 0+v_i   (colour i),
/// - `b`  at e_i+v_j (colour j),
/// - `b2` at 0+v_j   (colour j),
/// - `a2` at e_j+v_i (colour i),
///
/// so that a.b ~ b2.a2. The single square owns both face orientations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Square {
    pub i: Colour,
    pub j: Colour,
    pub a: EdgeIx,
    pub b: EdgeIx,
    pub b2: EdgeIx,
    pub a2: EdgeIx,
}

impl Square {
    /// Validates the seven morphism conditions against the graph.
    pub fn new(
        graph: &ColouredGraph,
        i: Colour,
        j: Colour,
        a: EdgeIx,
        b: EdgeIx,
        b2: EdgeIx,
        a2: EdgeIx,
    ) -> Result<Self> {
        let fail = |reason: String| Error::MalformedSquare {
            i: i.one_based(),
            j: j.one_based(),
            reason,
        };
        if i >= j {
            return Err(fail(format!("colours must satisfy i < j, got {i}, {j}")));
        }
        if j.index() >= graph.k() {
            return Err(fail(format!("colour {j} out of range for k = {}", graph.k())));
        }
        for (e, name) in [(a, "a"), (b, "b"), (b2, "b2"), (a2, "a2")] {
            if e.index() >= graph.edge_count() {
                return Err(fail(format!("edge slot {name} references a missing edge")));
            }
        }
        for (e, want, name) in [(a, i, "a"), (a2, i, "a2"), (b, j, "b"), (b2, j, "b2")] {
            if graph.colour(e) != want {
                return Err(fail(format!(
                    "edge {name} = {:?} has colour {}, expected {want}",
                    graph.edge_id(e),
                    graph.colour(e)
                )));
            }
        }
        let checks = [
            (graph.range(a), graph.range(b2), "r(a) = r(b2)"),
            (graph.source(a), graph.range(b), "s(a) = r(b)"),
            (graph.source(b2), graph.range(a2), "s(b2) = r(a2)"),
            (graph.source(b), graph.source(a2), "s(b) = s(a2)"),
        ];
        for (x, y, eq) in checks {
            if x != y {
                return Err(fail(format!(
                    "corner condition {eq} fails: {:?} vs {:?}",
                    graph.vertex_id(x),
                    graph.vertex_id(y)
                )));
            }
        }
        Ok(Square { i, j, a, b, b2, a2 })
    }

    /// Corner vertices (phi(0), phi(e_i), phi(e_j), phi(e_i+e_j)).
    pub fn corners(&self, graph: &ColouredGraph) -> [VertexIx; 4] {
        [
            graph.range(self.a),
            graph.source(self.a),
            graph.source(self.b2),
            graph.source(self.b),
        ]
    }

    /// The colour-i-first face (a, b).
    pub fn face_i_first(&self) -> (EdgeIx, EdgeIx) {
        (self.a, self.b)
    }

    /// The colour-j-first face (b2, a2).
    pub fn face_j_first(&self) -> (EdgeIx, EdgeIx) {
        (self.b2, self.a2)
    }
}

/// Report from `check_complete`.
#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub complete: bool,
    pub violations: Vec<CompletenessViolation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompletenessViolation {
    pub first: String,
    pub second: String,
    pub owners: usize,
}

/// One failure of the cube condition: the two rearrangement routes of the
/// tri-coloured path f g h end in different edge triples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubeViolation {
    pub f: String,
    pub g: String,
    pub h: String,
    /// (h^2, g^2, f^2) from the route that flips fg first.
    pub route_fg_first: [String; 3],
    /// (h_2, g_2, f_2) from the route that flips gh first.
    pub route_gh_first: [String; 3],
}

#[derive(Clone, Debug)]
pub struct AssociativityReport {
    pub associative: bool,
    pub violations: Vec<CubeViolation>,
}

/// Budgets for cube construction and morphism enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of grid points in a single cube morphism.
    pub max_cells: usize,
    /// Maximum number of morphisms produced by one enumeration.
    pub max_enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 1_000_000,
            max_enumeration: 200_000,
        }
    }
}

/// A collection of squares in a coloured graph, with a face index mapping each
/// mixed-colour 2-path to its owning squares.
#[derive(Clone, Debug)]
pub struct SquareCollection<'g> {
    graph: &'g ColouredGraph,
    squares: Vec<Square>,
    index: HashMap<(EdgeIx, EdgeIx), Vec<usize>>,
    limits: Limits,
}

impl<'g> SquareCollection<'g> {
    pub fn new(graph: &'g ColouredGraph, squares: Vec<Square>) -> Result<Self> {
        // Re-validate each square against this graph; malformed squares are
        // rejected here rather than surfacing as index corruption later.
        for sq in &squares {
            Square::new(graph, sq.i, sq.j, sq.a, sq.b, sq.b2, sq.a2)?;
        }
        let mut index: HashMap<(EdgeIx, EdgeIx), Vec<usize>> = HashMap::new();
        for (n, sq) in squares.iter().enumerate() {
            index.entry(sq.face_i_first()).or_default().push(n);
            index.entry(sq.face_j_first()).or_default().push(n);
        }
        Ok(SquareCollection {
            graph,
            squares,
            index,
            limits: Limits::default(),
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn graph(&self) -> &'g ColouredGraph {
        self.graph
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// The unique square owning the mixed-colour 2-path (e1, e2); errors when
    /// the pair is unowned or multiply owned.
    pub fn owner(&self, e1: EdgeIx, e2: EdgeIx) -> Result<&Square> {
        let g = self.graph;
        if g.colour(e1) == g.colour(e2) {
            return Err(Error::NotMixedColour {
                first: g.edge_id(e1).to_string(),
                second: g.edge_id(e2).to_string(),
            });
        }
        match self.index.get(&(e1, e2)).map(Vec::as_slice) {
            None | Some([]) => Err(Error::MissingSquare {
                first: g.edge_id(e1).to_string(),
                second: g.edge_id(e2).to_string(),
            }),
            Some([n]) => Ok(&self.squares[*n]),
            Some(owners) => Err(Error::AmbiguousSquare {
                first: g.edge_id(e1).to_string(),
                second: g.edge_id(e2).to_string(),
                count: owners.len(),
            }),
        }
    }

    /// Flips a mixed 2-path to its unique companion of the opposite colour
    /// order: (a, b) <-> (b2, a2) within the owning square.
    pub fn flip_pair(&self, e1: EdgeIx, e2: EdgeIx) -> Result<(EdgeIx, EdgeIx)> {
        let sq = self.owner(e1, e2)?;
        if (e1, e2) == sq.face_i_first() {
            Ok(sq.face_j_first())
        } else {
            Ok(sq.face_i_first())
        }
    }

    /// Path-level flip; the input must be a mixed-colour path of length 2.
    pub fn flip(&self, x: &ColouredPath<'g>) -> Result<ColouredPath<'g>> {
        if x.len() != 2 {
            return Err(Error::Precondition(format!(
                "flip needs a path of length 2, got length {}",
                x.len()
            )));
        }
        let (y1, y2) = self.flip_pair(x.edge(0), x.edge(1))?;
        ColouredPath::new(self.graph, vec![y1, y2])
    }

    /// All composable mixed-colour 2-paths of the graph, in edge-index order.
    fn mixed_two_paths(&self) -> Vec<(EdgeIx, EdgeIx)> {
        let g = self.graph;
        let mut out = Vec::new();
        for e1 in g.edges() {
            let mid = g.source(e1);
            for c in 0..g.k() {
                let colour = Colour::new(c);
                if colour == g.colour(e1) {
                    continue;
                }
                for &e2 in g.in_edges(mid, colour) {
                    out.push((e1, e2));
                }
            }
        }
        out
    }

    /// Decides completeness: every composable mixed-colour 2-path, in both
    /// colour orders, must be a face of exactly one square.
    pub fn check_complete(&self) -> CompletenessReport {
        let g = self.graph;
        let mut violations = Vec::new();
        for (e1, e2) in self.mixed_two_paths() {
            let owners = self.index.get(&(e1, e2)).map_or(0, Vec::len);
            if owners != 1 {
                violations.push(CompletenessViolation {
                    first: g.edge_id(e1).to_string(),
                    second: g.edge_id(e2).to_string(),
                    owners,
                });
            }
        }
        CompletenessReport {
            complete: violations.is_empty(),
            violations,
        }
    }

    /// Runs both rearrangement routes for the tri-coloured path f g h and
    /// returns the final triples ((h^2, g^2, f^2), (h_2, g_2, f_2)).
    pub fn cube_routes(
        &self,
        f: EdgeIx,
        g: EdgeIx,
        h: EdgeIx,
    ) -> Result<([EdgeIx; 3], [EdgeIx; 3])> {
        // Route one: fg ~ g1 f1, f1 h ~ h1 f2, g1 h1 ~ h2 g2.
        let (g1, f1) = self.flip_pair(f, g)?;
        let (h1, f2) = self.flip_pair(f1, h)?;
        let (h2, g2) = self.flip_pair(g1, h1)?;
        // Route two: gh ~ h1' g1', f h1' ~ h2' f1', f1' g1' ~ g2' f2'.
        let (h1d, g1d) = self.flip_pair(g, h)?;
        let (h2d, f1d) = self.flip_pair(f, h1d)?;
        let (g2d, f2d) = self.flip_pair(f1d, g1d)?;
        Ok(([h2, g2, f2], [h2d, g2d, f2d]))
    }

    /// Checks the cube condition over every composable path f g h with three
    /// distinct colours. Stops at the first violation unless `exhaustive`.
    /// Requires a complete collection; a missing square surfaces as an error.
    pub fn check_associative(&self, exhaustive: bool) -> Result<AssociativityReport> {
        let g = self.graph;
        let mut violations = Vec::new();
        'outer: for f in g.edges() {
            for c_g in 0..g.k() {
                if Colour::new(c_g) == g.colour(f) {
                    continue;
                }
                for &ge in g.in_edges(g.source(f), Colour::new(c_g)) {
                    for c_h in 0..g.k() {
                        let ch = Colour::new(c_h);
                        if ch == g.colour(f) || ch == g.colour(ge) {
                            continue;
                        }
                        for &he in g.in_edges(g.source(ge), ch) {
                            let (up, down) = self.cube_routes(f, ge, he)?;
                            if up != down {
                                violations.push(CubeViolation {
                                    f: g.edge_id(f).to_string(),
                                    g: g.edge_id(ge).to_string(),
                                    h: g.edge_id(he).to_string(),
                                    route_fg_first: up.map(|e| g.edge_id(e).to_string()),
                                    route_gh_first: down.map(|e| g.edge_id(e).to_string()),
                                });
                                if !exhaustive {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(AssociativityReport {
            associative: violations.is_empty(),
            violations,
        })
    }
}
