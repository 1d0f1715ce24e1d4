//! k-coloured directed graphs, coloured paths, and the model grid graphs.
//!
//! Edges follow the range-first convention throughout: a path x_1 x_2 ... x_n
//! requires s(x_i) = r(x_{i+1}), and its range is r(x_1).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::degree::{abelianize, box_points, Colour, ColourWord, Degree};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexIx(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeIx(pub u32);

impl VertexIx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeIx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite k-coloured directed graph with opaque string ids.
#[derive(Clone, Debug)]
pub struct ColouredGraph {
    k: usize,
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    ranges: Vec<VertexIx>,
    sources: Vec<VertexIx>,
    colours: Vec<Colour>,
    vertex_lookup: BTreeMap<String, VertexIx>,
    edge_lookup: BTreeMap<String, EdgeIx>,
    // in_edges[v][c] = edges e with r(e) = v and c(e) = c, i.e. v Lambda^{e_c}
    in_edges: Vec<Vec<Vec<EdgeIx>>>,
    out_edges: Vec<Vec<Vec<EdgeIx>>>,
}

impl PartialEq for ColouredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.vertex_ids == other.vertex_ids
            && self.edge_ids == other.edge_ids
            && self.ranges == other.ranges
            && self.sources == other.sources
            && self.colours == other.colours
    }
}

impl Eq for ColouredGraph {}

impl ColouredGraph {
    pub fn builder(k: usize) -> GraphBuilder {
        GraphBuilder {
            k,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexIx> + '_ {
        (0..self.vertex_ids.len() as u32).map(VertexIx)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeIx> + '_ {
        (0..self.edge_ids.len() as u32).map(EdgeIx)
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertex_ids[v.index()]
    }

    pub fn edge_id(&self, e: EdgeIx) -> &str {
        &self.edge_ids[e.index()]
    }

    pub fn vertex(&self, id: &str) -> Result<VertexIx> {
        self.vertex_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex { id: id.to_string() })
    }

    pub fn edge(&self, id: &str) -> Result<EdgeIx> {
        self.edge_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge { id: id.to_string() })
    }

    pub fn range(&self, e: EdgeIx) -> VertexIx {
        self.ranges[e.index()]
    }

    pub fn source(&self, e: EdgeIx) -> VertexIx {
        self.sources[e.index()]
    }

    pub fn colour(&self, e: EdgeIx) -> Colour {
        self.colours[e.index()]
    }

    /// Edges with range v and the given colour (the skeleton-level v Lambda^{e_i}).
    pub fn in_edges(&self, v: VertexIx, colour: Colour) -> &[EdgeIx] {
        &self.in_edges[v.index()][colour.index()]
    }

    /// Edges with source v and the given colour.
    pub fn out_edges(&self, v: VertexIx, colour: Colour) -> &[EdgeIx] {
        &self.out_edges[v.index()][colour.index()]
    }

    pub fn in_edges_all_colours(&self, v: VertexIx) -> impl Iterator<Item = EdgeIx> + '_ {
        self.in_edges[v.index()].iter().flatten().copied()
    }

    /// The set R(v) = {u : v Lambda u != empty}: all vertices u admitting a path
    /// with range v and source u. Computed by closure from v following edges
    /// from range to source.
    pub fn downstream_closure(&self, v: VertexIx) -> BTreeSet<VertexIx> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(u) = stack.pop() {
            for e in self.in_edges_all_colours(u) {
                let s = self.source(e);
                if seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        seen
    }
}

pub struct GraphBuilder {
    k: usize,
    vertices: Vec<String>,
    edges: Vec<(String, String, String, usize)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    /// Adds an edge with a one-based colour, as in the instance format.
    pub fn edge(
        mut self,
        id: impl Into<String>,
        range: impl Into<String>,
        source: impl Into<String>,
        colour: usize,
    ) -> Self {
        self.edges
            .push((id.into(), range.into(), source.into(), colour));
        self
    }

    pub fn build(self) -> Result<ColouredGraph> {
        let mut vertex_lookup = BTreeMap::new();
        for (i, id) in self.vertices.iter().enumerate() {
            if vertex_lookup
                .insert(id.clone(), VertexIx(i as u32))
                .is_some()
            {
                return Err(Error::DuplicateId { id: id.clone() });
            }
        }
        let mut edge_lookup = BTreeMap::new();
        let mut ranges = Vec::with_capacity(self.edges.len());
        let mut sources = Vec::with_capacity(self.edges.len());
        let mut colours = Vec::with_capacity(self.edges.len());
        let mut edge_ids = Vec::with_capacity(self.edges.len());
        for (i, (id, range, source, colour)) in self.edges.iter().enumerate() {
            if vertex_lookup.contains_key(id) {
                return Err(Error::DuplicateId { id: id.clone() });
            }
            if edge_lookup.insert(id.clone(), EdgeIx(i as u32)).is_some() {
                return Err(Error::DuplicateId { id: id.clone() });
            }
            let r = vertex_lookup
                .get(range)
                .copied()
                .ok_or_else(|| Error::UnknownVertex { id: range.clone() })?;
            let s = vertex_lookup
                .get(source)
                .copied()
                .ok_or_else(|| Error::UnknownVertex { id: source.clone() })?;
            let c = Colour::from_one_based(*colour, self.k).ok_or_else(|| {
                Error::ColourOutOfRange {
                    edge: id.clone(),
                    colour: *colour,
                    k: self.k,
                }
            })?;
            ranges.push(r);
            sources.push(s);
            colours.push(c);
            edge_ids.push(id.clone());
        }
        let mut in_edges = vec![vec![Vec::new(); self.k]; self.vertices.len()];
        let mut out_edges = vec![vec![Vec::new(); self.k]; self.vertices.len()];
        for i in 0..edge_ids.len() {
            let e = EdgeIx(i as u32);
            in_edges[ranges[i].index()][colours[i].index()].push(e);
            out_edges[sources[i].index()][colours[i].index()].push(e);
        }
        Ok(ColouredGraph {
            k: self.k,
            vertex_ids: self.vertices,
            edge_ids,
            ranges,
            sources,
            colours,
            vertex_lookup,
            edge_lookup,
            in_edges,
            out_edges,
        })
    }
}

/// A composable edge word in a coloured graph. Length-0 paths carry their
/// vertex explicitly, since vertices are the degree-0 paths.
#[derive(Clone, Debug)]
pub struct ColouredPath<'g> {
    graph: &'g ColouredGraph,
    start: VertexIx,
    edges: Vec<EdgeIx>,
}

impl PartialEq for ColouredPath<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start && self.edges == other.edges
    }
}

impl Eq for ColouredPath<'_> {}

impl PartialOrd for ColouredPath<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ColouredPath<'_> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.start, &self.edges).cmp(&(other.start, &other.edges))
    }
}

impl<'g> ColouredPath<'g> {
    pub fn empty(graph: &'g ColouredGraph, v: VertexIx) -> Self {
        ColouredPath {
            graph,
            start: v,
            edges: Vec::new(),
        }
    }

    /// Validates composability: s(x_i) = r(x_{i+1}). On failure reports the
    /// index of the first offending adjacent pair.
    pub fn new(graph: &'g ColouredGraph, edges: Vec<EdgeIx>) -> Result<Self> {
        for i in 0..edges.len().saturating_sub(1) {
            let s = graph.source(edges[i]);
            let r = graph.range(edges[i + 1]);
            if s != r {
                return Err(Error::Composition {
                    index: i,
                    source_id: graph.vertex_id(s).to_string(),
                    range_id: graph.vertex_id(r).to_string(),
                });
            }
        }
        let start = match edges.first() {
            Some(&e) => graph.range(e),
            None => {
                return Err(Error::Precondition(
                    "empty path needs a vertex: use ColouredPath::empty".into(),
                ))
            }
        };
        Ok(ColouredPath {
            graph,
            start,
            edges,
        })
    }

    pub fn from_edge_ids(graph: &'g ColouredGraph, ids: &[&str]) -> Result<Self> {
        let edges = ids
            .iter()
            .map(|id| graph.edge(id))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, edges)
    }

    pub fn graph(&self) -> &'g ColouredGraph {
        self.graph
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeIx] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> EdgeIx {
        self.edges[i]
    }

    pub fn range(&self) -> VertexIx {
        self.start
    }

    pub fn source(&self) -> VertexIx {
        match self.edges.last() {
            Some(&e) => self.graph.source(e),
            None => self.start,
        }
    }

    pub fn colour_word(&self) -> ColourWord {
        ColourWord::new(self.edges.iter().map(|&e| self.graph.colour(e)).collect())
    }

    /// q(c(x)), the coordinatewise letter count of the colour word.
    pub fn shape(&self) -> Degree {
        abelianize(&self.colour_word(), self.graph.k()).expect("edge colours are validated")
    }

    /// Shape of the length-`len` prefix.
    pub fn shape_prefix(&self, len: usize) -> Degree {
        let mut coords = vec![0u32; self.graph.k()];
        for &e in &self.edges[..len.min(self.edges.len())] {
            coords[self.graph.colour(e).index()] += 1;
        }
        Degree::from_coords(coords)
    }

    /// Appends one edge; fails unless s(self) = r(edge).
    pub fn extended(&self, edge: EdgeIx) -> Result<Self> {
        if self.graph.range(edge) != self.source() {
            return Err(Error::Composition {
                index: self.edges.len().saturating_sub(1),
                source_id: self.graph.vertex_id(self.source()).to_string(),
                range_id: self.graph.vertex_id(self.graph.range(edge)).to_string(),
            });
        }
        let mut edges = self.edges.clone();
        edges.push(edge);
        Ok(ColouredPath {
            graph: self.graph,
            start: if self.edges.is_empty() {
                self.graph.range(edge)
            } else {
                self.start
            },
            edges,
        })
    }

    pub fn concat(&self, other: &ColouredPath<'g>) -> Result<Self> {
        if other.is_empty() {
            if self.source() != other.range() {
                return Err(Error::ComposeMismatch {
                    source_id: self.graph.vertex_id(self.source()).to_string(),
                    range_id: self.graph.vertex_id(other.range()).to_string(),
                });
            }
            return Ok(self.clone());
        }
        let mut out = self.clone();
        for &e in other.edges() {
            out = out.extended(e)?;
        }
        Ok(out)
    }

    pub fn edge_ids(&self) -> Vec<&str> {
        self.edges.iter().map(|&e| self.graph.edge_id(e)).collect()
    }
}

impl fmt::Display for ColouredPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "[{}]", self.graph.vertex_id(self.start));
        }
        let ids: Vec<_> = self.edge_ids();
        write!(f, "{}", ids.join("."))
    }
}

/// Canonical id of the grid vertex at lattice point n.
pub fn grid_vertex_id(n: &Degree) -> String {
    n.to_string()
}

/// Canonical id of the grid edge n + v_i (range corner n, one-based colour).
pub fn grid_edge_id(n: &Degree, colour: Colour) -> String {
    format!("{}+v_{}", n, colour.one_based())
}

/// The model graph E_{k,[p,q]}: vertices are the lattice points of [p,q], and
/// the colour-i edge n+v_i points from n+e_i to n.
#[derive(Clone, Debug)]
pub struct GridGraph {
    lower: Degree,
    upper: Degree,
    graph: ColouredGraph,
}

impl GridGraph {
    pub fn lower(&self) -> &Degree {
        &self.lower
    }

    pub fn upper(&self) -> &Degree {
        &self.upper
    }

    pub fn graph(&self) -> &ColouredGraph {
        &self.graph
    }

    pub fn vertex_at(&self, n: &Degree) -> Result<VertexIx> {
        self.graph.vertex(&grid_vertex_id(n))
    }

    pub fn edge_at(&self, n: &Degree, colour: Colour) -> Result<EdgeIx> {
        self.graph.edge(&grid_edge_id(n, colour))
    }
}

/// Builds E_{k,[lower,upper]}; E_{k,m} is the case lower = 0.
pub fn build_grid(k: usize, lower: &Degree, upper: &Degree) -> Result<GridGraph> {
    if lower.k() != k {
        return Err(Error::DegreeLength {
            got: lower.k(),
            expected: k,
        });
    }
    if upper.k() != k {
        return Err(Error::DegreeLength {
            got: upper.k(),
            expected: k,
        });
    }
    if !lower.le(upper) {
        return Err(Error::BadInterval {
            lower: lower.to_string(),
            upper: upper.to_string(),
        });
    }
    let mut builder = ColouredGraph::builder(k);
    let points = box_points(lower, upper);
    for n in &points {
        builder = builder.vertex(grid_vertex_id(n));
    }
    for n in &points {
        for i in 0..k {
            let colour = Colour::new(i);
            let succ = n.plus_unit(colour);
            if succ.le(upper) {
                builder = builder.edge(
                    grid_edge_id(n, colour),
                    grid_vertex_id(n),
                    grid_vertex_id(&succ),
                    colour.one_based(),
                );
            }
        }
    }
    Ok(GridGraph {
        lower: lower.clone(),
        upper: upper.clone(),
        graph: builder.build()?,
    })
}
