//! Cube morphisms: C-compatible coloured-graph morphisms E_{k,m} -> E.
//!
//! A cube morphism is the concrete representation of a k-graph path. It is
//! stored densely — every grid vertex and grid edge of E_{k,m} is mapped — so
//! restriction is a copy, equality is structural, and every subpath is
//! explicit. Normalization of an edge word follows the inductive construction
//! that extends a cube one edge at a time, filling the new slab with square
//! flips.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use serde_json::json;

use crate::degree::{box_points, Colour, ColourWord, Degree};
use crate::error::{Error, Result};
use crate::graph::{grid_edge_id, grid_vertex_id, ColouredGraph, ColouredPath, EdgeIx, VertexIx};
use crate::squares::{Square, SquareCollection};

/// Row-major indexing over the lattice box [0, m].
#[derive(Clone, Debug)]
struct GridIndexer {
    dims: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl GridIndexer {
    fn new(degree: &Degree) -> Self {
        let k = degree.k();
        let dims: Vec<u32> = degree.coords().iter().map(|&c| c + 1).collect();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1] as usize;
        }
        let len = dims.iter().map(|&d| d as usize).product();
        GridIndexer { dims, strides, len }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn index(&self, point: &Degree) -> usize {
        debug_assert_eq!(point.k(), self.dims.len());
        let mut ix = 0;
        for (i, &c) in point.coords().iter().enumerate() {
            debug_assert!(c < self.dims[i], "point {point} outside grid");
            ix += c as usize * self.strides[i];
        }
        ix
    }

    fn index_with_offset(&self, point: &[u32], offset: &Degree) -> usize {
        point
            .iter()
            .zip(offset.coords())
            .zip(&self.strides)
            .map(|((&p, &o), &s)| (p + o) as usize * s)
            .sum()
    }
}

/// Row-major index of `point` in the box [0, degree], allocation-free.
fn flat_index(degree: &Degree, point: &Degree) -> usize {
    let mut ix = 0usize;
    let mut stride = 1usize;
    for i in (0..degree.k()).rev() {
        debug_assert!(point.get(i) <= degree.get(i), "point {point} outside {degree}");
        ix += point.get(i) as usize * stride;
        stride *= degree.get(i) as usize + 1;
    }
    ix
}

/// Advances a row-major counter over the box [0, upper]; false at the end.
fn advance(point: &mut [u32], upper: &Degree) -> bool {
    for i in (0..point.len()).rev() {
        if point[i] < upper.get(i) {
            point[i] += 1;
            for p in point.iter_mut().skip(i + 1) {
                *p = 0;
            }
            return true;
        }
    }
    false
}

/// A coloured-graph morphism E_{k,m} -> E, stored densely.
#[derive(Clone, Debug)]
pub struct CubeMorphism<'g> {
    graph: &'g ColouredGraph,
    degree: Degree,
    vertex_map: Vec<VertexIx>,
    // edge_maps[c] covers the box [0, m - e_c]; empty when m_c = 0
    edge_maps: Vec<Vec<EdgeIx>>,
}

impl PartialEq for CubeMorphism<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.vertex_map == other.vertex_map
            && self.edge_maps == other.edge_maps
    }
}

impl Eq for CubeMorphism<'_> {}

impl PartialOrd for CubeMorphism<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CubeMorphism<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.degree, &self.vertex_map, &self.edge_maps).cmp(&(
            &other.degree,
            &other.vertex_map,
            &other.edge_maps,
        ))
    }
}

impl Hash for CubeMorphism<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.vertex_map.hash(state);
        self.edge_maps.hash(state);
    }
}

impl<'g> CubeMorphism<'g> {
    /// The degree-0 morphism lambda_v.
    pub fn identity_at(graph: &'g ColouredGraph, v: VertexIx) -> Self {
        if v.index() >= graph.vertex_count() {
            panic!("vertex index out of range");
        }
        CubeMorphism {
            graph,
            degree: Degree::zero(graph.k()),
            vertex_map: vec![v],
            edge_maps: vec![Vec::new(); graph.k()],
        }
    }

    /// The degree-e_i morphism lambda_f for a single edge.
    pub fn edge_morphism(graph: &'g ColouredGraph, f: EdgeIx) -> Self {
        let colour = graph.colour(f);
        let degree = Degree::unit(graph.k(), colour);
        let mut edge_maps = vec![Vec::new(); graph.k()];
        edge_maps[colour.index()] = vec![f];
        CubeMorphism {
            graph,
            degree,
            // box [0, e_i] enumerates 0 first, then e_i
            vertex_map: vec![graph.range(f), graph.source(f)],
            edge_maps,
        }
    }

    /// Builds a cube from explicit maps, validating the coloured-graph
    /// morphism laws.
    pub fn from_maps(
        graph: &'g ColouredGraph,
        degree: Degree,
        vertex_at: impl Fn(&Degree) -> Result<VertexIx>,
        edge_at: impl Fn(&Degree, Colour) -> Result<EdgeIx>,
    ) -> Result<Self> {
        let vix = GridIndexer::new(&degree);
        let mut vertex_map = vec![VertexIx(0); vix.len()];
        for n in box_points(&Degree::zero(degree.k()), &degree) {
            vertex_map[vix.index(&n)] = vertex_at(&n)?;
        }
        let mut edge_maps = vec![Vec::new(); degree.k()];
        for (c, slot) in edge_maps.iter_mut().enumerate() {
            let colour = Colour::new(c);
            if let Some(sub) = degree.minus_unit(colour) {
                let eix = GridIndexer::new(&sub);
                let mut map = vec![EdgeIx(0); eix.len()];
                for n in box_points(&Degree::zero(degree.k()), &sub) {
                    map[eix.index(&n)] = edge_at(&n, colour)?;
                }
                *slot = map;
            }
        }
        let cube = CubeMorphism {
            graph,
            degree,
            vertex_map,
            edge_maps,
        };
        cube.validate_morphism()?;
        Ok(cube)
    }

    /// Checks colour, range, and source agreement of every grid edge.
    pub fn validate_morphism(&self) -> Result<()> {
        let g = self.graph;
        for c in 0..g.k() {
            let colour = Colour::new(c);
            let Some(sub) = self.degree.minus_unit(colour) else {
                continue;
            };
            for n in box_points(&Degree::zero(g.k()), &sub) {
                let e = self.edge_at(&n, colour);
                if g.colour(e) != colour {
                    return Err(Error::Precondition(format!(
                        "edge {} at {n}+v_{} has colour {}, expected {colour}",
                        g.edge_id(e),
                        colour.one_based(),
                        g.colour(e)
                    )));
                }
                if g.range(e) != self.vertex_at(&n) {
                    return Err(Error::Precondition(format!(
                        "range of edge at {n}+v_{} disagrees with the vertex map",
                        colour.one_based()
                    )));
                }
                if g.source(e) != self.vertex_at(&n.plus_unit(colour)) {
                    return Err(Error::Precondition(format!(
                        "source of edge at {n}+v_{} disagrees with the vertex map",
                        colour.one_based()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &'g ColouredGraph {
        self.graph
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    /// r(lambda) = lambda(0).
    pub fn range(&self) -> VertexIx {
        self.vertex_map[0]
    }

    /// s(lambda) = lambda(m).
    pub fn source(&self) -> VertexIx {
        *self.vertex_map.last().expect("vertex map is never empty")
    }

    /// lambda(n). Panics when n is outside [0, d(lambda)].
    pub fn vertex_at(&self, n: &Degree) -> VertexIx {
        assert!(n.le(&self.degree), "point {n} outside degree {}", self.degree);
        self.vertex_map[flat_index(&self.degree, n)]
    }

    /// lambda(n + v_i). Panics when n + e_i is outside [0, d(lambda)].
    pub fn edge_at(&self, n: &Degree, colour: Colour) -> EdgeIx {
        // the colour-i edge grid is the box [0, m - e_i]
        let mut ix = 0usize;
        let mut stride = 1usize;
        for i in (0..self.degree.k()).rev() {
            let dim = if i == colour.index() {
                self.degree.get(i) as usize
            } else {
                self.degree.get(i) as usize + 1
            };
            let c = n.get(i) as usize;
            assert!(c < dim, "edge point {n}+v_{} outside grid", colour.one_based());
            ix += c * stride;
            stride *= dim;
        }
        self.edge_maps[colour.index()][ix]
    }

    /// The translated restriction lambda|*_{E_{k,[p,q]}} of degree q - p.
    pub fn restrict(&self, p: &Degree, q: &Degree) -> Result<Self> {
        if !p.le(q) {
            return Err(Error::DegreeNotBelow {
                m: p.to_string(),
                n: q.to_string(),
            });
        }
        if !q.le(&self.degree) {
            return Err(Error::DegreeNotBelow {
                m: q.to_string(),
                n: self.degree.to_string(),
            });
        }
        let k = self.degree.k();
        let degree = q.minus(p).expect("checked p <= q");
        let self_vix = GridIndexer::new(&self.degree);
        let target_len = GridIndexer::new(&degree).len();
        let mut vertex_map = Vec::with_capacity(target_len);
        let mut point = vec![0u32; k];
        loop {
            vertex_map.push(self.vertex_map[self_vix.index_with_offset(&point, p)]);
            if !advance(&mut point, &degree) {
                break;
            }
        }
        let mut edge_maps = vec![Vec::new(); k];
        for (c, slot) in edge_maps.iter_mut().enumerate() {
            let colour = Colour::new(c);
            let Some(target_sub) = degree.minus_unit(colour) else {
                continue;
            };
            let self_sub = self
                .degree
                .minus_unit(colour)
                .expect("restricted degree fits inside");
            let self_eix = GridIndexer::new(&self_sub);
            let mut map = Vec::with_capacity(GridIndexer::new(&target_sub).len());
            let mut point = vec![0u32; k];
            loop {
                map.push(self.edge_maps[c][self_eix.index_with_offset(&point, p)]);
                if !advance(&mut point, &target_sub) {
                    break;
                }
            }
            *slot = map;
        }
        Ok(CubeMorphism {
            graph: self.graph,
            degree,
            vertex_map,
            edge_maps,
        })
    }

    /// lambda(m, n), the segment of degree n - m.
    pub fn segment(&self, m: &Degree, n: &Degree) -> Result<Self> {
        self.restrict(m, n)
    }

    /// The unique splitting (lambda(0,m), lambda(m,d)) along d(lambda) = m + (d - m).
    pub fn factorise(&self, m: &Degree) -> Result<(Self, Self)> {
        let head = self.restrict(&Degree::zero(self.degree.k()), m)?;
        let tail = self.restrict(m, &self.degree)?;
        Ok((head, tail))
    }

    /// Does x traverse this morphism?
    pub fn traverses(&self, x: &ColouredPath<'g>) -> bool {
        if !std::ptr::eq(self.graph, x.graph()) {
            return false;
        }
        if x.shape() != self.degree {
            return false;
        }
        if x.is_empty() {
            return x.range() == self.range();
        }
        let mut pos = Degree::zero(self.degree.k());
        for &e in x.edges() {
            let colour = self.graph.colour(e);
            if self.edge_at(&pos, colour) != e {
                return false;
            }
            pos = pos.plus_unit(colour);
        }
        true
    }

    /// The staircase path reading this morphism along the given colour word;
    /// None when the word's shape differs from the degree.
    pub fn traversal_along(&self, word: &ColourWord) -> Option<ColouredPath<'g>> {
        let shape = crate::degree::abelianize(word, self.graph.k()).ok()?;
        if shape != self.degree {
            return None;
        }
        if word.is_empty() {
            return Some(ColouredPath::empty(self.graph, self.range()));
        }
        let mut pos = Degree::zero(self.degree.k());
        let mut edges = Vec::with_capacity(word.len());
        for &colour in word.letters() {
            edges.push(self.edge_at(&pos, colour));
            pos = pos.plus_unit(colour);
        }
        ColouredPath::new(self.graph, edges).ok()
    }

    /// The canonical traversal along the sorted colour word c_1^{m_1} ... c_k^{m_k}.
    pub fn canonical_traversal(&self) -> ColouredPath<'g> {
        let mut letters = Vec::new();
        for c in 0..self.degree.k() {
            for _ in 0..self.degree.get(c) {
                letters.push(Colour::new(c));
            }
        }
        self.traversal_along(&ColourWord::new(letters))
            .expect("sorted word has the cube's shape")
    }

    /// All traversals, one per monotone staircase, in lexicographic order of
    /// colour-index sequences.
    pub fn enumerate_traversals(&self) -> Vec<ColouredPath<'g>> {
        let mut words = Vec::new();
        let mut counts: Vec<u32> = self.degree.coords().to_vec();
        let mut prefix = Vec::new();
        multiset_words(&mut counts, &mut prefix, &mut words);
        words
            .into_iter()
            .map(|w| {
                self.traversal_along(&w)
                    .expect("staircase word has the cube's shape")
            })
            .collect()
    }

    /// Every unit square occurring in the cube, as (position, square edges).
    pub fn occurring_squares(&self) -> Vec<(Degree, Square)> {
        let k = self.degree.k();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let (ci, cj) = (Colour::new(i), Colour::new(j));
                let Some(sub) = self
                    .degree
                    .minus_unit(ci)
                    .and_then(|d| d.minus_unit(cj))
                else {
                    continue;
                };
                for n in box_points(&Degree::zero(k), &sub) {
                    let a = self.edge_at(&n, ci);
                    let b = self.edge_at(&n.plus_unit(ci), cj);
                    let b2 = self.edge_at(&n, cj);
                    let a2 = self.edge_at(&n.plus_unit(cj), ci);
                    out.push((
                        n,
                        Square {
                            i: ci,
                            j: cj,
                            a,
                            b,
                            b2,
                            a2,
                        },
                    ));
                }
            }
        }
        out
    }

    /// First occurring square not in the collection, if any.
    pub fn incompatible_square(&self, c: &SquareCollection<'g>) -> Option<(Degree, Square)> {
        self.occurring_squares()
            .into_iter()
            .find(|(_, sq)| match c.owner(sq.a, sq.b) {
                Ok(owner) => owner != sq,
                Err(_) => true,
            })
    }

    pub fn is_compatible(&self, c: &SquareCollection<'g>) -> bool {
        self.incompatible_square(c).is_none()
    }

    /// Renders the cube in the instance JSON form used by the CLI.
    pub fn to_json(&self) -> serde_json::Value {
        let g = self.graph;
        let mut vertices = BTreeMap::new();
        for n in box_points(&Degree::zero(g.k()), &self.degree) {
            vertices.insert(grid_vertex_id(&n), g.vertex_id(self.vertex_at(&n)).to_string());
        }
        let mut edges = BTreeMap::new();
        for c in 0..g.k() {
            let colour = Colour::new(c);
            if let Some(sub) = self.degree.minus_unit(colour) {
                for n in box_points(&Degree::zero(g.k()), &sub) {
                    edges.insert(
                        grid_edge_id(&n, colour),
                        g.edge_id(self.edge_at(&n, colour)).to_string(),
                    );
                }
            }
        }
        json!({
            "degree": self.degree.coords(),
            "vertices": vertices,
            "edges": edges,
        })
    }
}

/// All words using each colour c exactly counts[c] times, in lex order.
fn multiset_words(counts: &mut [u32], prefix: &mut Vec<Colour>, out: &mut Vec<ColourWord>) {
    if counts.iter().all(|&c| c == 0) {
        out.push(ColourWord::new(prefix.clone()));
        return;
    }
    for c in 0..counts.len() {
        if counts[c] > 0 {
            counts[c] -= 1;
            prefix.push(Colour::new(c));
            multiset_words(counts, prefix, out);
            prefix.pop();
            counts[c] += 1;
        }
    }
}

/// Write-once cube under construction; conflicting writes surface the
/// consistency failures that a non-associative collection produces.
struct CubeBuilder<'g> {
    graph: &'g ColouredGraph,
    degree: Degree,
    vix: GridIndexer,
    eixs: Vec<Option<GridIndexer>>,
    vertices: Vec<u32>,
    edges: Vec<Vec<u32>>,
}

const UNSET: u32 = u32::MAX;

struct WriteConflict;

impl<'g> CubeBuilder<'g> {
    fn new(graph: &'g ColouredGraph, degree: Degree) -> Self {
        let vix = GridIndexer::new(&degree);
        let mut eixs = Vec::with_capacity(degree.k());
        let mut edges = Vec::with_capacity(degree.k());
        for c in 0..degree.k() {
            match degree.minus_unit(Colour::new(c)) {
                Some(sub) => {
                    let ix = GridIndexer::new(&sub);
                    edges.push(vec![UNSET; ix.len()]);
                    eixs.push(Some(ix));
                }
                None => {
                    edges.push(Vec::new());
                    eixs.push(None);
                }
            }
        }
        let vertices = vec![UNSET; vix.len()];
        CubeBuilder {
            graph,
            degree,
            vix,
            eixs,
            vertices,
            edges,
        }
    }

    fn set_vertex(&mut self, n: &Degree, v: VertexIx) -> std::result::Result<(), WriteConflict> {
        let slot = &mut self.vertices[self.vix.index(n)];
        if *slot == UNSET {
            *slot = v.0;
            Ok(())
        } else if *slot == v.0 {
            Ok(())
        } else {
            Err(WriteConflict)
        }
    }

    fn set_edge(
        &mut self,
        n: &Degree,
        colour: Colour,
        e: EdgeIx,
    ) -> std::result::Result<(), WriteConflict> {
        let ix = self.eixs[colour.index()]
            .as_ref()
            .expect("edge write within degree")
            .index(n);
        let slot = &mut self.edges[colour.index()][ix];
        if *slot == UNSET {
            *slot = e.0;
            Ok(())
        } else if *slot == e.0 {
            Ok(())
        } else {
            Err(WriteConflict)
        }
    }

    fn get_edge(&self, n: &Degree, colour: Colour) -> Option<EdgeIx> {
        let ix = self.eixs[colour.index()].as_ref()?.index(n);
        let raw = self.edges[colour.index()][ix];
        (raw != UNSET).then_some(EdgeIx(raw))
    }

    /// Copies `block` (a cube of degree <= self.degree - offset) at `offset`.
    fn write_block(
        &mut self,
        block: &CubeMorphism<'g>,
        offset: &Degree,
    ) -> std::result::Result<(), WriteConflict> {
        let k = self.degree.k();
        let mut point = vec![0u32; k];
        for (flat, &v) in block.vertex_map.iter().enumerate() {
            let tix = self.vix.index_with_offset(&point, offset);
            let slot = &mut self.vertices[tix];
            if *slot == UNSET {
                *slot = v.0;
            } else if *slot != v.0 {
                return Err(WriteConflict);
            }
            let more = advance(&mut point, block.degree());
            debug_assert!(more || flat + 1 == block.vertex_map.len());
        }
        for c in 0..k {
            let colour = Colour::new(c);
            let Some(sub) = block.degree().minus_unit(colour) else {
                continue;
            };
            let eix = self.eixs[c].as_ref().expect("target grid covers the block");
            let mut point = vec![0u32; k];
            for (flat, &e) in block.edge_maps[c].iter().enumerate() {
                let tix = eix.index_with_offset(&point, offset);
                let slot = &mut self.edges[c][tix];
                if *slot == UNSET {
                    *slot = e.0;
                } else if *slot != e.0 {
                    return Err(WriteConflict);
                }
                let more = advance(&mut point, &sub);
                debug_assert!(more || flat + 1 == block.edge_maps[c].len());
            }
        }
        Ok(())
    }

    fn finish(self) -> CubeMorphism<'g> {
        assert!(
            self.vertices.iter().all(|&v| v != UNSET)
                && self.edges.iter().flatten().all(|&e| e != UNSET),
            "cube construction left cells unset"
        );
        CubeMorphism {
            graph: self.graph,
            degree: self.degree,
            vertex_map: self.vertices.into_iter().map(VertexIx).collect(),
            edge_maps: self
                .edges
                .into_iter()
                .map(|m| m.into_iter().map(EdgeIx).collect())
                .collect(),
        }
    }
}

impl<'g> SquareCollection<'g> {
    /// Extends a cube by one edge appended at its source: the unique
    /// C-compatible morphism traversed by (any traversal of `base`) . f.
    ///
    /// The new top slab is filled by sweeping down from the new edge, one
    /// square flip per step. With no off-colour coordinates the slab is the
    /// single new edge; with one the sweep is a chain of flips; with two or
    /// more, positions are reached along several routes and the results must
    /// agree — disagreement means the collection is not associative and is
    /// reported with a witnessing tri-coloured path.
    pub fn extend(&self, base: &CubeMorphism<'g>, f: EdgeIx) -> Result<CubeMorphism<'g>> {
        let g = self.graph();
        if base.source() != g.range(f) {
            return Err(Error::ComposeMismatch {
                source_id: g.vertex_id(base.source()).to_string(),
                range_id: g.vertex_id(g.range(f)).to_string(),
            });
        }
        let colour = g.colour(f);
        let m = base.degree().clone();
        let new_degree = m.plus_unit(colour);
        let cells = new_degree.box_size();
        if cells > self.limits().max_cells {
            return Err(Error::CellBudget {
                degree: new_degree.to_string(),
                cells,
                budget: self.limits().max_cells,
            });
        }

        let mut builder = CubeBuilder::new(g, new_degree.clone());
        if builder.write_block(base, &Degree::zero(g.k())).is_err() {
            unreachable!("fresh builder cannot conflict");
        }
        let top = builder.set_edge(&m, colour, f);
        let corner = builder.set_vertex(&m.plus_unit(colour), g.source(f));
        debug_assert!(top.is_ok() && corner.is_ok());

        // slab of new colour-i edge positions: n <= m with n_i = m_i,
        // processed by descending total so n + e_j is always filled first
        let flat = {
            let mut coords = m.coords().to_vec();
            coords[colour.index()] = 0;
            Degree::from_coords(coords)
        };
        let mut slab: Vec<Degree> = box_points(&Degree::zero(g.k()), &flat)
            .into_iter()
            .map(|p| {
                let mut coords = p.coords().to_vec();
                coords[colour.index()] = m.coord(colour);
                Degree::from_coords(coords)
            })
            .filter(|n| n != &m)
            .collect();
        slab.sort_by_key(|n| std::cmp::Reverse(n.total()));

        for n in &slab {
            let mut filled_by: Option<Colour> = None;
            for c in 0..g.k() {
                let j = Colour::new(c);
                if j == colour || n.coord(j) >= m.coord(j) {
                    continue;
                }
                // flip the 2-path lambda(n + v_j) . E(n + e_j) across its square
                let a = base.edge_at(n, j);
                let upper = builder
                    .get_edge(&n.plus_unit(j), colour)
                    .expect("higher slab position is filled");
                let owner = self.owner(a, upper)?;
                let (g_edge, h_edge) = if (a, upper) == owner.face_i_first() {
                    owner.face_j_first()
                } else {
                    owner.face_i_first()
                };
                debug_assert_eq!(g.colour(g_edge), colour);
                debug_assert_eq!(g.colour(h_edge), j);
                let mut ok = builder.set_edge(n, colour, g_edge).is_ok();
                ok = ok && builder.set_vertex(&n.plus_unit(colour), g.source(g_edge)).is_ok();
                ok = ok
                    && builder
                        .set_edge(&n.plus_unit(colour), j, h_edge)
                        .is_ok();
                if !ok {
                    let first = filled_by.expect("conflicts need an earlier route");
                    return Err(self.associativity_witness(&builder, base, n, colour, first, j));
                }
                filled_by.get_or_insert(j);
            }
            debug_assert!(filled_by.is_some(), "every slab position has a route");
        }

        // squares spanning two off-colours completed at the new level are not
        // produced by any flip above; they must already belong to C, or the
        // collection is not associative
        let top_level = m.coord(colour) + 1;
        for j1 in (0..g.k()).map(Colour::new) {
            for j2 in (j1.index() + 1..g.k()).map(Colour::new) {
                if j1 == colour || j2 == colour {
                    continue;
                }
                let Some(reduced) = new_degree
                    .minus_unit(j1)
                    .and_then(|d| d.minus_unit(j2))
                else {
                    continue;
                };
                let slice = {
                    let mut coords = reduced.coords().to_vec();
                    coords[colour.index()] = 0;
                    Degree::from_coords(coords)
                };
                for q in box_points(&Degree::zero(g.k()), &slice) {
                    let p = {
                        let mut coords = q.coords().to_vec();
                        coords[colour.index()] = top_level;
                        Degree::from_coords(coords)
                    };
                    let a = builder
                        .get_edge(&p, j1)
                        .expect("finished slab leaves no holes");
                    let b = builder
                        .get_edge(&p.plus_unit(j1), j2)
                        .expect("finished slab leaves no holes");
                    let b2 = builder
                        .get_edge(&p, j2)
                        .expect("finished slab leaves no holes");
                    let a2 = builder
                        .get_edge(&p.plus_unit(j2), j1)
                        .expect("finished slab leaves no holes");
                    // an unowned face is an incompleteness error; an owner
                    // whose opposite face differs is a cube-condition failure
                    let owner = self.owner(a, b)?;
                    debug_assert_eq!(owner.face_i_first(), (a, b));
                    if owner.face_j_first() != (b2, a2) {
                        return Err(self.nonassociative_error(a, b, f));
                    }
                }
            }
        }
        Ok(builder.finish())
    }

    /// Produces the non-associativity error raised when slab routes disagree
    /// during `extend`. Prefers a genuine cube-condition violation found by
    /// the checker; falls back to the tri-coloured path through the clashing
    /// corner.
    fn associativity_witness(
        &self,
        builder: &CubeBuilder<'g>,
        base: &CubeMorphism<'g>,
        n: &Degree,
        slab_colour: Colour,
        j1: Colour,
        j2: Colour,
    ) -> Error {
        let t_a = base.edge_at(n, j2);
        let t_b = base.edge_at(&n.plus_unit(j2), j1);
        let t_c = builder.get_edge(&n.plus_unit(j1).plus_unit(j2), slab_colour);
        self.nonassociative_error(t_a, t_b, t_c.unwrap_or(t_b))
    }

    /// NonAssociative error carrying a genuine violating triple from the
    /// checker when one is found, else the provided local edges.
    fn nonassociative_error(&self, a: EdgeIx, b: EdgeIx, c: EdgeIx) -> Error {
        match self.check_associative(false) {
            Err(e) => e,
            Ok(report) => match report.violations.first() {
                Some(v) => Error::NonAssociative {
                    f: v.f.clone(),
                    g: v.g.clone(),
                    h: v.h.clone(),
                },
                None => {
                    let g = self.graph();
                    Error::NonAssociative {
                        f: g.edge_id(a).to_string(),
                        g: g.edge_id(b).to_string(),
                        h: g.edge_id(c).to_string(),
                    }
                }
            },
        }
    }

    /// The unique C-compatible morphism lambda_x traversed by x.
    pub fn normalize(&self, x: &ColouredPath<'g>) -> Result<CubeMorphism<'g>> {
        let mut cube = CubeMorphism::identity_at(self.graph(), x.range());
        for &e in x.edges() {
            cube = self.extend(&cube, e)?;
        }
        Ok(cube)
    }

    /// The unique composition mu.nu restricting to mu on [0, d(mu)] and to nu
    /// on [d(mu), d(mu)+d(nu)].
    pub fn compose(
        &self,
        mu: &CubeMorphism<'g>,
        nu: &CubeMorphism<'g>,
    ) -> Result<CubeMorphism<'g>> {
        let g = self.graph();
        if mu.source() != nu.range() {
            return Err(Error::ComposeMismatch {
                source_id: g.vertex_id(mu.source()).to_string(),
                range_id: g.vertex_id(nu.range()).to_string(),
            });
        }
        let mut cube = mu.clone();
        for &e in nu.canonical_traversal().edges() {
            cube = self.extend(&cube, e)?;
        }
        Ok(cube)
    }

    /// The unique cube traversed by the tri-coloured path f g h.
    pub fn tricolour_fill(
        &self,
        f: EdgeIx,
        g_edge: EdgeIx,
        h: EdgeIx,
    ) -> Result<CubeMorphism<'g>> {
        let g = self.graph();
        let (cf, cg, ch) = (g.colour(f), g.colour(g_edge), g.colour(h));
        if cf == cg || cg == ch || cf == ch {
            return Err(Error::ColoursNotDistinct);
        }
        let path = ColouredPath::new(g, vec![f, g_edge, h])?;
        self.normalize(&path)
    }
}
