//! Backtracking enumeration of coloured-graph isomorphisms.

use std::collections::BTreeMap;

use crate::degree::Colour;
use crate::graph::{ColouredGraph, EdgeIx, VertexIx};

/// A pair of bijections (vertices, edges) preserving range, source, and
/// colour. Indexed positionally: entry `v` maps the first graph's vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredIsomorphism {
    pub vertex_map: Vec<VertexIx>,
    pub edge_map: Vec<EdgeIx>,
}

impl ColouredIsomorphism {
    pub fn identity(g: &ColouredGraph) -> Self {
        ColouredIsomorphism {
            vertex_map: g.vertices().collect(),
            edge_map: g.edges().collect(),
        }
    }

    /// Builds an isomorphism from id-level maps, verifying it.
    pub fn from_ids(
        g1: &ColouredGraph,
        g2: &ColouredGraph,
        vertices: &BTreeMap<String, String>,
        edges: &BTreeMap<String, String>,
    ) -> crate::error::Result<Self> {
        let mut vertex_map = Vec::with_capacity(g1.vertex_count());
        for v in g1.vertices() {
            let id = g1.vertex_id(v);
            let target = vertices
                .get(id)
                .ok_or_else(|| crate::error::Error::UnknownVertex { id: id.to_string() })?;
            vertex_map.push(g2.vertex(target)?);
        }
        let mut edge_map = Vec::with_capacity(g1.edge_count());
        for e in g1.edges() {
            let id = g1.edge_id(e);
            let target = edges
                .get(id)
                .ok_or_else(|| crate::error::Error::UnknownEdge { id: id.to_string() })?;
            edge_map.push(g2.edge(target)?);
        }
        let iso = ColouredIsomorphism {
            vertex_map,
            edge_map,
        };
        if !iso.verify(g1, g2) {
            return Err(crate::error::Error::CheckFailed {
                check: "isomorphism".into(),
                detail: "the given maps do not preserve range, source, and colour".into(),
            });
        }
        Ok(iso)
    }

    pub fn map_vertex(&self, v: VertexIx) -> VertexIx {
        self.vertex_map[v.index()]
    }

    pub fn map_edge(&self, e: EdgeIx) -> EdgeIx {
        self.edge_map[e.index()]
    }

    /// Full check: bijectivity plus the three preservation equations on every
    /// edge.
    pub fn verify(&self, g1: &ColouredGraph, g2: &ColouredGraph) -> bool {
        if g1.k() != g2.k()
            || self.vertex_map.len() != g1.vertex_count()
            || g1.vertex_count() != g2.vertex_count()
            || self.edge_map.len() != g1.edge_count()
            || g1.edge_count() != g2.edge_count()
        {
            return false;
        }
        let mut seen_v = vec![false; g2.vertex_count()];
        for &v in &self.vertex_map {
            if v.index() >= seen_v.len() || seen_v[v.index()] {
                return false;
            }
            seen_v[v.index()] = true;
        }
        let mut seen_e = vec![false; g2.edge_count()];
        for &e in &self.edge_map {
            if e.index() >= seen_e.len() || seen_e[e.index()] {
                return false;
            }
            seen_e[e.index()] = true;
        }
        g1.edges().all(|e| {
            let img = self.map_edge(e);
            g2.colour(img) == g1.colour(e)
                && g2.range(img) == self.map_vertex(g1.range(e))
                && g2.source(img) == self.map_vertex(g1.source(e))
        })
    }
}

/// Enumerates coloured-graph isomorphisms g1 -> g2 by backtracking, up to
/// `limit` results, in a deterministic order. Parallel edges are permuted
/// within their (range, source, colour) class, so multigraph symmetries are
/// enumerated too. Returns an empty list when the graphs are not isomorphic.
pub fn find_coloured_isomorphisms(
    g1: &ColouredGraph,
    g2: &ColouredGraph,
    limit: usize,
) -> Vec<ColouredIsomorphism> {
    let mut out = Vec::new();
    if limit == 0
        || g1.k() != g2.k()
        || g1.vertex_count() != g2.vertex_count()
        || g1.edge_count() != g2.edge_count()
    {
        return out;
    }
    let sig = |g: &ColouredGraph, v: VertexIx| -> Vec<(usize, usize)> {
        (0..g.k())
            .map(|c| {
                (
                    g.in_edges(v, Colour::new(c)).len(),
                    g.out_edges(v, Colour::new(c)).len(),
                )
            })
            .collect()
    };
    let sig1: Vec<_> = g1.vertices().map(|v| sig(g1, v)).collect();
    let sig2: Vec<_> = g2.vertices().map(|v| sig(g2, v)).collect();
    {
        let mut a = sig1.clone();
        let mut b = sig2.clone();
        a.sort();
        b.sort();
        if a != b {
            return out;
        }
    }

    let count_class = |g: &ColouredGraph, r: VertexIx, s: VertexIx, c: Colour| -> usize {
        g.in_edges(r, c).iter().filter(|&&e| g.source(e) == s).count()
    };

    let n = g1.vertex_count();
    let mut assignment: Vec<Option<VertexIx>> = vec![None; n];
    let mut used = vec![false; n];

    // depth-first over vertex assignments; on completion expand edge classes
    #[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
    fn assign_vertices(
        g1: &ColouredGraph,
        g2: &ColouredGraph,
        sig1: &[Vec<(usize, usize)>],
        sig2: &[Vec<(usize, usize)>],
        count_class: &impl Fn(&ColouredGraph, VertexIx, VertexIx, Colour) -> usize,
        assignment: &mut Vec<Option<VertexIx>>,
        used: &mut Vec<bool>,
        depth: usize,
        limit: usize,
        out: &mut Vec<ColouredIsomorphism>,
    ) {
        if out.len() >= limit {
            return;
        }
        if depth == assignment.len() {
            expand_edges(g1, g2, assignment, limit, out);
            return;
        }
        let v = VertexIx(depth as u32);
        'cands: for cand in 0..assignment.len() {
            if used[cand] || sig1[depth] != sig2[cand] {
                continue;
            }
            let vc = VertexIx(cand as u32);
            // pair-count consistency against all assigned vertices and self
            for prev in 0..=depth {
                let Some(pc) = (if prev == depth {
                    Some(vc)
                } else {
                    assignment[prev]
                }) else {
                    continue;
                };
                let pv = VertexIx(prev as u32);
                for c in 0..g1.k() {
                    let colour = Colour::new(c);
                    if count_class(g1, v, pv, colour) != count_class(g2, vc, pc, colour)
                        || count_class(g1, pv, v, colour) != count_class(g2, pc, vc, colour)
                    {
                        continue 'cands;
                    }
                }
            }
            assignment[depth] = Some(vc);
            used[cand] = true;
            assign_vertices(
                g1, g2, sig1, sig2, count_class, assignment, used, depth + 1, limit, out,
            );
            assignment[depth] = None;
            used[cand] = false;
            if out.len() >= limit {
                return;
            }
        }
    }

    fn expand_edges(
        g1: &ColouredGraph,
        g2: &ColouredGraph,
        assignment: &[Option<VertexIx>],
        limit: usize,
        out: &mut Vec<ColouredIsomorphism>,
    ) {
        let vmap: Vec<VertexIx> = assignment.iter().map(|a| a.unwrap()).collect();
        // group g1 edges by (range, source, colour)
        let mut classes: BTreeMap<(VertexIx, VertexIx, Colour), Vec<EdgeIx>> = BTreeMap::new();
        for e in g1.edges() {
            classes
                .entry((g1.range(e), g1.source(e), g1.colour(e)))
                .or_default()
                .push(e);
        }
        let mut targets: Vec<(Vec<EdgeIx>, Vec<EdgeIx>)> = Vec::new();
        for ((r, s, c), sources) in classes {
            let (r2, s2) = (vmap[r.index()], vmap[s.index()]);
            let image: Vec<EdgeIx> = g2
                .in_edges(r2, c)
                .iter()
                .copied()
                .filter(|&e| g2.source(e) == s2)
                .collect();
            if image.len() != sources.len() {
                return; // vertex map admits no edge bijection
            }
            targets.push((sources, image));
        }
        // lexicographic product of within-class permutations
        let mut edge_map = vec![EdgeIx(0); g1.edge_count()];
        fn per_class(
            targets: &[(Vec<EdgeIx>, Vec<EdgeIx>)],
            class: usize,
            edge_map: &mut Vec<EdgeIx>,
            vmap: &[VertexIx],
            limit: usize,
            out: &mut Vec<ColouredIsomorphism>,
        ) {
            if out.len() >= limit {
                return;
            }
            if class == targets.len() {
                out.push(ColouredIsomorphism {
                    vertex_map: vmap.to_vec(),
                    edge_map: edge_map.clone(),
                });
                return;
            }
            let (sources, image) = &targets[class];
            let mut taken = vec![false; image.len()];
            #[allow(clippy::too_many_arguments)]
            fn place(
                sources: &[EdgeIx],
                image: &[EdgeIx],
                taken: &mut Vec<bool>,
                pos: usize,
                targets: &[(Vec<EdgeIx>, Vec<EdgeIx>)],
                class: usize,
                edge_map: &mut Vec<EdgeIx>,
                vmap: &[VertexIx],
                limit: usize,
                out: &mut Vec<ColouredIsomorphism>,
            ) {
                if out.len() >= limit {
                    return;
                }
                if pos == sources.len() {
                    per_class(targets, class + 1, edge_map, vmap, limit, out);
                    return;
                }
                for t in 0..image.len() {
                    if taken[t] {
                        continue;
                    }
                    taken[t] = true;
                    edge_map[sources[pos].index()] = image[t];
                    place(
                        sources, image, taken, pos + 1, targets, class, edge_map, vmap, limit, out,
                    );
                    taken[t] = false;
                }
            }
            place(
                sources, image, &mut taken, 0, targets, class, edge_map, vmap, limit, out,
            );
        }
        per_class(&targets, 0, &mut edge_map, &vmap, limit, out);
    }

    assign_vertices(
        g1,
        g2,
        &sig1,
        &sig2,
        &count_class,
        &mut assignment,
        &mut used,
        0,
        limit,
        &mut out,
    );
    out
}
