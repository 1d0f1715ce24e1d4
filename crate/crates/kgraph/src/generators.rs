//! Canonical and random instance builders.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::{box_points, Colour, Degree};
use crate::error::{Error, Result};
use crate::graph::{build_grid, ColouredGraph, EdgeIx};
use crate::instance::Instance;
use crate::squares::{Square, SquareCollection};

/// Single vertex, one blue loop f and one red loop g, with fg ~ gf. The
/// resulting 2-graph is N^2; its C*-algebra is C(T^2).
pub fn torus() -> Instance {
    let graph = ColouredGraph::builder(2)
        .vertex("v")
        .edge("f", "v", "v", 1)
        .edge("g", "v", "v", 2)
        .build()
        .expect("torus graph is well formed");
    let f = graph.edge("f").unwrap();
    let g = graph.edge("g").unwrap();
    let sq = Square::new(&graph, Colour::new(0), Colour::new(1), f, g, g, f)
        .expect("torus square is well formed");
    Instance::new("torus", graph, vec![sq]).with_provenance("generator:torus", None)
}

/// The grid E_{k,m} with its unique complete collection of squares; the
/// associated k-graph is Omega_{k,m}.
pub fn omega(m: &Degree) -> Result<Instance> {
    let k = m.k();
    let grid = build_grid(k, &Degree::zero(k), m)?;
    let g = grid.graph();
    let mut squares = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (ci, cj) = (Colour::new(i), Colour::new(j));
            for n in box_points(&Degree::zero(k), m) {
                if !n.plus_unit(ci).plus_unit(cj).le(m) {
                    continue;
                }
                let a = grid.edge_at(&n, ci)?;
                let b = grid.edge_at(&n.plus_unit(ci), cj)?;
                let b2 = grid.edge_at(&n, cj)?;
                let a2 = grid.edge_at(&n.plus_unit(cj), ci)?;
                squares.push(Square::new(g, ci, cj, a, b, b2, a2)?);
            }
        }
    }
    Ok(
        Instance::new(format!("omega_{k}_{m}"), g.clone(), squares)
            .with_provenance("generator:omega", None),
    )
}

/// Single-vertex 1-graph with n loops named `{prefix}0..{prefix}{n-1}`.
pub fn loops_1graph(prefix: &str, n: usize) -> ColouredGraph {
    let mut b = ColouredGraph::builder(1).vertex("v");
    for i in 0..n {
        b = b.edge(format!("{prefix}{i}"), "v", "v", 1);
    }
    b.build().expect("loop graph is well formed")
}

/// Directed cycle of the given length as a 1-graph; edge `c{i}` has range
/// `u{i}` and source `u{i+1 mod len}`.
pub fn cycle_1graph(len: usize) -> ColouredGraph {
    let mut b = ColouredGraph::builder(1);
    for i in 0..len {
        b = b.vertex(format!("u{i}"));
    }
    for i in 0..len {
        b = b.edge(format!("c{i}"), format!("u{i}"), format!("u{}", (i + 1) % len), 1);
    }
    b.build().expect("cycle graph is well formed")
}

/// Cartesian product of k 1-graphs: colour-i edges move in factor i only, and
/// squares commute cross-colour moves componentwise. The collection is
/// complete and associative by construction; both checkers are run anyway.
pub fn product_of_1graphs(factors: &[&ColouredGraph]) -> Result<Instance> {
    let k = factors.len();
    if k == 0 {
        return Err(Error::Precondition("product needs at least one factor".into()));
    }
    for (i, f) in factors.iter().enumerate() {
        if f.k() != 1 {
            return Err(Error::Precondition(format!(
                "factor {i} must be a 1-graph, has k = {}",
                f.k()
            )));
        }
    }

    let vertex_tuple = |vs: &[u32]| -> String {
        let parts: Vec<&str> = vs
            .iter()
            .enumerate()
            .map(|(i, &v)| factors[i].vertex_id(crate::graph::VertexIx(v)))
            .collect();
        format!("({})", parts.join(","))
    };
    // edge id: the moving slot carries the factor edge id, the rest vertices
    let edge_tuple = |slot: usize, e: EdgeIx, vs: &[u32]| -> String {
        let parts: Vec<String> = vs
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == slot {
                    factors[i].edge_id(e).to_string()
                } else {
                    factors[i].vertex_id(crate::graph::VertexIx(v)).to_string()
                }
            })
            .collect();
        format!("({})#c{}", parts.join(","), slot + 1)
    };

    let dims: Vec<u32> = factors.iter().map(|f| f.vertex_count() as u32).collect();
    let tuples = {
        let upper = Degree::from_coords(dims.iter().map(|d| d - 1).collect());
        box_points(&Degree::zero(k), &upper)
    };

    let mut builder = ColouredGraph::builder(k);
    for t in &tuples {
        builder = builder.vertex(vertex_tuple(t.coords()));
    }
    for t in &tuples {
        for (slot, factor) in factors.iter().enumerate() {
            let at = crate::graph::VertexIx(t.get(slot));
            for &e in factor.in_edges(at, Colour::new(0)) {
                let mut source = t.coords().to_vec();
                source[slot] = factor.source(e).0;
                builder = builder.edge(
                    edge_tuple(slot, e, t.coords()),
                    vertex_tuple(t.coords()),
                    vertex_tuple(&source),
                    slot + 1,
                );
            }
        }
    }
    let graph = builder.build()?;

    let mut squares = Vec::new();
    for t in &tuples {
        for i in 0..k {
            for j in i + 1..k {
                let vi = crate::graph::VertexIx(t.get(i));
                let vj = crate::graph::VertexIx(t.get(j));
                for &f in factors[i].in_edges(vi, Colour::new(0)) {
                    for &g in factors[j].in_edges(vj, Colour::new(0)) {
                        let coords = t.coords().to_vec();
                        let mut after_f = coords.clone();
                        after_f[i] = factors[i].source(f).0;
                        let mut after_g = coords.clone();
                        after_g[j] = factors[j].source(g).0;
                        let a = graph.edge(&edge_tuple(i, f, &coords))?;
                        let b = {
                            let mut pos = after_f.clone();
                            pos[j] = t.get(j);
                            graph.edge(&edge_tuple(j, g, &pos))?
                        };
                        let b2 = graph.edge(&edge_tuple(j, g, &coords))?;
                        let a2 = graph.edge(&edge_tuple(i, f, &after_g))?;
                        squares.push(Square::new(
                            &graph,
                            Colour::new(i),
                            Colour::new(j),
                            a,
                            b,
                            b2,
                            a2,
                        )?);
                    }
                }
            }
        }
    }

    // by-construction guarantee, asserted
    let collection = SquareCollection::new(&graph, squares.clone())?;
    let completeness = collection.check_complete();
    if !completeness.complete {
        return Err(Error::CheckFailed {
            check: "product completeness".into(),
            detail: format!("{} violations", completeness.violations.len()),
        });
    }
    let assoc = collection.check_associative(false)?;
    if !assoc.associative {
        return Err(Error::CheckFailed {
            check: "product associativity".into(),
            detail: "cube condition violated".into(),
        });
    }
    drop(collection);
    Ok(Instance::new(format!("product_k{k}"), graph, squares)
        .with_provenance("generator:product", None))
}

/// Basic data (T, q, t, w) for the rank-2 examples built from functions on a
/// hereditary pattern T into Z/qZ.
#[derive(Clone, Debug)]
pub struct BasicData {
    pattern: Vec<(u32, u32)>,
    modulus: u32,
    target: u32,
    weights: BTreeMap<(u32, u32), u32>,
}

impl BasicData {
    /// Validates: T hereditary with corners d1*e1, d2*e2 (d_i >= 1), weights
    /// defined on T, target in Z/q, and nonzero corner weights when q > 1.
    pub fn new(
        pattern: impl IntoIterator<Item = (u32, u32)>,
        modulus: u32,
        target: u32,
        weights: BTreeMap<(u32, u32), u32>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Precondition("modulus q must be >= 1".into()));
        }
        let set: BTreeSet<(u32, u32)> = pattern.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Precondition("pattern T must be nonempty".into()));
        }
        for &(a, b) in &set {
            for p in 0..=a {
                for r in 0..=b {
                    if !set.contains(&(p, r)) {
                        return Err(Error::Precondition(format!(
                            "pattern T is not hereditary: missing ({p},{r}) below ({a},{b})"
                        )));
                    }
                }
            }
        }
        let d1 = set.iter().filter(|&&(_, b)| b == 0).map(|&(a, _)| a).max().unwrap();
        let d2 = set.iter().filter(|&&(a, _)| a == 0).map(|&(_, b)| b).max().unwrap();
        if d1 < 1 || d2 < 1 {
            return Err(Error::Precondition(
                "pattern corners d1*e1, d2*e2 need d_i >= 1".into(),
            ));
        }
        for &p in &set {
            if !weights.contains_key(&p) {
                return Err(Error::Precondition(format!(
                    "weight missing at pattern point ({},{})",
                    p.0, p.1
                )));
            }
        }
        if modulus > 1 {
            for corner in [(d1, 0), (0, d2)] {
                if weights[&corner].is_multiple_of(modulus) {
                    return Err(Error::Precondition(format!(
                        "corner weight at ({},{}) must be nonzero mod q",
                        corner.0, corner.1
                    )));
                }
            }
        }
        if target >= modulus {
            return Err(Error::Precondition("target t must lie in Z/qZ".into()));
        }
        Ok(BasicData {
            pattern: set.into_iter().collect(),
            modulus,
            target,
            weights,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn pattern(&self) -> &[(u32, u32)] {
        &self.pattern
    }

    /// T(m) = union of T + n over 0 <= n <= m, sorted.
    fn window_union(&self, m: &Degree) -> Vec<(u32, u32)> {
        let mut pts = BTreeSet::new();
        for n in box_points(&Degree::zero(2), m) {
            for &(a, b) in &self.pattern {
                pts.insert((a + n.get(0), b + n.get(1)));
            }
        }
        pts.into_iter().collect()
    }

    /// All functions T(m) -> Z/qZ whose every window T+n (0 <= n <= m) sums
    /// against the weights to the target. Each function is returned as values
    /// in the order of the sorted domain.
    fn admissible_functions(&self, m: &Degree) -> Vec<Vec<u32>> {
        let domain = self.window_union(m);
        let pos: BTreeMap<(u32, u32), usize> = domain
            .iter()
            .enumerate()
            .map(|(ix, &p)| (p, ix))
            .collect();
        // windows grouped by the domain index at which they complete
        let mut windows_by_last: Vec<Vec<Vec<(usize, u32)>>> = vec![Vec::new(); domain.len()];
        for n in box_points(&Degree::zero(2), m) {
            let mut cells = Vec::with_capacity(self.pattern.len());
            let mut last = 0usize;
            for &(a, b) in &self.pattern {
                let ix = pos[&(a + n.get(0), b + n.get(1))];
                last = last.max(ix);
                cells.push((ix, self.weights[&(a, b)]));
            }
            windows_by_last[last].push(cells);
        }
        let mut out = Vec::new();
        let mut values = vec![0u32; domain.len()];
        self.assign(0, &mut values, &windows_by_last, &mut out);
        out
    }

    fn assign(
        &self,
        idx: usize,
        values: &mut Vec<u32>,
        windows_by_last: &[Vec<Vec<(usize, u32)>>],
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx == values.len() {
            out.push(values.clone());
            return;
        }
        'vals: for val in 0..self.modulus {
            values[idx] = val;
            for window in &windows_by_last[idx] {
                let sum: u64 = window
                    .iter()
                    .map(|&(ix, w)| (w as u64) * (values[ix] as u64))
                    .sum();
                if (sum % self.modulus as u64) as u32 != self.target {
                    continue 'vals;
                }
            }
            self.assign(idx + 1, values, windows_by_last, out);
        }
        values[idx] = 0;
    }

    /// Restriction of a function on T(m) to the translated window T(m')+n,
    /// re-expressed over the sorted domain of T(m').
    fn window_values(
        &self,
        values: &[u32],
        big: &Degree,
        small: &Degree,
        offset: &Degree,
    ) -> Vec<u32> {
        let big_domain = self.window_union(big);
        let pos: BTreeMap<(u32, u32), usize> = big_domain
            .iter()
            .enumerate()
            .map(|(ix, &p)| (p, ix))
            .collect();
        self.window_union(small)
            .iter()
            .map(|&(a, b)| values[pos[&(a + offset.get(0), b + offset.get(1))]])
            .collect()
    }
}

fn value_id(prefix: &str, values: &[u32]) -> String {
    let parts: Vec<String> = values.iter().map(u32::to_string).collect();
    format!("{prefix}[{}]", parts.join(","))
}

#[derive(Clone, Debug)]
pub struct PrwOutcome {
    pub instance: Instance,
    /// (degree, common count) for every degree checked bijective.
    pub bijectivity: Vec<(Degree, usize)>,
}

/// Builds the 2-coloured graph and squares of the basic-data 2-graph: vertices
/// are admissible functions on T, colour-i edges admissible functions on
/// T(e_i), squares admissible functions on T(e_1+e_2). Verifies that
/// lambda -> mu_lambda is a degree-preserving bijection from admissible
/// functions on T(m) onto the degree-m cube morphisms, for every m up to
/// `degree_cap`.
pub fn prw_2graph(data: &BasicData, degree_cap: &Degree) -> Result<PrwOutcome> {
    let zero = Degree::zero(2);
    let e1 = Degree::from_coords(vec![1, 0]);
    let e2 = Degree::from_coords(vec![0, 1]);
    let e12 = Degree::from_coords(vec![1, 1]);

    let budget = 100_000.0f64;
    let cells = data.window_union(&zero).len() as i32;
    if (data.modulus as f64).powi(cells) > budget {
        return Err(Error::GenerationBudget(format!(
            "q^|T| = {}^{} exceeds {budget}",
            data.modulus, cells
        )));
    }

    let vertices = data.admissible_functions(&zero);
    let mut builder = ColouredGraph::builder(2);
    for v in &vertices {
        builder = builder.vertex(value_id("v", v));
    }
    let edge_prefix = ["h", "u"];
    let edge_funcs: Vec<Vec<Vec<u32>>> = vec![
        data.admissible_functions(&e1),
        data.admissible_functions(&e2),
    ];
    for (c, funcs) in edge_funcs.iter().enumerate() {
        let unit = if c == 0 { &e1 } else { &e2 };
        for f in funcs {
            let range = data.window_values(f, unit, &zero, &zero);
            let source = data.window_values(f, unit, &zero, unit);
            builder = builder.edge(
                value_id(edge_prefix[c], f),
                value_id("v", &range),
                value_id("v", &source),
                c + 1,
            );
        }
    }
    let graph = builder.build()?;

    let mut squares = Vec::new();
    for f in data.admissible_functions(&e12) {
        let face = |small: &Degree, offset: &Degree, prefix: &str| -> Result<EdgeIx> {
            graph.edge(&value_id(
                prefix,
                &data.window_values(&f, &e12, small, offset),
            ))
        };
        let a = face(&e1, &zero, "h")?;
        let b = face(&e2, &e1, "u")?;
        let b2 = face(&e2, &zero, "u")?;
        let a2 = face(&e1, &e2, "h")?;
        squares.push(Square::new(&graph, Colour::new(0), Colour::new(1), a, b, b2, a2)?);
    }

    let instance = Instance::new(
        format!("prw_q{}_t{}", data.modulus, data.target),
        graph,
        squares,
    )
    .with_provenance("generator:prw", None);

    // bijectivity of lambda -> mu_lambda per degree
    let kg = instance.kgraph()?;
    let mut bijectivity = Vec::new();
    for m in box_points(&zero, degree_cap) {
        let lambdas = data.admissible_functions(&m);
        let mut images = BTreeSet::new();
        for lam in &lambdas {
            let cube = crate::cube::CubeMorphism::from_maps(
                &instance.graph,
                m.clone(),
                |n| {
                    instance
                        .graph
                        .vertex(&value_id("v", &data.window_values(lam, &m, &zero, n)))
                },
                |n, colour| {
                    let (small, prefix) = if colour.index() == 0 {
                        (&e1, "h")
                    } else {
                        (&e2, "u")
                    };
                    instance
                        .graph
                        .edge(&value_id(prefix, &data.window_values(lam, &m, small, n)))
                },
            )?;
            if !cube.is_compatible(kg.collection()) {
                return Err(Error::CheckFailed {
                    check: "prw".into(),
                    detail: format!("mu_lambda not C-compatible at degree {m}"),
                });
            }
            if !images.insert(cube) {
                return Err(Error::CheckFailed {
                    check: "prw".into(),
                    detail: format!("lambda -> mu_lambda not injective at degree {m}"),
                });
            }
        }
        let all: BTreeSet<_> = kg.paths_of_degree(None, &m)?.into_iter().collect();
        if images != all {
            return Err(Error::CheckFailed {
                check: "prw".into(),
                detail: format!(
                    "lambda -> mu_lambda not surjective at degree {m}: {} functions vs {} morphisms",
                    images.len(),
                    all.len()
                ),
            });
        }
        bijectivity.push((m, all.len()));
    }

    drop(kg);
    Ok(PrwOutcome {
        instance,
        bijectivity,
    })
}

/// Seeded random instances.
///
/// k = 2: random blue/red edge-count matrices are resampled until the two
/// products agree (so the mixed 2-path classes can be matched), then every
/// class gets a uniformly random pairing. Completeness is forced and
/// associativity is vacuous.
///
/// k = 3: a random product of three 1-graphs, which is associative by
/// construction.
pub fn random_instance(k: usize, max_vertices: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match k {
        2 => random_2graph(&mut rng, max_vertices, seed),
        3 => {
            let factors: Vec<ColouredGraph> = (0..3)
                .map(|slot| random_1graph(&mut rng, max_vertices, slot))
                .collect();
            let refs: Vec<&ColouredGraph> = factors.iter().collect();
            let mut inst = product_of_1graphs(&refs)?;
            inst.name = format!("random_k3_seed{seed}");
            inst = inst.with_provenance("generator:random", Some(seed));
            Ok(inst)
        }
        _ => Err(Error::Precondition(format!(
            "random instances support k in {{2, 3}}, got {k}"
        ))),
    }
}

fn random_1graph(rng: &mut ChaCha8Rng, max_vertices: usize, slot: usize) -> ColouredGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut b = ColouredGraph::builder(1);
    for v in 0..n {
        b = b.vertex(format!("s{slot}v{v}"));
    }
    let mut count = 0usize;
    for v in 0..n {
        // at least one incoming edge per vertex keeps the product source-free
        let edges = rng.gen_range(1..=2);
        for _ in 0..edges {
            let src = rng.gen_range(0..n);
            b = b.edge(format!("s{slot}e{count}"), format!("s{slot}v{v}"), format!("s{slot}v{src}"), 1);
            count += 1;
        }
    }
    b.build().expect("random 1-graph is well formed")
}

fn random_2graph(rng: &mut ChaCha8Rng, max_vertices: usize, seed: u64) -> Result<Instance> {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Vec<u32>> {
        loop {
            let m: Vec<Vec<u32>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect())
                .collect();
            if m.iter().all(|row| row.iter().sum::<u32>() >= 1) {
                return m;
            }
        }
    };
    let mat_mul = |a: &[Vec<u32>], b: &[Vec<u32>]| -> Vec<Vec<u32>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum())
                    .collect()
            })
            .collect()
    };
    let blue = sample(rng);
    let mut red = sample(rng);
    let mut attempts = 0;
    while mat_mul(&blue, &red) != mat_mul(&red, &blue) {
        attempts += 1;
        if attempts >= 200 {
            // parallel red copy always commutes
            red = blue.clone();
            break;
        }
        red = sample(rng);
    }

    let mut builder = ColouredGraph::builder(2);
    for v in 0..n {
        builder = builder.vertex(format!("v{v}"));
    }
    for (colour, prefix, matrix) in [(1, "b", &blue), (2, "r", &red)] {
        for (u, row) in matrix.iter().enumerate() {
            for (w, &count) in row.iter().enumerate() {
                for t in 0..count {
                    builder = builder.edge(
                        format!("{prefix}{u}_{w}_{t}"),
                        format!("v{u}"),
                        format!("v{w}"),
                        colour,
                    );
                }
            }
        }
    }
    let graph = builder.build()?;

    // uniformly random complete pairing per (range, source) class
    let mut squares = Vec::new();
    for u in graph.vertices() {
        for z in graph.vertices() {
            let mut blue_first = Vec::new();
            for &a in graph.in_edges(u, Colour::new(0)) {
                for &b in graph.in_edges(graph.source(a), Colour::new(1)) {
                    if graph.source(b) == z {
                        blue_first.push((a, b));
                    }
                }
            }
            let mut red_first = Vec::new();
            for &b2 in graph.in_edges(u, Colour::new(1)) {
                for &a2 in graph.in_edges(graph.source(b2), Colour::new(0)) {
                    if graph.source(a2) == z {
                        red_first.push((b2, a2));
                    }
                }
            }
            if blue_first.len() != red_first.len() {
                return Err(Error::GenerationBudget(format!(
                    "2-path classes at ({}, {}) have sizes {} vs {}",
                    graph.vertex_id(u),
                    graph.vertex_id(z),
                    blue_first.len(),
                    red_first.len()
                )));
            }
            red_first.shuffle(rng);
            for ((a, b), (b2, a2)) in blue_first.into_iter().zip(red_first) {
                squares.push(Square::new(&graph, Colour::new(0), Colour::new(1), a, b, b2, a2)?);
            }
        }
    }
    Ok(
        Instance::new(format!("random_k2_seed{seed}"), graph, squares)
            .with_provenance("generator:random", Some(seed)),
    )
}

/// The non-row-finite counterexample graph with the infinite blue families
/// truncated to `n` members: vertices v, w, p, q; red edges f: w -> v and
/// g: q -> p; blue families alpha_i: p -> v and beta_i: q -> w; squares
/// alpha_i . g ~ f . beta_i. Ships for inspection; no convergence claims are
/// made at any truncation.
pub fn counterexample_nonrowfinite(n: usize) -> Instance {
    let mut b = ColouredGraph::builder(2)
        .vertex("v")
        .vertex("w")
        .vertex("p")
        .vertex("q")
        .edge("f", "v", "w", 2)
        .edge("g", "p", "q", 2);
    for i in 1..=n {
        b = b.edge(format!("alpha{i}"), "v", "p", 1);
        b = b.edge(format!("beta{i}"), "w", "q", 1);
    }
    let graph = b.build().expect("counterexample graph is well formed");
    let f = graph.edge("f").unwrap();
    let g = graph.edge("g").unwrap();
    let squares = (1..=n)
        .map(|i| {
            let alpha = graph.edge(&format!("alpha{i}")).unwrap();
            let beta = graph.edge(&format!("beta{i}")).unwrap();
            Square::new(&graph, Colour::new(0), Colour::new(1), alpha, g, f, beta)
                .expect("counterexample square is well formed")
        })
        .collect();
    Instance::new(format!("counterexample_trunc{n}"), graph, squares)
        .with_provenance("generator:counterexample", None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(coords: &[u32]) -> Degree {
        Degree::from_coords(coords.to_vec())
    }

    #[test]
    fn omega_unit_square() {
        let inst = omega(&d(&[1, 1])).unwrap();
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.graph.edge_count(), 4);
        assert_eq!(inst.squares.len(), 1);
        assert!(inst.kgraph().is_ok());
    }

    #[test]
    fn omega_line_has_no_squares() {
        let inst = omega(&d(&[3])).unwrap();
        assert!(inst.squares.is_empty());
        assert!(inst.kgraph().is_ok());
    }

    #[test]
    fn omega_unit_cube() {
        let inst = omega(&d(&[1, 1, 1])).unwrap();
        assert_eq!(inst.graph.edge_count(), 12);
        // completeness forces one square per mixed 2-path class: 3 colour
        // pairs, each with 2 positions along the free axis
        assert_eq!(inst.squares.len(), 6);
        assert!(inst.kgraph().is_ok(), "grid collection validates");
    }

    #[test]
    fn product_of_two_loops_is_torus_shaped() {
        let l1 = loops_1graph("f", 1);
        let l2 = loops_1graph("g", 1);
        let inst = product_of_1graphs(&[&l1, &l2]).unwrap();
        assert_eq!(inst.graph.vertex_count(), 1);
        assert_eq!(inst.graph.edge_count(), 2);
        assert_eq!(inst.squares.len(), 1);
    }

    #[test]
    fn product_loop_by_cycle_counts() {
        let l = loops_1graph("f", 1);
        let c = cycle_1graph(3);
        let inst = product_of_1graphs(&[&l, &c]).unwrap();
        assert_eq!(inst.graph.vertex_count(), 3);
        assert_eq!(inst.graph.edge_count(), 6);
        assert_eq!(inst.squares.len(), 3);
        assert!(inst.kgraph().is_ok());
    }

    #[test]
    fn prw_example_vertex_count() {
        // T = {0, e1, e2}, q = 2, t = 0, w = 1: solutions of x+y+z = 0 over Z/2
        let mut weights = BTreeMap::new();
        for p in [(0, 0), (1, 0), (0, 1)] {
            weights.insert(p, 1);
        }
        let data = BasicData::new([(0, 0), (1, 0), (0, 1)], 2, 0, weights).unwrap();
        let out = prw_2graph(&data, &d(&[1, 1])).unwrap();
        assert_eq!(out.instance.graph.vertex_count(), 4);
        assert!(out.instance.kgraph().is_ok());
    }

    #[test]
    fn prw_degenerate_modulus_one() {
        let mut weights = BTreeMap::new();
        for p in [(0, 0), (1, 0), (0, 1)] {
            weights.insert(p, 1);
        }
        let data = BasicData::new([(0, 0), (1, 0), (0, 1)], 1, 0, weights).unwrap();
        let out = prw_2graph(&data, &d(&[1, 1])).unwrap();
        assert_eq!(out.instance.graph.vertex_count(), 1);
        assert_eq!(out.instance.graph.edge_count(), 2);
    }

    #[test]
    fn random_k2_is_deterministic_and_complete() {
        let a = random_instance(2, 2, 7).unwrap();
        let b = random_instance(2, 2, 7).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.squares, b.squares);
        let collection = a.collection().unwrap();
        assert!(collection.check_complete().complete);
    }

    #[test]
    fn random_k3_is_associative() {
        for seed in 0..3 {
            let inst = random_instance(3, 2, seed).unwrap();
            assert!(inst.kgraph().is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn counterexample_is_complete_but_has_sources() {
        let inst = counterexample_nonrowfinite(3);
        let kg = inst.kgraph().unwrap();
        let report = kg.is_row_finite_no_sources();
        assert!(!report.row_finite_no_sources);
        // q receives nothing; w lacks red; p lacks blue
        let mut missing: Vec<(String, usize)> = report
            .violations
            .iter()
            .map(|v| (v.vertex.clone(), v.colour))
            .collect();
        missing.sort();
        assert_eq!(
            missing,
            vec![
                ("p".to_string(), 1),
                ("q".to_string(), 1),
                ("q".to_string(), 2),
                ("w".to_string(), 2),
            ]
        );
    }
}
