//! Skeleton extraction and the two reconstruction isomorphisms: rho from the
//! presenting coloured graph onto the skeleton of its k-graph, and theta
//! between k-graphs presented over isomorphic skeletons.

use std::collections::{BTreeMap, BTreeSet};

use crate::category::KGraph;
use crate::cube::CubeMorphism;
use crate::degree::{box_points, Colour, Degree};
use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, EdgeIx};
use crate::instance::Instance;
use crate::iso::ColouredIsomorphism;
use crate::squares::Square;

/// The skeleton of a k-graph: one vertex `<v>` per object, one edge `<f>` per
/// degree-e_i morphism, and one square per degree-(e_i+e_j) morphism.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub graph: ColouredGraph,
    pub squares: Vec<Square>,
}

impl Skeleton {
    pub fn into_instance(self, name: impl Into<String>) -> Instance {
        Instance::new(name, self.graph, self.squares).with_provenance("skeleton", None)
    }
}

fn bracket(id: &str) -> String {
    format!("<{id}>")
}

/// Extracts the skeleton of Lambda_(E,C) by enumerating the degree-e_i and
/// degree-(e_i+e_j) morphisms. The result is validated complete and
/// associative before returning.
pub fn extract_skeleton(kg: &KGraph<'_>) -> Result<Skeleton> {
    let g = kg.graph();
    let k = kg.k();
    let mut builder = ColouredGraph::builder(k);
    for v in g.vertices() {
        builder = builder.vertex(bracket(g.vertex_id(v)));
    }
    let zero = Degree::zero(k);
    for c in 0..k {
        let colour = Colour::new(c);
        for cube in kg.paths_of_degree(None, &Degree::unit(k, colour))? {
            // a degree-e_i morphism is lambda_f for its unique edge f
            let f = cube.edge_at(&zero, colour);
            builder = builder.edge(
                bracket(g.edge_id(f)),
                bracket(g.vertex_id(cube.range())),
                bracket(g.vertex_id(cube.source())),
                c + 1,
            );
        }
    }
    let skeleton_graph = builder.build()?;

    let sk_edge = |f: EdgeIx| skeleton_graph.edge(&bracket(g.edge_id(f)));
    let mut squares = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (ci, cj) = (Colour::new(i), Colour::new(j));
            let degree = Degree::unit(k, ci).plus(&Degree::unit(k, cj));
            for lambda in kg.paths_of_degree(None, &degree)? {
                let ei = Degree::unit(k, ci);
                let ej = Degree::unit(k, cj);
                squares.push(Square::new(
                    &skeleton_graph,
                    ci,
                    cj,
                    sk_edge(lambda.edge_at(&zero, ci))?,
                    sk_edge(lambda.edge_at(&ei, cj))?,
                    sk_edge(lambda.edge_at(&zero, cj))?,
                    sk_edge(lambda.edge_at(&ej, ci))?,
                )?);
            }
        }
    }

    let skeleton = Skeleton {
        graph: skeleton_graph,
        squares,
    };
    let collection =
        crate::squares::SquareCollection::new(&skeleton.graph, skeleton.squares.clone())?;
    let completeness = collection.check_complete();
    if !completeness.complete {
        return Err(Error::CheckFailed {
            check: "skeleton completeness".into(),
            detail: format!("{} violations", completeness.violations.len()),
        });
    }
    let assoc = collection.check_associative(false)?;
    if !assoc.associative {
        return Err(Error::CheckFailed {
            check: "skeleton associativity".into(),
            detail: "cube condition violated in extracted skeleton".into(),
        });
    }
    Ok(skeleton)
}

/// Constructs rho : E -> E_Lambda explicitly (v -> <lambda_v>, f -> <lambda_f>)
/// and verifies it is a colour-preserving isomorphism carrying C into
/// C_Lambda. Returns (skeleton, rho). Failure indicates an implementation
/// bug, never an expected outcome.
pub fn verify_rho<'g>(kg: &KGraph<'g>) -> Result<(Skeleton, ColouredIsomorphism)> {
    let g = kg.graph();
    let skeleton = extract_skeleton(kg)?;
    let mut vertex_map = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        vertex_map.push(skeleton.graph.vertex(&bracket(g.vertex_id(v))).map_err(
            |_| Error::CheckFailed {
                check: "rho".into(),
                detail: format!("vertex {:?} missing from skeleton", g.vertex_id(v)),
            },
        )?);
    }
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        edge_map.push(
            skeleton
                .graph
                .edge(&bracket(g.edge_id(e)))
                .map_err(|_| Error::CheckFailed {
                    check: "rho".into(),
                    detail: format!("edge {:?} missing from skeleton", g.edge_id(e)),
                })?,
        );
    }
    let rho = ColouredIsomorphism {
        vertex_map,
        edge_map,
    };
    if !rho.verify(g, &skeleton.graph) {
        return Err(Error::CheckFailed {
            check: "rho".into(),
            detail: "rho is not a coloured-graph isomorphism".into(),
        });
    }
    // rho carries each square of C to a member of C_Lambda
    let skeleton_squares: BTreeSet<Square> = skeleton.squares.iter().copied().collect();
    for sq in kg.collection().squares() {
        let image = Square::new(
            &skeleton.graph,
            sq.i,
            sq.j,
            rho.map_edge(sq.a),
            rho.map_edge(sq.b),
            rho.map_edge(sq.b2),
            rho.map_edge(sq.a2),
        )?;
        if !skeleton_squares.contains(&image) {
            return Err(Error::CheckFailed {
                check: "rho".into(),
                detail: format!(
                    "square ({}, {}) maps outside the skeleton collection",
                    g.edge_id(sq.a),
                    g.edge_id(sq.b)
                ),
            });
        }
    }
    Ok((skeleton, rho))
}

/// The per-degree table of the isomorphism theta : Gamma -> Lambda_(E,C).
#[derive(Debug)]
pub struct ThetaTable<'a, 'b> {
    pub pairs: BTreeMap<Degree, Vec<(CubeMorphism<'a>, CubeMorphism<'b>)>>,
    pub functoriality_checks: usize,
}

/// Given a k-graph Gamma (presented over its own coloured graph), a target
/// pair (E, C) presented by `target`, and a square-preserving coloured-graph
/// isomorphism psi from Gamma's graph to E, builds theta_gamma = psi o gamma
/// for every gamma up to the degree bound and verifies bijectivity per degree
/// and functoriality on composable pairs within the bound.
pub fn build_theta<'a, 'b>(
    gamma: &KGraph<'a>,
    target: &KGraph<'b>,
    psi: &ColouredIsomorphism,
    degree_total_bound: u32,
) -> Result<ThetaTable<'a, 'b>> {
    if !psi.verify(gamma.graph(), target.graph()) {
        return Err(Error::Precondition(
            "psi is not a coloured-graph isomorphism".into(),
        ));
    }
    // square preservation: psi o phi in C for all phi in C_Gamma
    let target_squares: BTreeSet<Square> = target.collection().squares().iter().copied().collect();
    for sq in gamma.collection().squares() {
        let image = Square::new(
            target.graph(),
            sq.i,
            sq.j,
            psi.map_edge(sq.a),
            psi.map_edge(sq.b),
            psi.map_edge(sq.b2),
            psi.map_edge(sq.a2),
        )?;
        if !target_squares.contains(&image) {
            return Err(Error::Precondition(format!(
                "psi does not preserve the square ({}, {}) ~ ({}, {})",
                gamma.graph().edge_id(sq.a),
                gamma.graph().edge_id(sq.b),
                gamma.graph().edge_id(sq.b2),
                gamma.graph().edge_id(sq.a2),
            )));
        }
    }

    let apply = |cube: &CubeMorphism<'a>| -> Result<CubeMorphism<'b>> {
        CubeMorphism::from_maps(
            target.graph(),
            cube.degree().clone(),
            |n| Ok(psi.map_vertex(cube.vertex_at(n))),
            |n, c| Ok(psi.map_edge(cube.edge_at(n, c))),
        )
    };

    let gamma_by_degree = gamma.morphisms_by_degree(degree_total_bound)?;
    let mut pairs: BTreeMap<Degree, Vec<(CubeMorphism<'a>, CubeMorphism<'b>)>> = BTreeMap::new();
    for (m, cubes) in &gamma_by_degree {
        let target_set: BTreeSet<CubeMorphism<'b>> =
            target.paths_of_degree(None, m)?.into_iter().collect();
        let mut images = BTreeSet::new();
        let mut level = Vec::with_capacity(cubes.len());
        for cube in cubes {
            let theta = apply(cube)?;
            if theta.degree() != cube.degree()
                || theta.range() != psi.map_vertex(cube.range())
                || theta.source() != psi.map_vertex(cube.source())
            {
                return Err(Error::CheckFailed {
                    check: "theta".into(),
                    detail: format!("theta does not preserve d, r, s at degree {m}"),
                });
            }
            if !target_set.contains(&theta) {
                return Err(Error::CheckFailed {
                    check: "theta".into(),
                    detail: format!("theta image at degree {m} is not C-compatible in the target"),
                });
            }
            if !images.insert(theta.clone()) {
                return Err(Error::CheckFailed {
                    check: "theta".into(),
                    detail: format!("theta not injective at degree {m}"),
                });
            }
            level.push((cube.clone(), theta));
        }
        if images.len() != target_set.len() {
            return Err(Error::CheckFailed {
                check: "theta".into(),
                detail: format!(
                    "theta not surjective at degree {m}: {} of {} morphisms hit",
                    images.len(),
                    target_set.len()
                ),
            });
        }
        pairs.insert(m.clone(), level);
    }

    // functoriality on composable pairs within the bound
    let mut checks = 0usize;
    for (m1, level1) in &pairs {
        for (m2, level2) in &pairs {
            if m1.total() + m2.total() > degree_total_bound {
                continue;
            }
            for (gamma1, theta1) in level1 {
                for (gamma2, theta2) in level2 {
                    if gamma1.source() != gamma2.range() {
                        continue;
                    }
                    let composite = gamma.collection().compose(gamma1, gamma2)?;
                    let lhs = apply(&composite)?;
                    let rhs = target.collection().compose(theta1, theta2)?;
                    if lhs != rhs {
                        return Err(Error::CheckFailed {
                            check: "theta".into(),
                            detail: format!(
                                "theta not functorial on a pair of degrees {m1}, {m2}"
                            ),
                        });
                    }
                    checks += 1;
                }
            }
        }
    }

    Ok(ThetaTable {
        pairs,
        functoriality_checks: checks,
    })
}

/// Vertex and edge id renamings produced by `relabel_instance`.
pub type IdMaps = (BTreeMap<String, String>, BTreeMap<String, String>);

/// Relabels an instance's ids with a seeded random permutation-style renaming,
/// returning the new instance and the id maps. Useful for exercising theta on
/// genuinely distinct presentations of the same k-graph.
pub fn relabel_instance(instance: &Instance, seed: u64) -> Result<(Instance, IdMaps)> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let g = &instance.graph;

    let mut vertex_names: Vec<String> = (0..g.vertex_count()).map(|i| format!("V{i}")).collect();
    vertex_names.shuffle(&mut rng);
    let mut edge_names: Vec<String> = (0..g.edge_count()).map(|i| format!("E{i}")).collect();
    edge_names.shuffle(&mut rng);

    let vmap: BTreeMap<String, String> = g
        .vertices()
        .map(|v| (g.vertex_id(v).to_string(), vertex_names[v.index()].clone()))
        .collect();
    let emap: BTreeMap<String, String> = g
        .edges()
        .map(|e| (g.edge_id(e).to_string(), edge_names[e.index()].clone()))
        .collect();

    let mut builder = ColouredGraph::builder(g.k());
    for v in g.vertices() {
        builder = builder.vertex(vmap[g.vertex_id(v)].clone());
    }
    for e in g.edges() {
        builder = builder.edge(
            emap[g.edge_id(e)].clone(),
            vmap[g.vertex_id(g.range(e))].clone(),
            vmap[g.vertex_id(g.source(e))].clone(),
            g.colour(e).one_based(),
        );
    }
    let new_graph = builder.build()?;
    let new_squares = instance
        .squares
        .iter()
        .map(|sq| {
            let edge = |e: EdgeIx| new_graph.edge(&emap[g.edge_id(e)]);
            Square::new(
                &new_graph,
                sq.i,
                sq.j,
                edge(sq.a)?,
                edge(sq.b)?,
                edge(sq.b2)?,
                edge(sq.a2)?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let relabelled = Instance::new(format!("{}_relabelled", instance.name), new_graph, new_squares)
        .with_provenance("relabel", Some(seed));
    Ok((relabelled, (vmap, emap)))
}

/// Counts of the degree-(e_i + e_j) morphisms, summed over i < j; equals the
/// number of skeleton squares.
pub fn square_count_by_degree(kg: &KGraph<'_>) -> Result<usize> {
    let k = kg.k();
    let mut total = 0;
    for i in 0..k {
        for j in i + 1..k {
            let degree =
                Degree::unit(k, Colour::new(i)).plus(&Degree::unit(k, Colour::new(j)));
            total += kg.paths_of_degree(None, &degree)?.len();
        }
    }
    Ok(total)
}

/// True when extract_skeleton reproduces the presenting data's counts.
pub fn skeleton_counts_match(kg: &KGraph<'_>) -> Result<bool> {
    let skeleton = extract_skeleton(kg)?;
    Ok(
        skeleton.graph.vertex_count() == kg.graph().vertex_count()
            && skeleton.graph.edge_count() == kg.graph().edge_count()
            && skeleton.squares.len() == kg.collection().squares().len(),
    )
}

#[allow(dead_code)]
fn degrees_up_to(k: usize, total: u32) -> Vec<Degree> {
    box_points(&Degree::zero(k), &Degree::from_coords(vec![total; k]))
        .into_iter()
        .filter(|m| m.total() <= total)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn torus_skeleton_counts() {
        let inst = generators::torus();
        let kg = inst.kgraph().unwrap();
        let skeleton = extract_skeleton(&kg).unwrap();
        assert_eq!(skeleton.graph.vertex_count(), 1);
        assert_eq!(skeleton.graph.edge_count(), 2);
        assert_eq!(skeleton.squares.len(), 1);
    }

    #[test]
    fn omega_skeleton_isomorphic_to_grid() {
        let inst = generators::omega(&Degree::from_coords(vec![1, 1])).unwrap();
        let kg = inst.kgraph().unwrap();
        let skeleton = extract_skeleton(&kg).unwrap();
        let isos =
            crate::iso::find_coloured_isomorphisms(&inst.graph, &skeleton.graph, 1);
        assert!(!isos.is_empty());
    }

    #[test]
    fn rho_roundtrip_on_torus_and_grid() {
        for inst in [
            generators::torus(),
            generators::omega(&Degree::from_coords(vec![1, 1, 1])).unwrap(),
        ] {
            let kg = inst.kgraph().unwrap();
            let (_, rho) = verify_rho(&kg).unwrap();
            assert_eq!(rho.vertex_map.len(), inst.graph.vertex_count());
            assert!(skeleton_counts_match(&kg).unwrap());
        }
    }

    #[test]
    fn skeleton_square_count_matches_degree_count() {
        let inst = generators::random_instance(2, 2, 11).unwrap();
        let kg = inst.kgraph().unwrap();
        let skeleton = extract_skeleton(&kg).unwrap();
        assert_eq!(
            skeleton.squares.len(),
            square_count_by_degree(&kg).unwrap()
        );
    }

    #[test]
    fn theta_identity_on_torus() {
        let inst = generators::torus();
        let kg = inst.kgraph().unwrap();
        let psi = ColouredIsomorphism::identity(&inst.graph);
        let table = build_theta(&kg, &kg, &psi, 3).unwrap();
        for level in table.pairs.values() {
            for (gamma_cube, theta_cube) in level {
                assert_eq!(gamma_cube, theta_cube);
            }
        }
    }

    #[test]
    fn theta_tracks_relabelling() {
        let inst = generators::omega(&Degree::from_coords(vec![2, 2])).unwrap();
        let (relabelled, (vmap, emap)) = relabel_instance(&inst, 5).unwrap();
        let kg1 = inst.kgraph().unwrap();
        let kg2 = relabelled.kgraph().unwrap();
        let psi =
            ColouredIsomorphism::from_ids(&inst.graph, &relabelled.graph, &vmap, &emap).unwrap();
        let table = build_theta(&kg1, &kg2, &psi, 3).unwrap();
        // theta of a degree-e_i morphism is the relabelled edge morphism
        let e1 = Degree::from_coords(vec![1, 0]);
        for (gamma_cube, theta_cube) in &table.pairs[&e1] {
            let f = gamma_cube.edge_at(&Degree::zero(2), Colour::new(0));
            let mapped = theta_cube.edge_at(&Degree::zero(2), Colour::new(0));
            assert_eq!(
                relabelled.graph.edge_id(mapped),
                emap[inst.graph.edge_id(f)].as_str()
            );
        }
    }

    #[test]
    fn theta_rejects_non_square_preserving_psi() {
        // twisted pairing on a single vertex: a0.b0 ~ b1.a0, a0.b1 ~ b0.a0,
        // a1.bx ~ bx.a1; swapping the blue loops is a coloured-graph
        // automorphism that does not preserve the squares
        let graph = crate::graph::ColouredGraph::builder(2)
            .vertex("v")
            .edge("a0", "v", "v", 1)
            .edge("a1", "v", "v", 1)
            .edge("b0", "v", "v", 2)
            .edge("b1", "v", "v", 2)
            .build()
            .unwrap();
        let e = |id: &str| graph.edge(id).unwrap();
        let sq = |a: &str, b: &str, b2: &str, a2: &str| {
            Square::new(
                &graph,
                Colour::new(0),
                Colour::new(1),
                e(a),
                e(b),
                e(b2),
                e(a2),
            )
            .unwrap()
        };
        let squares = vec![
            sq("a0", "b0", "b1", "a0"),
            sq("a0", "b1", "b0", "a0"),
            sq("a1", "b0", "b0", "a1"),
            sq("a1", "b1", "b1", "a1"),
        ];
        let kg = crate::category::KGraph::new(&graph, squares).unwrap();
        let swap_blues = ColouredIsomorphism {
            vertex_map: vec![graph.vertex("v").unwrap()],
            edge_map: vec![e("a1"), e("a0"), e("b0"), e("b1")],
        };
        assert!(swap_blues.verify(&graph, &graph));
        match build_theta(&kg, &kg, &swap_blues, 2) {
            Err(Error::Precondition(msg)) => {
                assert!(msg.contains("does not preserve"), "{msg}");
            }
            other => panic!("expected precondition error, got {other:?}"),
        }
        // the identity, by contrast, is square-preserving
        let id = ColouredIsomorphism::identity(&graph);
        assert!(build_theta(&kg, &kg, &id, 2).is_ok());
    }
}
