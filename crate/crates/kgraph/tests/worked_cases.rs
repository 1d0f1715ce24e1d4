//! Worked cases with independently computed expected values.

mod common;

use std::collections::BTreeSet;

use common::{d, flip_partition};
use kgraph::dynamics;
use kgraph::generators;
use kgraph::{Colour, ColouredGraph, ColouredPath, Degree, KGraph, Square};

/// Single vertex, blue loops f1 f2, red loop g, squares pairing f_a g with
/// g f_a. |v Lambda^(2,1)| = 4: blue words f_a f_b move freely past the g.
/// The flip-reachability oracle over all shape-(2,1) words gives the same
/// class count.
#[test]
fn hom_set_count_two_blue_one_red() {
    let graph = ColouredGraph::builder(2)
        .vertex("v")
        .edge("f1", "v", "v", 1)
        .edge("f2", "v", "v", 1)
        .edge("g", "v", "v", 2)
        .build()
        .unwrap();
    let g_edge = graph.edge("g").unwrap();
    let squares = ["f1", "f2"]
        .iter()
        .map(|f| {
            let f = graph.edge(f).unwrap();
            Square::new(&graph, Colour::new(0), Colour::new(1), f, g_edge, g_edge, f).unwrap()
        })
        .collect();
    let kg = KGraph::new(&graph, squares).unwrap();
    let v = graph.vertex("v").unwrap();
    let cubes = kg.paths_of_degree(Some(v), &d(&[2, 1])).unwrap();
    assert_eq!(cubes.len(), 4);

    // oracle: all length-3 words of shape (2,1), partitioned by flips
    let paths: Vec<ColouredPath> = kg
        .all_paths_up_to(3)
        .into_iter()
        .filter(|p| p.shape() == d(&[2, 1]))
        .collect();
    assert_eq!(paths.len(), 12); // 3 positions for g, 4 blue words
    let classes: BTreeSet<usize> = flip_partition(kg.collection(), &paths).into_iter().collect();
    assert_eq!(classes.len(), 4);
}

/// Every cube of degree <= (2,2) arises as the final member of some prefix
/// family: surjectivity of the extension map at truncation level.
#[test]
fn prefix_families_cover_all_small_cubes() {
    let instance = generators::random_instance(2, 2, 17).unwrap();
    let kg = instance.kgraph().unwrap();
    for m in kgraph::box_points(&Degree::zero(2), &d(&[2, 2])) {
        for cube in kg.paths_of_degree(None, &m).unwrap() {
            let word = cube.canonical_traversal();
            let family = kg.extend_pi(&word).unwrap();
            assert_eq!(family.last().unwrap(), &cube);
            // coherence along the family
            for i in 0..family.len() - 1 {
                let restricted = family[i + 1]
                    .restrict(&Degree::zero(2), family[i].degree())
                    .unwrap();
                assert_eq!(restricted, family[i]);
            }
        }
    }
}

/// Depth-0 rays are the vertex itself; deeper rays stay outside R(v).
#[test]
fn noncofinal_ray_depths() {
    let graph = ColouredGraph::builder(2)
        .vertex("x")
        .vertex("y")
        .edge("fx", "x", "x", 1)
        .edge("gx", "x", "x", 2)
        .edge("fy", "y", "y", 1)
        .edge("gy", "y", "y", 2)
        .build()
        .unwrap();
    let mk = |a: &str, b: &str| {
        Square::new(
            &graph,
            Colour::new(0),
            Colour::new(1),
            graph.edge(a).unwrap(),
            graph.edge(b).unwrap(),
            graph.edge(b).unwrap(),
            graph.edge(a).unwrap(),
        )
        .unwrap()
    };
    let kg = KGraph::new(&graph, vec![mk("fx", "gx"), mk("fy", "gy")]).unwrap();
    let x = graph.vertex("x").unwrap();
    let y = graph.vertex("y").unwrap();

    let ray0 = dynamics::noncofinal_ray(&kg, x, y, 0).unwrap();
    assert_eq!(ray0.colour_counts(), &Degree::zero(2));
    assert_eq!(ray0.path().range(), y);
    assert_eq!(ray0.path().source(), y);

    let ray3 = dynamics::noncofinal_ray(&kg, x, y, 3).unwrap();
    assert_eq!(ray3.colour_counts(), &d(&[3, 3]));
    // all visited vertices live in y's component, outside R(x)
    let rx = graph.downstream_closure(x);
    assert!(!rx.contains(&ray3.path().source()));
}

/// The torus aperiodicity failure is the pair (e_1, e_2): singleton hom-sets
/// force every segment equality.
#[test]
fn torus_periodicity_pair() {
    let instance = generators::torus();
    let kg = instance.kgraph().unwrap();
    let verdict = dynamics::check_aperiodic(&kg, &d(&[1, 1]), &d(&[3, 3])).unwrap();
    let Some(kgraph::AnalysisWitness::Periodicity(w)) = &verdict.witness else {
        panic!("expected a periodicity witness");
    };
    // first failing pair in lex order is (0,0) vs (0,1)
    assert_eq!(w.m, d(&[0, 0]));
    assert_eq!(w.n, d(&[0, 1]));
    assert!(w.verify(&kg).unwrap());
    // every v Lambda^m on the torus is a singleton
    for m in kgraph::box_points(&Degree::zero(2), &d(&[2, 2])) {
        let v = instance.graph.vertex("v").unwrap();
        assert_eq!(kg.paths_of_degree(Some(v), &m).unwrap().len(), 1);
    }
}

/// Cofinality on a strongly connected 1-graph holds: reachability covers all
/// vertices.
#[test]
fn cycle_cofinality() {
    let cycle = generators::cycle_1graph(3);
    let kg = KGraph::new(&cycle, vec![]).unwrap();
    let verdict = dynamics::check_cofinal(&kg, &d(&[3])).unwrap();
    assert_eq!(verdict.status, kgraph::Status::Holds);
}

/// Omega grids have singleton hom-sets: |v Lambda^n| = 1 whenever n fits.
#[test]
fn omega_grid_uniqueness() {
    let instance = generators::omega(&d(&[2, 2])).unwrap();
    let kg = instance.kgraph().unwrap();
    for p in kgraph::box_points(&Degree::zero(2), &d(&[2, 2])) {
        let v = instance.graph.vertex(&p.to_string()).unwrap();
        for n in kgraph::box_points(&Degree::zero(2), &d(&[2, 2])) {
            let count = kg.paths_of_degree(Some(v), &n).unwrap().len();
            let fits = p.plus(&n).le(&d(&[2, 2]));
            assert_eq!(count, usize::from(fits), "at {p} degree {n}");
        }
    }
}

/// Product path counts multiply: |v Lambda^m| is the product of per-factor
/// path counts.
#[test]
fn product_path_counts_multiply() {
    let l = generators::loops_1graph("f", 2);
    let c = generators::cycle_1graph(3);
    let inst = generators::product_of_1graphs(&[&l, &c]).unwrap();
    let kg = inst.kgraph().unwrap();
    // factor 1: 2 loops -> 2^{m_1} words; factor 2: cycle -> exactly 1 path
    for v in inst.graph.vertices() {
        for m in kgraph::box_points(&Degree::zero(2), &d(&[2, 2])) {
            let count = kg.paths_of_degree(Some(v), &m).unwrap().len();
            assert_eq!(count, 2usize.pow(m.get(0)), "degree {m}");
        }
    }
}

/// A single blue loop with k = 2 has no incoming red edge: the violation
/// names the vertex and the missing colour.
#[test]
fn lone_blue_loop_has_a_red_source() {
    let graph = ColouredGraph::builder(2)
        .vertex("v")
        .edge("f", "v", "v", 1)
        .build()
        .unwrap();
    let kg = KGraph::new(&graph, vec![]).unwrap();
    let report = kg.is_row_finite_no_sources();
    assert!(!report.row_finite_no_sources);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].vertex, "v");
    assert_eq!(report.violations[0].colour, 2);
}

/// Skeleton-level reachability equals path-level reachability: R(v) from the
/// closure matches the sources of enumerated morphisms into v.
#[test]
fn reachability_matches_path_oracle() {
    for seed in [2u64, 6, 11] {
        let instance = generators::random_instance(2, 2, seed).unwrap();
        let kg = instance.kgraph().unwrap();
        let g = &instance.graph;
        let bound = (g.vertex_count() * g.k()) as u32;
        for v in g.vertices() {
            let closure = g.downstream_closure(v);
            let mut from_paths = BTreeSet::new();
            for m in kgraph::box_points(&Degree::zero(2), &d(&[bound, bound])) {
                if m.total() > bound {
                    continue;
                }
                for cube in kg.paths_of_degree(Some(v), &m).unwrap() {
                    from_paths.insert(cube.source());
                }
            }
            assert_eq!(closure, from_paths, "seed {seed}");
        }
    }
}

/// The tricolour fill is traversed by all six rearrangements of f g h
/// obtained from the square flips, matching the cube picture: fgh, f h1 g1,
/// h2 f1 g1, h2 g2 f2 (lower route), and g1' f1' h, g1' h1' f2' (upper route).
#[test]
fn tricolour_fill_six_traversals() {
    // run on the unit-cube grid and on a rank-3 product
    let instances = vec![
        generators::omega(&d(&[1, 1, 1])).unwrap(),
        generators::random_instance(3, 2, 104).unwrap(),
    ];
    for instance in instances {
        let kg = instance.kgraph().unwrap();
        let g = &instance.graph;
        let c = kg.collection();
        // all composable tri-coloured triples
        for f in g.edges() {
            for ge in g.edges() {
                if g.source(f) != g.range(ge) || g.colour(ge) == g.colour(f) {
                    continue;
                }
                for h in g.edges() {
                    if g.source(ge) != g.range(h)
                        || g.colour(h) == g.colour(f)
                        || g.colour(h) == g.colour(ge)
                    {
                        continue;
                    }
                    let cube = c.tricolour_fill(f, ge, h).unwrap();
                    assert_eq!(cube, c.normalize(
                        &ColouredPath::new(g, vec![f, ge, h]).unwrap()).unwrap());
                    let (g1, f1) = c.flip_pair(f, ge).unwrap();
                    let (h1u, f2u) = c.flip_pair(f1, h).unwrap();
                    let (h1d, g1d) = c.flip_pair(ge, h).unwrap();
                    let (h2d, f1d) = c.flip_pair(f, h1d).unwrap();
                    let (g2d, f2d) = c.flip_pair(f1d, g1d).unwrap();
                    let routes = [
                        vec![f, ge, h],
                        vec![f, h1d, g1d],
                        vec![h2d, f1d, g1d],
                        vec![h2d, g2d, f2d],
                        vec![g1, f1, h],
                        vec![g1, h1u, f2u],
                    ];
                    for edges in routes {
                        let path = ColouredPath::new(g, edges).unwrap();
                        assert!(cube.traverses(&path), "{}", instance.name);
                    }
                }
            }
        }
    }
}

/// Staircase words come out in lexicographic colour order, a golden contract.
#[test]
fn traversal_order_is_lexicographic() {
    let instance = generators::omega(&d(&[1, 1, 1])).unwrap();
    let kg = instance.kgraph().unwrap();
    let v = instance.graph.vertex("(0,0,0)").unwrap();
    let cube = &kg.paths_of_degree(Some(v), &d(&[1, 1, 1])).unwrap()[0];
    let orders: Vec<Vec<usize>> = cube
        .enumerate_traversals()
        .iter()
        .map(|p| {
            p.colour_word()
                .letters()
                .iter()
                .map(|c| c.one_based())
                .collect()
        })
        .collect();
    assert_eq!(
        orders,
        vec![
            vec![1, 2, 3],
            vec![1, 3, 2],
            vec![2, 1, 3],
            vec![2, 3, 1],
            vec![3, 1, 2],
            vec![3, 2, 1],
        ]
    );
}

/// Enumeration output is sorted by the canonical cube encoding, so repeated
/// runs agree element-for-element.
#[test]
fn enumeration_output_is_sorted_and_stable() {
    let instance = generators::random_instance(2, 2, 21).unwrap();
    let kg = instance.kgraph().unwrap();
    let first = kg.paths_of_degree(None, &d(&[2, 1])).unwrap();
    let second = kg.paths_of_degree(None, &d(&[2, 1])).unwrap();
    assert_eq!(first, second);
    let mut sorted = first.clone();
    sorted.sort();
    assert_eq!(first, sorted);
}

/// Error paths named by the contracts: non-mixed flips, bad restriction
/// intervals, colour clashes, source/range mismatches, and dynamics
/// preconditions.
#[test]
fn error_paths_are_typed() {
    use kgraph::Error;

    let torus = generators::torus();
    let kg = torus.kgraph().unwrap();
    let g = &torus.graph;
    let f = g.edge("f").unwrap();
    let g_edge = g.edge("g").unwrap();

    // flip needs mixed colours
    let ff = ColouredPath::new(g, vec![f, f]).unwrap();
    assert!(matches!(
        kg.collection().flip(&ff),
        Err(Error::NotMixedColour { .. })
    ));

    // restriction interval must be ordered and inside the degree
    let cube = kg
        .collection()
        .normalize(&ColouredPath::new(g, vec![f, g_edge]).unwrap())
        .unwrap();
    assert!(matches!(
        cube.restrict(&d(&[1, 1]), &d(&[0, 0])),
        Err(Error::DegreeNotBelow { .. })
    ));
    assert!(matches!(
        cube.restrict(&d(&[0, 0]), &d(&[2, 2])),
        Err(Error::DegreeNotBelow { .. })
    ));
    assert!(matches!(
        cube.factorise(&d(&[2, 0])),
        Err(Error::DegreeNotBelow { .. })
    ));

    // tricolour fill needs three distinct colours
    assert!(matches!(
        kg.collection().tricolour_fill(f, g_edge, f),
        Err(Error::ColoursNotDistinct)
    ));

    // composition needs matching endpoints: two cubes over disjoint parts
    let two = ColouredGraph::builder(2)
        .vertex("a")
        .vertex("b")
        .edge("fa", "a", "a", 1)
        .edge("ga", "a", "a", 2)
        .edge("fb", "b", "b", 1)
        .edge("gb", "b", "b", 2)
        .build()
        .unwrap();
    let mk = |x: &str, y: &str| {
        Square::new(
            &two,
            Colour::new(0),
            Colour::new(1),
            two.edge(x).unwrap(),
            two.edge(y).unwrap(),
            two.edge(y).unwrap(),
            two.edge(x).unwrap(),
        )
        .unwrap()
    };
    let kg2 = KGraph::new(&two, vec![mk("fa", "ga"), mk("fb", "gb")]).unwrap();
    let ca = kgraph::CubeMorphism::edge_morphism(&two, two.edge("fa").unwrap());
    let cb = kgraph::CubeMorphism::edge_morphism(&two, two.edge("fb").unwrap());
    assert!(matches!(
        kg2.collection().compose(&ca, &cb),
        Err(Error::ComposeMismatch { .. })
    ));

    // dynamics preconditions reject instances with sources
    let sourced = generators::counterexample_nonrowfinite(2);
    let skg = sourced.kgraph().unwrap();
    assert!(matches!(
        dynamics::check_aperiodic(&skg, &d(&[1, 1]), &d(&[2, 2])),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        dynamics::check_cofinal(&skg, &d(&[1, 1])),
        Err(Error::Precondition(_))
    ));
    let v = sourced.graph.vertex("v").unwrap();
    let mu = kgraph::CubeMorphism::identity_at(&sourced.graph, v);
    assert!(matches!(
        skg.cylinder_preimage_check(&mu, 2),
        Err(Error::Precondition(_))
    ));

    // squares referencing out-of-range edges are rejected, not panics
    let lone = ColouredGraph::builder(2)
        .vertex("v")
        .edge("f", "v", "v", 1)
        .edge("g", "v", "v", 2)
        .build()
        .unwrap();
    let foreign = kgraph::EdgeIx(99);
    assert!(matches!(
        Square::new(&lone, Colour::new(0), Colour::new(1), foreign, foreign, foreign, foreign),
        Err(Error::MalformedSquare { .. })
    ));
}

/// Witness chains lift across three colours: equivalent shape-(1,1,1) paths
/// in a rank-3 product are connected by verified flip chains.
#[test]
fn witness_chains_across_three_colours() {
    let a = generators::loops_1graph("a", 2);
    let b = generators::loops_1graph("b", 2);
    let c = generators::loops_1graph("c", 2);
    let inst = generators::product_of_1graphs(&[&a, &b, &c]).unwrap();
    let kg = inst.kgraph().unwrap();
    for cube in kg.paths_of_degree(None, &d(&[1, 1, 1])).unwrap() {
        let traversals = cube.enumerate_traversals();
        assert_eq!(traversals.len(), 6);
        let first = &traversals[0];
        for other in &traversals[1..] {
            assert!(kg.equivalent(first, other).unwrap());
            let chain = kg.witness_chain(first, other).unwrap();
            assert!(chain.verify(kg.collection()));
            assert_eq!(chain.start(), first);
            assert_eq!(chain.end(), other);
        }
    }
}

/// In the truncated two-component example, each pairing alpha_i g ~ f beta_i
/// is the defining square: both faces normalize to the same morphism, and
/// v Lambda^(1,1) has exactly one morphism per family member.
#[test]
fn truncated_counterexample_pairings() {
    let inst = generators::counterexample_nonrowfinite(3);
    let kg = inst.kgraph().unwrap();
    let g = &inst.graph;
    for i in 1..=3 {
        let upper = ColouredPath::from_edge_ids(g, &[&format!("alpha{i}"), "g"]).unwrap();
        let lower = ColouredPath::from_edge_ids(g, &["f", &format!("beta{i}")]).unwrap();
        assert!(kg.equivalent(&upper, &lower).unwrap());
    }
    let v = g.vertex("v").unwrap();
    assert_eq!(kg.paths_of_degree(Some(v), &d(&[1, 1])).unwrap().len(), 3);
}

/// Rank-1 instances degenerate correctly: no squares, equivalence is
/// equality, chains are trivial.
#[test]
fn rank_one_quotient_is_discrete() {
    let cycle = generators::cycle_1graph(4);
    let kg = KGraph::new(&cycle, vec![]).unwrap();
    let report = kg.quotient_structure_check(4, 10_000).unwrap();
    assert!(report.passed());
    assert_eq!(report.paths, report.classes);
    let paths = kg.all_paths_up_to(3);
    for p in paths.iter().filter(|p| !p.is_empty()).take(5) {
        let chain = kg.witness_chain(p, p).unwrap();
        assert_eq!(chain.steps(), 0);
    }
}

/// The seeded generator stays valid over a spread of sizes and seeds,
/// including the commuting-matrix fallback path.
#[test]
fn random_generator_is_robust() {
    for max_vertices in 1..=3 {
        for seed in 0..12 {
            let inst = generators::random_instance(2, max_vertices, seed).unwrap();
            let kg = inst.kgraph().unwrap_or_else(|e| {
                panic!("k=2 mv={max_vertices} seed={seed}: {e}")
            });
            assert!(kg.is_row_finite_no_sources().row_finite_no_sources);
        }
    }
    for seed in 0..6 {
        let inst = generators::random_instance(3, 2, seed).unwrap();
        let kg = inst.kgraph().unwrap();
        assert!(kg.is_row_finite_no_sources().row_finite_no_sources);
    }
}
