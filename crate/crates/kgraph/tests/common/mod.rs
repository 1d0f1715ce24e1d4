#![allow(dead_code)] // each integration test binary uses a subset
//! Shared corpus and oracles for the integration suites.
//!
//! The flip-reachability oracle here is deliberately independent of the
//! normalization path: it partitions edge words by breadth-first search over
//! single adjacent square flips, the generating relation of the path
//! equivalence, and never consults cube morphisms.

use std::collections::BTreeMap;

use kgraph::generators;
use kgraph::{ColouredPath, Degree, Instance, SquareCollection};

pub fn d(coords: &[u32]) -> Degree {
    Degree::from_coords(coords.to_vec())
}

/// The acceptance corpus: torus, two grids, a product, 25 seeded random
/// rank-2 instances, and 5 seeded rank-3 product instances.
pub fn corpus() -> Vec<Instance> {
    let mut out = vec![
        generators::torus(),
        generators::omega(&d(&[2, 2])).expect("omega builds"),
        generators::omega(&d(&[1, 1, 1])).expect("omega builds"),
        loop_times_cycle3(),
    ];
    for seed in 0..25 {
        out.push(generators::random_instance(2, 2, seed).expect("random k=2 builds"));
    }
    for seed in 100..105 {
        out.push(generators::random_instance(3, 2, seed).expect("random k=3 builds"));
    }
    out
}

pub fn loop_times_cycle3() -> Instance {
    let l = generators::loops_1graph("f", 1);
    let c = generators::cycle_1graph(3);
    generators::product_of_1graphs(&[&l, &c]).expect("product builds")
}

/// The five aperiodic instances used for the separating-path criterion,
/// paired with the separation degree l.
pub fn aperiodic_instances() -> Vec<(Instance, Degree)> {
    let two = generators::loops_1graph("a", 2);
    let three = generators::loops_1graph("b", 3);
    let mk2 = |x: &kgraph::ColouredGraph, y: &kgraph::ColouredGraph| {
        generators::product_of_1graphs(&[x, y]).expect("product builds")
    };
    let k3 = {
        let a = generators::loops_1graph("a", 2);
        let b = generators::loops_1graph("b", 2);
        let c = generators::loops_1graph("c", 2);
        generators::product_of_1graphs(&[&a, &b, &c]).expect("product builds")
    };
    vec![
        (mk2(&two, &two), d(&[1, 1])),
        (mk2(&three, &two), d(&[1, 1])),
        (mk2(&two, &three), d(&[1, 1])),
        (mk2(&three, &three), d(&[1, 1])),
        (k3, d(&[1, 1, 1])),
    ]
}

/// Partitions `paths` into flip-reachability classes (BFS over adjacent
/// square flips). Returns one class id per path. Panics with "oracle
/// overflow" when a class exceeds the cap, distinct from any equivalence
/// verdict.
pub fn flip_partition<'g>(
    collection: &SquareCollection<'g>,
    paths: &[ColouredPath<'g>],
) -> Vec<usize> {
    const CLASS_CAP: usize = 10_000;
    let graph = collection.graph();
    let index: BTreeMap<&ColouredPath<'g>, usize> =
        paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut class = vec![usize::MAX; paths.len()];
    let mut next_class = 0usize;
    for start in 0..paths.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = next_class;
        next_class += 1;
        class[start] = id;
        let mut queue = vec![start];
        let mut size = 1usize;
        while let Some(cur) = queue.pop() {
            let path = &paths[cur];
            for j in 0..path.len().saturating_sub(1) {
                let (e1, e2) = (path.edge(j), path.edge(j + 1));
                if graph.colour(e1) == graph.colour(e2) {
                    continue;
                }
                let (y1, y2) = collection
                    .flip_pair(e1, e2)
                    .expect("corpus collections are complete");
                let mut edges = path.edges().to_vec();
                edges[j] = y1;
                edges[j + 1] = y2;
                let flipped =
                    ColouredPath::new(graph, edges).expect("flips preserve composability");
                let &neighbour = index
                    .get(&flipped)
                    .expect("flip of an enumerated path is enumerated");
                if class[neighbour] == usize::MAX {
                    class[neighbour] = id;
                    size += 1;
                    assert!(size <= CLASS_CAP, "oracle overflow");
                    queue.push(neighbour);
                } else {
                    assert_eq!(class[neighbour], id, "flip classes must be consistent");
                }
            }
        }
    }
    class
}
