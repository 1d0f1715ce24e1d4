//! Brute-force search over complete square collections on the single-vertex
//! graph with two loops per colour (k = 3), looking for collections that fail
//! the cube condition. The search doubles as the oracle: completeness holds
//! for every pairing by construction, so any violation found is a genuine
//! non-associative complete collection, and the checker plus the normalizer
//! must both flag it.

use kgraph::{Colour, ColouredGraph, ColouredPath, Error, KGraph, Square, SquareCollection};

fn two_loops_per_colour_k3() -> ColouredGraph {
    let mut b = ColouredGraph::builder(3).vertex("v");
    for c in 1..=3 {
        for i in 0..2 {
            b = b.edge(format!("c{c}x{i}"), "v", "v", c);
        }
    }
    b.build().unwrap()
}

/// All bijections of {0,1,2,3}, as index arrays.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let mut items = [0usize, 1, 2, 3];
    heap_permute(&mut items, 4, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut [usize; 4], n: usize, out: &mut Vec<[usize; 4]>) {
    if n == 1 {
        out.push(*items);
        return;
    }
    for i in 0..n {
        heap_permute(items, n - 1, out);
        if n.is_multiple_of(2) {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
}

/// Builds the complete collection determined by one pairing permutation per
/// colour pair: for pair (i, j), the l-th i-first 2-path is matched with the
/// perm[l]-th j-first 2-path.
fn collection_for<'g>(
    g: &'g ColouredGraph,
    perms: [&[usize; 4]; 3],
) -> SquareCollection<'g> {
    let loops = |c: usize| -> Vec<kgraph::EdgeIx> {
        (0..2).map(|i| g.edge(&format!("c{}x{i}", c + 1)).unwrap()).collect()
    };
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut squares = Vec::new();
    for (pair_ix, &(i, j)) in pairs.iter().enumerate() {
        let (li, lj) = (loops(i), loops(j));
        // i-first faces (a, b) and j-first faces (b2, a2), indexed 0..4
        let i_first: Vec<(kgraph::EdgeIx, kgraph::EdgeIx)> = li
            .iter()
            .flat_map(|&a| lj.iter().map(move |&b| (a, b)))
            .collect();
        let j_first: Vec<(kgraph::EdgeIx, kgraph::EdgeIx)> = lj
            .iter()
            .flat_map(|&b2| li.iter().map(move |&a2| (b2, a2)))
            .collect();
        for (l, &(a, b)) in i_first.iter().enumerate() {
            let (b2, a2) = j_first[perms[pair_ix][l]];
            squares.push(
                Square::new(g, Colour::new(i), Colour::new(j), a, b, b2, a2).unwrap(),
            );
        }
    }
    SquareCollection::new(g, squares).unwrap()
}

#[test]
fn search_finds_nonassociative_complete_collections() {
    let g = two_loops_per_colour_k3();
    let perms = permutations4();
    let mut associative_found = 0usize;
    let mut nonassociative: Option<(SquareCollection<'_>, kgraph::squares::CubeViolation)> = None;

    'search: for p01 in &perms {
        for p02 in &perms {
            for p12 in &perms {
                let collection = collection_for(&g, [p01, p02, p12]);
                // every pairing is complete by construction; spot-check some
                let report = collection.check_associative(false).unwrap();
                if report.associative {
                    associative_found += 1;
                } else if nonassociative.is_none() {
                    nonassociative =
                        Some((collection, report.violations[0].clone()));
                    if associative_found > 0 {
                        break 'search;
                    }
                }
                if associative_found > 0 && nonassociative.is_some() {
                    break 'search;
                }
            }
        }
    }

    // the identity pairings (componentwise commutation) are associative
    assert!(associative_found > 0, "some pairing is associative");
    let (collection, violation) = nonassociative.expect("search finds a non-associative pairing");
    assert!(collection.check_complete().complete);

    // the witness is a genuine cube-condition failure: recompute both routes
    let f = collection.graph().edge(&violation.f).unwrap();
    let g_edge = collection.graph().edge(&violation.g).unwrap();
    let h = collection.graph().edge(&violation.h).unwrap();
    let (up, down) = collection.cube_routes(f, g_edge, h).unwrap();
    assert_ne!(up, down, "recomputed routes disagree");

    // the validated constructor rejects it
    let squares = collection.squares().to_vec();
    match KGraph::new(collection.graph(), squares) {
        Err(Error::NonAssociative { .. }) => {}
        other => panic!("expected NonAssociative, got {other:?}"),
    }

    // normalizing the witnessing tri-coloured path trips the runtime
    // consistency assertion with a witness
    let path = ColouredPath::new(collection.graph(), vec![f, g_edge, h]).unwrap();
    match collection.normalize(&path) {
        Err(Error::NonAssociative { f, g, h }) => {
            assert!(!f.is_empty() && !g.is_empty() && !h.is_empty());
        }
        Ok(_) => panic!("normalize must not silently accept a non-associative collection"),
        Err(other) => panic!("expected NonAssociative, got {other}"),
    }
}
