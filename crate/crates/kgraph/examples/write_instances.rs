//! Writes the bundled example instances into instances/ at the repo root.
//!
//!     cargo run -p kgraph --example write_instances [out_dir]

use std::collections::BTreeMap;
use std::path::PathBuf;

use kgraph::generators::{self, BasicData};
use kgraph::{ColouredGraph, Colour, Degree, Instance, Square};

fn disjoint_tori() -> Instance {
    let graph = ColouredGraph::builder(2)
        .vertex("x")
        .vertex("y")
        .edge("fx", "x", "x", 1)
        .edge("gx", "x", "x", 2)
        .edge("fy", "y", "y", 1)
        .edge("gy", "y", "y", 2)
        .build()
        .expect("disjoint tori build");
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
    let squares = vec![mk("fx", "gx"), mk("fy", "gy")];
    Instance::new("disjoint_tori", graph, squares).with_provenance("bundled", None)
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| "instances".into());
    std::fs::create_dir_all(&out).expect("create output dir");

    let d = |coords: &[u32]| Degree::from_coords(coords.to_vec());
    let mut instances = vec![
        generators::torus(),
        generators::omega(&d(&[2, 2])).unwrap(),
        generators::omega(&d(&[1, 1, 1])).unwrap(),
        disjoint_tori(),
        // the non-row-finite counterexample with the infinite blue families
        // truncated to three members; bundled for inspection only, no
        // convergence behaviour is claimed at any truncation
        generators::counterexample_nonrowfinite(3),
    ];
    {
        let l = generators::loops_1graph("f", 1);
        let c = generators::cycle_1graph(3);
        instances.push(generators::product_of_1graphs(&[&l, &c]).unwrap());
    }
    {
        let a = generators::loops_1graph("a", 2);
        let b = generators::loops_1graph("b", 2);
        let mut free = generators::product_of_1graphs(&[&a, &b]).unwrap();
        free.name = "free_2x2".into();
        instances.push(free);
    }
    {
        let weights: BTreeMap<(u32, u32), u32> =
            [(0, 0), (1, 0), (0, 1)].into_iter().map(|p| (p, 1)).collect();
        let data = BasicData::new([(0, 0), (1, 0), (0, 1)], 2, 0, weights).unwrap();
        instances.push(generators::prw_2graph(&data, &d(&[1, 1])).unwrap().instance);
    }
    instances.push(generators::random_instance(2, 2, 1).unwrap());
    instances.push(generators::random_instance(3, 2, 100).unwrap());

    for instance in &instances {
        let stem: String = instance
            .name
            .chars()
            .map(|c| match c {
                '(' | ')' => '\0',
                ',' => 'x',
                other => other,
            })
            .filter(|&c| c != '\0')
            .collect();
        let path = out.join(format!("{stem}.json"));
        instance.save(&path).expect("instance writes");
        println!("wrote {}", path.display());
    }
}
