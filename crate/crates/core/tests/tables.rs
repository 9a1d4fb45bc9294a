use kernelforge::fii::{
    build_representative_table, canonical_code, enumerate_levels, glue, signature, BoundariedGraph, PieceClass, Problem,
    RepresentativeTable,
};
use kernelforge::graph::Graph;
use kernelforge::oracles::{brute_longest_path, brute_vertex_cover};

/// No enumerated piece smaller than a stored representative shares its key.
fn check_minimal(table: &RepresentativeTable) {
    for b in 0..=table.t {
        for (k, level) in enumerate_levels(b, table.d, table.max_n - b, PieceClass::Pieces).iter().enumerate() {
            for code in level {
                let h = code.to_boundaried();
                let (key, _) = signature(table.problem, &h, table.d).unwrap();
                let e = table.lookup(b, &key).expect("every enumerated piece has an entry");
                assert!(e.representative.interior_size() <= k, "{:?}", canonical_code(&h));
            }
        }
    }
}

#[test]
fn representatives_are_minimal() {
    check_minimal(&build_representative_table(Problem::VertexCover, 2, 2, 6).unwrap());
    check_minimal(&build_representative_table(Problem::LongestPath, 2, 2, 6).unwrap());
}

#[test]
fn class_counts_grow_monotonically() {
    let table = build_representative_table(Problem::LongestPath, 2, 2, 7).unwrap();
    for counts in &table.class_counts {
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }
    let total: usize = table.class_counts.iter().map(|c| *c.last().unwrap()).sum();
    assert_eq!(total, table.len());
}

/// Two pieces with equal Vertex Cover keys differ by the offset difference in
/// every gluing.
#[test]
fn vc_keys_determine_glued_optimum() {
    let table = build_representative_table(Problem::VertexCover, 2, 2, 6).unwrap();
    let hosts: Vec<BoundariedGraph> = vec![
        BoundariedGraph::new(Graph::new(2), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap(), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(4, [(0, 2), (2, 3), (3, 1), (0, 1)]).unwrap(), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(4, [(0, 2), (0, 3), (1, 2)]).unwrap(), vec![0, 1]).unwrap(),
    ];
    for level in enumerate_levels(2, 2, 4, PieceClass::Pieces) {
        for code in level {
            let h = code.to_boundaried();
            let (key, off) = signature(Problem::VertexCover, &h, 2).unwrap();
            let e = table.lookup(2, &key).unwrap();
            for host in &hosts {
                let a = brute_vertex_cover(&glue(&h, host).unwrap()).unwrap() as i64;
                let b = brute_vertex_cover(&glue(&e.representative, host).unwrap()).unwrap() as i64;
                assert_eq!(a - off, b - e.delta_base);
            }
        }
    }
}

#[test]
fn lp_keys_determine_glued_optimum() {
    let table = build_representative_table(Problem::LongestPath, 2, 2, 6).unwrap();
    let hosts: Vec<BoundariedGraph> = vec![
        BoundariedGraph::new(Graph::new(2), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap(), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(5, [(0, 2), (2, 3), (3, 4), (1, 4)]).unwrap(), vec![0, 1]).unwrap(),
        BoundariedGraph::new(Graph::from_edges(4, [(0, 2), (2, 3), (0, 1)]).unwrap(), vec![0, 1]).unwrap(),
    ];
    for level in enumerate_levels(2, 2, 4, PieceClass::Pieces) {
        for code in level {
            let h = code.to_boundaried();
            let (key, _) = signature(Problem::LongestPath, &h, 2).unwrap();
            let e = table.lookup(2, &key).unwrap();
            for host in &hosts {
                assert_eq!(
                    brute_longest_path(&glue(&h, host).unwrap()).unwrap(),
                    brute_longest_path(&glue(&e.representative, host).unwrap()).unwrap()
                );
            }
        }
    }
}
