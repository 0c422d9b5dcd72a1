//! Which basis states the potential connects, and the excitation number it
//! conserves.

use cqed_entangle::model::{build_potential, transition_graph, BasisIndex, ModelParams};

fn main() {
    let params = ModelParams {
        n_max: 3,
        ..ModelParams::default()
    };
    let graph = transition_graph(params.n_max);
    println!(
        "{} couplings for n_max = {}",
        graph.edge_count(),
        params.n_max
    );
    for n in 0..=params.n_max {
        for (s1, s2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let a = BasisIndex::new(s1, s2, n);
            let targets: Vec<String> = graph
                .neighbors(a)
                .iter()
                .map(|b| format!("|{}{},{}>", b.s1, b.s2, b.n))
                .collect();
            println!(
                "|{s1}{s2},{n}>  N = {:>2}  ->  {}",
                a.excitation_number(),
                targets.join(" ")
            );
        }
    }

    let v = build_potential(&params, 0.3);
    let mut max_leak: f64 = 0.0;
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            let (a, b) = (
                BasisIndex::from_linear(i, params.n_max),
                BasisIndex::from_linear(j, params.n_max),
            );
            if a.excitation_number() != b.excitation_number() {
                max_leak = max_leak.max(v[(i, j)].norm());
            }
        }
    }
    println!("\nlargest element between different excitation numbers: {max_leak:e}");
}
