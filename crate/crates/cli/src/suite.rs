//! The built-in verification battery behind `paper-suite`.

use crate::scenario::{Family, Protocol, Scenario, Shape};

fn scenario(id: &str, family: Family, protocol: Protocol) -> Scenario {
    let mut s = Scenario::new(family);
    s.id = Some(id.to_string());
    s.protocol = Some(protocol);
    s
}

/// Scenarios covering every verified construction, in a fixed order.
pub fn paper_suite() -> Vec<Scenario> {
    let mut out = Vec::new();

    for n in 2..=5 {
        let mut s = scenario(&format!("bell-chain-n{n}"), Family::Ghz, Protocol::AppendixA);
        s.n = Some(n);
        out.push(s);
    }
    for (n, sizes) in [(3, vec![2, 1]), (4, vec![2, 2]), (4, vec![3, 1]), (5, vec![2, 2, 1])] {
        let tag: Vec<String> = sizes.iter().map(ToString::to_string).collect();
        let mut s = scenario(&format!("ghz-n{n}-s{}", tag.join(".")), Family::Ghz, Protocol::Partitioned);
        s.n = Some(n);
        s.party_sizes = Some(sizes);
        out.push(s);
    }
    for (name, n, shape) in [
        ("path3", 3, Shape::Path),
        ("triangle", 3, Shape::Complete),
        ("star4", 4, Shape::Star),
        ("cycle4", 4, Shape::Cycle),
    ] {
        let mut s = scenario(&format!("graph-{name}"), Family::Graph, Protocol::Decode);
        s.n = Some(n);
        s.shape = Some(shape);
        out.push(s);
    }
    for m in 1..=2 {
        let mut s = scenario(&format!("lattice-n2-m{m}"), Family::Lattice, Protocol::PartialTeleport);
        s.n = Some(2);
        s.m = Some(m);
        out.push(s);
    }
    let mut s = scenario("lattice-n2-computational", Family::Lattice, Protocol::Computational);
    s.n = Some(2);
    out.push(s);

    let mut s = scenario("ghz3-computational", Family::Ghz, Protocol::Computational);
    s.n = Some(3);
    out.push(s);
    let mut s = scenario("ghz3-sep-chain", Family::Bounds, Protocol::SepChain);
    s.n = Some(3);
    out.push(s);
    let mut s = scenario("lattice2-mes", Family::Bounds, Protocol::Mes);
    s.n = Some(2);
    out.push(s);

    out.push(scenario("example4", Family::Example4, Protocol::Locce));
    out.push(scenario("example4-no-resource", Family::Example4, Protocol::Computational));

    let lo = 0.5f64.sqrt();
    for (a, g) in [(lo, lo), (0.9, 0.8), (1.0, 1.0)] {
        for p in [Protocol::Computational, Protocol::Teleport] {
            let mut s = scenario(&format!("parametric-{a:.3}-{g:.3}-{}", p.name()), Family::Parametric, p);
            s.alpha = Some(a);
            s.gamma = Some(g);
            out.push(s);
        }
    }

    out.push(scenario("vidal-0.8", Family::Bounds, Protocol::Vidal));

    for (n, sizes) in [(3, vec![1, 1, 1]), (4, vec![2, 2]), (4, vec![1, 1, 1, 1])] {
        let mut s = scenario(&format!("entropy-n{n}-m{}", sizes.len()), Family::Bounds, Protocol::Entropy);
        s.n = Some(n);
        s.party_sizes = Some(sizes);
        out.push(s);
    }

    out.push(scenario("oneway-certificate", Family::Oneway, Protocol::Certificate));
    let mut s = scenario("oneway-maximal", Family::Oneway, Protocol::Search);
    s.restarts = Some(4);
    out.push(s);
    for k in [4, 8] {
        let mut s = scenario(&format!("oneway-skewed-k{k}"), Family::Oneway, Protocol::Search);
        s.lambdas = Some(vec![1.6, 0.4]);
        s.outcomes = Some(k);
        s.restarts = Some(50);
        out.push(s);
    }
    out
}
