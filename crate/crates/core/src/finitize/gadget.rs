use crate::density::Probability;
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// Replaces every singleton edge `{x}` by a fresh triangle on
/// `x.a, x.b, x.c`, deleting `x` and every edge through it.
///
/// The result is a graph whose density at `p = 1/2` equals that of `h`:
/// each triangle has 4 independent sets on 3 vertices, exactly the factor
/// 1/2 that the forbidden vertex `x` contributed.
pub fn k3_gadget(h: &Hypergraph) -> Result<Hypergraph> {
    if h.rank() > 2 {
        return Err(Error::domain(format!(
            "the K3 gadget needs rank <= 2, got rank {}; replacing larger edges by \
             uniform finite gadgets is an open problem",
            h.rank()
        )));
    }
    let mut singleton = vec![false; h.num_vertices()];
    for e in h.edges() {
        if let [x] = e[..] {
            singleton[x as usize] = true;
        }
    }
    let kept: Vec<u32> = (0..h.num_vertices() as u32)
        .filter(|&v| !singleton[v as usize])
        .collect();
    let mut remap = vec![u32::MAX; h.num_vertices()];
    for (i, &v) in kept.iter().enumerate() {
        remap[v as usize] = i as u32;
    }
    let mut labels: Vec<String> = kept.iter().map(|&v| h.label(v).to_owned()).collect();
    let mut edges: Vec<Vec<u32>> = h
        .edges()
        .iter()
        .filter(|e| e.iter().all(|&v| !singleton[v as usize]))
        .map(|e| e.iter().map(|&v| remap[v as usize]).collect())
        .collect();
    for x in (0..h.num_vertices() as u32).filter(|&v| singleton[v as usize]) {
        let base = labels.len() as u32;
        for suffix in ["a", "b", "c"] {
            let label = format!("{}.{suffix}", h.label(x));
            if h.vertex(&label).is_some() {
                return Err(Error::domain(format!(
                    "gadget vertex `{label}` collides with an existing label"
                )));
            }
            labels.push(label);
        }
        edges.extend([
            vec![base, base + 1],
            vec![base, base + 2],
            vec![base + 1, base + 2],
        ]);
    }
    Hypergraph::new(labels, edges)
}

/// The gadget preserves density only at `p = 1/2`.
pub fn check_gadget_probability(p: &Probability) -> Result<()> {
    if p.is_half() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "the K3 gadget preserves density only at p = 1/2, not {p}; at other p a \
             finite graph with the same density need not exist (e.g. the infinite star \
             at transcendental p)"
        )))
    }
}
