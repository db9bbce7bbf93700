// SPDX-License-Identifier: Apache-2.0

//! Seeded random graph models. Every generator is single-threaded and a pure
//! function of its parameters and seed.

use rand::Rng;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::random::{rng, NkRng};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// Geometric skip: number of failures before the next success.
fn skip(rng: &mut NkRng, log_q: f64) -> u64 {
    let r: f64 = 1.0 - rng.gen::<f64>();
    let s = (r.ln() / log_q).floor();
    if s >= u64::MAX as f64 {
        u64::MAX
    } else {
        s as u64
    }
}

/// Adds each pair `(base_u + i, base_v + j)` of a rectangular (or, when
/// `triangle` is set, strictly lower-triangular) block with probability `p`.
fn sample_block(
    g: &mut Graph,
    rng: &mut NkRng,
    p: f64,
    rows: (Node, usize),
    cols: (Node, usize),
    triangle: bool,
) {
    if p <= 0.0 || rows.1 == 0 || cols.1 == 0 {
        return;
    }
    let pair_count = |i: usize| if triangle { i } else { cols.1 };
    if p >= 1.0 {
        for i in 0..rows.1 {
            for j in 0..pair_count(i) {
                g.add_edge(rows.0 + i, cols.0 + j).expect("fresh pair");
            }
        }
        return;
    }
    // Batagelj–Brandes skipping over the pair sequence.
    let log_q = (1.0 - p).ln();
    let (mut i, mut j) = (0usize, 0u64);
    while i < rows.1 {
        j = j.saturating_add(skip(rng, log_q));
        while i < rows.1 && j >= pair_count(i) as u64 {
            j -= pair_count(i) as u64;
            i += 1;
        }
        if i < rows.1 {
            g.add_edge(rows.0 + i, cols.0 + j as usize).expect("fresh pair");
            j += 1;
        }
    }
}

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    let mut g = Graph::undirected(n);
    sample_block(&mut g, &mut rng(seed), p, (0, n), (0, n), true);
    Ok(g)
}

/// Barabási–Albert preferential attachment grown from a `k0 + 1` clique.
pub fn barabasi_albert(n: usize, k0: usize, seed: u64) -> Result<Graph> {
    if k0 == 0 || n <= k0 {
        return Err(Error::param(format!(
            "barabasi_albert needs k0 >= 1 and n > k0 (n={n}, k0={k0})"
        )));
    }
    let mut rng = rng(seed);
    let mut g = Graph::undirected(n);
    let mut endpoints: Vec<Node> = Vec::with_capacity(2 * (k0 * (k0 + 1) / 2 + (n - k0 - 1) * k0));
    for u in 0..=k0 {
        for v in 0..u {
            g.add_edge(v, u).expect("clique edge");
            endpoints.extend([v, u]);
        }
    }
    let mut targets = Vec::with_capacity(k0);
    for u in (k0 + 1)..n {
        targets.clear();
        while targets.len() < k0 {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.add_edge(u, t).expect("new vertex has no edges yet");
            endpoints.extend([u, t]);
        }
    }
    Ok(g)
}

/// Ring lattice where each vertex links to its `k / 2` successors, then every
/// edge has its far endpoint rewired with probability `beta`.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph> {
    check_probability("beta", beta)?;
    if k % 2 != 0 || k >= n {
        return Err(Error::param(format!(
            "watts_strogatz needs an even k < n (n={n}, k={k})"
        )));
    }
    let mut g = Graph::undirected(n);
    for u in 0..n {
        for j in 1..=k / 2 {
            g.add_edge(u, (u + j) % n).expect("ring edge");
        }
    }
    if beta == 0.0 {
        return Ok(g);
    }
    let mut rng = rng(seed);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.gen_bool(beta) || !g.has_edge(u, v) {
                continue;
            }
            // A vertex adjacent to everyone cannot take a new endpoint.
            if g.degree(u) >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !g.has_edge(u, w) {
                    break w;
                }
            };
            g.remove_edge(u, v).expect("edge present");
            g.add_edge(u, w).expect("checked absent");
        }
    }
    Ok(g)
}

/// Chung–Lu expected-degree model: `(i, j)` is linked with probability
/// `w_i w_j / Σw`.
pub fn chung_lu(weights: &[f64], seed: u64) -> Result<Graph> {
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::param(format!("expected degrees must be finite and >= 0, got {w}")));
    }
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut g = Graph::undirected(n);
    if total == 0.0 {
        return Ok(g);
    }
    let mut order: Vec<Node> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    if n >= 2 {
        let top = weights[order[0]] * weights[order[1]] / total;
        if top > 1.0 + 1e-12 {
            return Err(Error::param(format!(
                "edge probability overflow: max w_i w_j / sum = {top}"
            )));
        }
    }
    // Miller–Hagberg: walk each row in decreasing weight order, skipping with
    // the current (upper-bounding) probability and thinning.
    let mut rng = rng(seed);
    for (a, &u) in order.iter().enumerate() {
        let wu = weights[u];
        let mut b = a + 1;
        let mut p = match order.get(b) {
            Some(&v) => (wu * weights[v] / total).min(1.0),
            None => 0.0,
        };
        while b < n && p > 0.0 {
            if p < 1.0 {
                b += skip(&mut rng, (1.0 - p).ln()).min((n - b) as u64) as usize;
            }
            if b >= n {
                break;
            }
            let q = (wu * weights[order[b]] / total).min(1.0);
            if rng.gen::<f64>() < q / p {
                g.add_edge(u, order[b]).expect("pair visited once");
            }
            p = q;
            b += 1;
        }
    }
    Ok(g)
}

/// Stochastic block model with uniform intra- and inter-block probabilities.
/// Returns the graph and its ground-truth partition.
pub fn planted_partition(
    blocks: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(Graph, Partition)> {
    check_probability("p_in", p_in)?;
    check_probability("p_out", p_out)?;
    if p_in < p_out {
        return Err(Error::param(format!("p_in ({p_in}) must be >= p_out ({p_out})")));
    }
    let n: usize = blocks.iter().sum();
    let mut starts = Vec::with_capacity(blocks.len());
    let mut labels = Vec::with_capacity(n);
    for (b, &size) in blocks.iter().enumerate() {
        starts.push(labels.len());
        labels.extend(std::iter::repeat(b).take(size));
    }
    let mut rng = rng(seed);
    let mut g = Graph::undirected(n);
    for (b, &size) in blocks.iter().enumerate() {
        sample_block(&mut g, &mut rng, p_in, (starts[b], size), (starts[b], size), true);
        for c in 0..b {
            sample_block(&mut g, &mut rng, p_out, (starts[b], size), (starts[c], blocks[c]), false);
        }
    }
    Ok((g, Partition::from_assignment(labels)))
}

/// `rows × cols` grid with 4-neighborhoods, optionally wrapped into a torus.
pub fn lattice(rows: usize, cols: usize, periodic: bool) -> Result<Graph> {
    if periodic && (rows < 3 && rows > 1 || cols < 3 && cols > 1) {
        return Err(Error::param("periodic lattice needs each side 1 or >= 3"));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut g = Graph::undirected(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1))?;
            } else if periodic && cols > 2 {
                g.add_edge(id(r, c), id(r, 0))?;
            }
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c))?;
            } else if periodic && rows > 2 {
                g.add_edge(id(r, c), id(0, c))?;
            }
        }
    }
    Ok(g)
}
