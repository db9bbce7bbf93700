// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference implementations and graph corpora shared by the
//! integration tests. Everything here works on dense matrices or explicit
//! enumeration and shares no code with the library algorithms.
#![allow(dead_code)]

use netkit::community::Partition;
use netkit::generators::{barabasi_albert, gnp, lattice, planted_partition, watts_strogatz};
use netkit::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: f64 = f64::INFINITY;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph; weighted graphs get integer weights 1..=4 so path
/// lengths compare exactly.
pub fn random_graph(n: usize, p: f64, directed: bool, weighted: bool, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::new(n, directed, weighted);
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if r.gen_bool(p) {
                if weighted {
                    g.add_weighted_edge(u, v, r.gen_range(1..=4) as f64).unwrap();
                } else {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
    }
    g
}

/// Random connected undirected graph: a random spanning tree plus G(n, p) edges.
pub fn random_connected(n: usize, p: f64, weighted: bool, seed: u64) -> Graph {
    let mut r = rng(seed ^ 0x5eed);
    let mut g = random_graph(n, p, false, weighted, seed);
    for v in 1..n {
        let u = r.gen_range(0..v);
        if !g.has_edge(u, v) {
            if weighted {
                g.add_weighted_edge(u, v, r.gen_range(1..=4) as f64).unwrap();
            } else {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::undirected(n);
    for v in 1..n {
        g.add_edge(r.gen_range(0..v), v).unwrap();
    }
    g
}

/// Named graphs of assorted structure, all connected and undirected.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("path-12".to_string(), lattice(1, 12, false).unwrap()),
        ("ring-15".to_string(), lattice(1, 15, true).unwrap()),
        ("grid-6x7".to_string(), lattice(6, 7, false).unwrap()),
        ("torus-5x5".to_string(), lattice(5, 5, true).unwrap()),
        ("ba-200".to_string(), barabasi_albert(200, 2, 7).unwrap()),
        ("ba-500".to_string(), barabasi_albert(500, 3, 8).unwrap()),
        ("ws-150".to_string(), watts_strogatz(150, 4, 0.1, 9).unwrap()),
        ("star-20".to_string(), star(20)),
        ("clique-8".to_string(), clique(8)),
        ("barbell".to_string(), two_triangles_bridge()),
    ];
    for (i, seed) in [11u64, 12, 13].into_iter().enumerate() {
        let (g, _) = planted_partition(&[25, 25, 25], 0.3, 0.02, seed).unwrap();
        if netkit::traversal::is_connected(&g) {
            out.push((format!("planted-{i}"), g));
        }
    }
    for seed in 0..4 {
        out.push((format!("conn-{seed}"), random_connected(60, 0.05, false, 100 + seed)));
        out.push((format!("conn-w-{seed}"), random_connected(40, 0.1, true, 200 + seed)));
    }
    let gn = gnp(300, 0.03, 5).unwrap();
    if netkit::traversal::is_connected(&gn) {
        out.push(("gnp-300".to_string(), gn));
    }
    out
}

/// Planted-partition graphs used by the group and community suites.
pub fn planted_corpus() -> Vec<(Graph, Partition)> {
    (0..5)
        .map(|seed| planted_partition(&[20, 20, 20], 0.4, 0.03, 40 + seed).unwrap())
        .filter(|(g, _)| netkit::traversal::is_connected(g))
        .collect()
}

pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn clique(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
pub fn two_triangles_bridge() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
}

/// Dense adjacency with weights (0 for no edge); `a[u][v]` is the arc u -> v.
pub fn weight_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.u][e.v] = e.weight;
        if !g.is_directed() {
            a[e.v][e.u] = e.weight;
        }
    }
    a
}

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    weight_matrix(g)
        .into_iter()
        .map(|row| row.into_iter().map(|w| if w > 0.0 { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// All-pairs distances by Floyd-Warshall.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let w = weight_matrix(g);
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        d[u][u] = 0.0;
        for v in 0..n {
            if w[u][v] > 0.0 {
                d[u][v] = w[u][v];
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Shortest-path counts `sigma[s][t]` from the distance matrix: paths to `t`
/// extend shortest paths to in-neighbors `u` with `d(s,u) + w(u,t) = d(s,t)`.
pub fn path_counts(g: &Graph, d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let w = weight_matrix(g);
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t].is_finite()).collect();
        order.sort_by(|&a, &b| d[s][a].total_cmp(&d[s][b]));
        sigma[s][s] = 1.0;
        for &t in &order {
            if t == s {
                continue;
            }
            sigma[s][t] = (0..n)
                .filter(|&u| w[u][t] > 0.0 && d[s][u] + w[u][t] == d[s][t])
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    sigma
}

/// Counts shortest s-t paths by enumerating every simple path. Small n only.
pub fn enumerate_shortest_paths(g: &Graph, s: usize) -> (Vec<f64>, Vec<f64>) {
    let n = g.node_count();
    let w = weight_matrix(g);
    let mut best = vec![INF; n];
    let mut count = vec![0.0; n];
    let mut on_path = vec![false; n];
    fn dfs(
        u: usize,
        len: f64,
        w: &[Vec<f64>],
        on_path: &mut [bool],
        best: &mut [f64],
        count: &mut [f64],
    ) {
        if len < best[u] {
            best[u] = len;
            count[u] = 1.0;
        } else if len == best[u] {
            count[u] += 1.0;
        }
        on_path[u] = true;
        for v in 0..w.len() {
            if w[u][v] > 0.0 && !on_path[v] {
                dfs(v, len + w[u][v], w, on_path, best, count);
            }
        }
        on_path[u] = false;
    }
    dfs(s, 0.0, &w, &mut on_path, &mut best, &mut count);
    (best, count)
}

/// Betweenness from pair dependencies `sigma_sv sigma_vt / sigma_st`,
/// normalized like the library (unordered pairs when undirected).
pub fn betweenness_by_pairs(g: &Graph, normalized: bool) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g);
    let sigma = path_counts(g, &d);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || !d[s][t].is_finite() {
                continue;
            }
            for v in 0..n {
                if v != s && v != t && d[s][v] + d[v][t] == d[s][t] {
                    b[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    let mut scale = if g.is_directed() { 1.0 } else { 0.5 };
    if normalized {
        let pairs = ((n.saturating_sub(1)) * n.saturating_sub(2)) as f64;
        let pairs = if g.is_directed() { pairs } else { pairs / 2.0 };
        scale = if pairs > 0.0 { scale / pairs } else { 0.0 };
    }
    b.iter().map(|x| x * scale).collect()
}

/// Common neighbors of each edge's endpoints, by scanning the adjacency matrix.
pub fn triangles_per_edge(g: &Graph) -> Vec<f64> {
    let a = adjacency_matrix(g);
    g.edges()
        .iter()
        .map(|e| (0..g.node_count()).filter(|&x| a[e.u][x] > 0.0 && a[e.v][x] > 0.0).count() as f64)
        .collect()
}

/// `(1/2m) Σ_ij [A_ij - gamma k_i k_j / 2m] δ(c_i, c_j)` over the dense matrix.
pub fn modularity_dense(g: &Graph, labels: &[usize], gamma: f64) -> f64 {
    let a = weight_matrix(g);
    let n = g.node_count();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// `Σ_{k=1..len} α^k · #{walks with k edges visiting a vertex of s}` by
/// explicit enumeration of all walks.
pub fn ged_walks_enumerated(g: &Graph, s: &[usize], alpha: f64, len: usize) -> f64 {
    let a = adjacency_matrix(g);
    let n = g.node_count();
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    fn walk(u: usize, k: usize, hit: bool, a: &[Vec<f64>], in_s: &[bool], alpha: f64, len: usize, acc: &mut f64) {
        if k > 0 && hit {
            *acc += alpha.powi(k as i32);
        }
        if k == len {
            return;
        }
        for v in 0..a.len() {
            if a[u][v] > 0.0 {
                walk(v, k + 1, hit || in_s[v], a, in_s, alpha, len, acc);
            }
        }
    }
    let mut acc = 0.0;
    for u in 0..n {
        walk(u, 0, in_s[u], &a, &in_s, alpha, len, &mut acc);
    }
    acc
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        let p = m[col][col];
        assert!(p.abs() > 1e-14, "singular system");
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f != 0.0 {
                for c in col..n {
                    m[row][c] -= f * m[col][c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

pub fn invert_dense(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| solve_dense(m.to_vec(), (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()))
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// Katz scores `Σ_{i≥1} α^i A^i 1` (out-walks) from `(I - αA) x = αA 1`.
pub fn katz_dense(g: &Graph, alpha: f64) -> Vec<f64> {
    let a = adjacency_matrix(g);
    let n = a.len();
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - alpha * a[i][j]).collect())
        .collect();
    let b: Vec<f64> = a.iter().map(|row| alpha * row.iter().sum::<f64>()).collect();
    solve_dense(m, b)
}

/// Laplacian pseudoinverse of a connected graph, `(L + J/n)^{-1} - J/n`.
pub fn laplacian_pinv(g: &Graph) -> Vec<Vec<f64>> {
    let w = weight_matrix(g);
    let n = w.len();
    let shift = 1.0 / n as f64;
    let mut l = vec![vec![shift; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                l[i][i] += w[i].iter().sum::<f64>();
            } else {
                l[i][j] -= w[i][j];
            }
        }
    }
    let mut inv = invert_dense(&l);
    for row in inv.iter_mut() {
        for x in row.iter_mut() {
            *x -= shift;
        }
    }
    inv
}

pub fn effective_resistance(pinv: &[Vec<f64>], u: usize, v: usize) -> f64 {
    pinv[u][u] + pinv[v][v] - 2.0 * pinv[u][v]
}

/// Every k-subset of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Group distances by brute force over the distance matrix.
pub fn group_distances_dense(d: &[Vec<f64>], s: &[usize]) -> Vec<f64> {
    (0..d.len())
        .map(|v| s.iter().map(|&u| d[u][v]).fold(INF, f64::min))
        .collect()
}

pub fn group_closeness_dense(d: &[Vec<f64>], s: &[usize]) -> f64 {
    let gd = group_distances_dense(d, s);
    let sum: f64 = gd.iter().sum();
    let outside = d.len() - s.len();
    if outside == 0 || sum == 0.0 {
        0.0
    } else {
        outside as f64 / sum
    }
}

pub fn group_harmonic_dense(d: &[Vec<f64>], s: &[usize]) -> f64 {
    group_distances_dense(d, s)
        .iter()
        .filter(|&&x| x > 0.0 && x.is_finite())
        .map(|x| 1.0 / x)
        .sum()
}

pub fn group_degree_dense(g: &Graph, s: &[usize]) -> usize {
    let a = adjacency_matrix(g);
    (0..g.node_count())
        .filter(|&v| !s.contains(&v) && s.iter().any(|&u| a[u][v] > 0.0))
        .count()
}

/// Top-ceil(d^e - 1e-9) neighbors of `u` by score (ties by neighbor id),
/// returned as edge ids.
pub fn top_neighbors(g: &Graph, scores: &[f64], u: usize, exponent: f64) -> Vec<usize> {
    let mut inc: Vec<(f64, usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| e.u == u || e.v == u)
        .map(|e| (scores[e.id], if e.u == u { e.v } else { e.u }, e.id))
        .collect();
    inc.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let d = inc.len() as f64;
    let keep = if inc.is_empty() { 0 } else { (d.powf(exponent) - 1e-9).ceil() as usize };
    inc.into_iter().take(keep).map(|x| x.2).collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn assert_vec_close(actual: &[f64], expected: &[f64], tol: f64, what: &str) {
    assert_eq!(actual.len(), expected.len(), "{what}: length");
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!(close(*a, *e, tol), "{what}: index {i}: got {a}, expected {e}");
    }
}
