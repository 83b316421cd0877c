use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// A simple, undirected, connected graph with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    labels: Vec<String>,
}

/// On-disk form: `{n, edges: [[i, j], ...], labels}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[[usize; 2]], labels: Vec<String>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::Input("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &[i, j] in edges {
            if i >= n || j >= n {
                return Err(Error::Input(format!("edge [{i},{j}] out of range")));
            }
            if i == j {
                return Err(Error::Input(format!("loop at {i}")));
            }
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        }
        for (v, l) in adj.iter_mut().enumerate() {
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("repeated edge at vertex {v}")));
            }
        }
        let labels = if labels.is_empty() { (0..n).map(|i| i.to_string()).collect() } else { labels };
        if labels.len() != n {
            return Err(Error::Input(format!("{} labels for {n} vertices", labels.len())));
        }
        let g = Graph { adj, labels };
        if g.distances_from(0).iter().any(|&d| d == u32::MAX) {
            return Err(Error::Input("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, l) in self.adj.iter().enumerate() {
            out.extend(l.iter().map(|&j| j as usize).filter(|&j| i < j).map(|j| [i, j]));
        }
        out
    }

    /// Path distances from `x`; `u32::MAX` marks unreachable vertices.
    pub fn distances_from(&self, x: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile { n: self.n(), edges: self.edges(), labels: self.labels.clone() }
    }

    pub fn from_file(f: &GraphFile) -> Result<Graph> {
        Graph::from_edges(f.n, &f.edges, f.labels.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Graph> {
        let f: GraphFile = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("graph file: {e}")))?;
        Graph::from_file(&f)
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<[usize; 2]> = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect();
        Graph::from_edges(n, &edges, Vec::new()).expect("complete graph")
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Graph::from_edges(n, &edges, Vec::new()).expect("cycle")
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Rank over GF(p) of a `rows x cols` matrix given row-major.
pub fn rank_mod_p(entries: &[u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = entries.chunks(cols).map(|r| r.iter().map(|&v| v % p).collect()).collect();
    let inv = |a: u64| -> u64 {
        // a^(p-2) mod p
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let f = inv(m[rank][c]);
        for v in &mut m[rank] {
            *v = *v * f % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let t = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + p * p - t * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn digits(mut v: usize, len: usize, p: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (v % p) as u64;
        v /= p;
    }
    out
}

fn matrix_label(entries: &[u64], cols: usize, p: u64) -> String {
    let sep = if p > 10 { "," } else { "" };
    entries
        .chunks(cols)
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(sep))
        .collect::<Vec<_>>()
        .join("/")
}

/// The bilinear forms graph: `rows x cols` matrices over GF(p), adjacent when
/// their difference has rank one. Vertex `v` has entries the base-`p` digits
/// of `v` in row-major order, so vertex 0 is the zero matrix.
pub fn build_bilinear_forms_graph(rows: usize, cols: usize, p: u64) -> Result<Graph> {
    if !is_prime(p) {
        return Err(Error::Input(format!("p = {p} is not prime")));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::Input("rows and cols must be positive".into()));
    }
    let len = rows * cols;
    let n = (0..len)
        .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&v| v <= 1 << 16))
        .ok_or_else(|| Error::TooLarge(format!("{p}^{len} vertices exceeds 2^16")))? as usize;
    let pu = p as usize;
    let verts: Vec<Vec<u64>> = (0..n).map(|v| digits(v, len, pu)).collect();
    let rank_one: Vec<&Vec<u64>> = verts.par_iter().filter(|m| rank_mod_p(m, rows, cols, p) == 1).collect();
    let index = |e: &[u64]| e.iter().rev().fold(0usize, |acc, &d| acc * pu + d as usize);
    let adj: Vec<Vec<u32>> = verts
        .par_iter()
        .map(|m| {
            let mut l: Vec<u32> = rank_one
                .iter()
                .map(|r| {
                    let sum: Vec<u64> = m.iter().zip(r.iter()).map(|(a, b)| (a + b) % p).collect();
                    index(&sum) as u32
                })
                .collect();
            l.sort_unstable();
            l
        })
        .collect();
    let labels = verts.iter().map(|m| matrix_label(m, cols, p)).collect();
    Ok(Graph { adj, labels })
}
