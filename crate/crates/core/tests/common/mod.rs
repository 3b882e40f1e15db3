//! Reference solver for tests: adjacency matrix, plain mex recursion over
//! whole positions, no component splitting. Shares no code with the crate.

#![allow(dead_code)]

use std::collections::HashMap;

pub struct Naive {
    n: usize,
    adj: Vec<Vec<bool>>,
    odd_rule: bool,
    memo: HashMap<Vec<bool>, u32>,
}

impl Naive {
    pub fn new(n: usize, edges: &[(usize, usize)], odd_rule: bool) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Naive {
            n,
            adj,
            odd_rule,
            memo: HashMap::new(),
        }
    }

    pub fn value(&mut self) -> u32 {
        self.value_of(vec![true; self.n])
    }

    pub fn value_of(&mut self, alive: Vec<bool>) -> u32 {
        if let Some(&v) = self.memo.get(&alive) {
            return v;
        }
        let mut options = Vec::new();
        for v in 0..self.n {
            if !alive[v] {
                continue;
            }
            let deg = (0..self.n).filter(|&w| alive[w] && self.adj[v][w]).count();
            if (deg % 2 == 1) == self.odd_rule {
                let mut child = alive.clone();
                child[v] = false;
                options.push(self.value_of(child));
            }
        }
        let mut m = 0;
        while options.contains(&m) {
            m += 1;
        }
        self.memo.insert(alive, m);
        m
    }
}

pub fn naive_odd(n: usize, edges: &[(usize, usize)]) -> u32 {
    Naive::new(n, edges, true).value()
}

/// Pairs in column order of the upper triangle: (0,1), (0,2), (1,2), (0,3), ...
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..n {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

pub fn edges_of_mask(n: usize, mask: u64) -> Vec<(usize, usize)> {
    pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, e)| e)
        .collect()
}

/// Two-colourability by trying every colouring.
pub fn bipartite_by_search(n: usize, edges: &[(usize, usize)]) -> bool {
    (0..1u32 << n).any(|c| edges.iter().all(|&(u, v)| (c >> u & 1) != (c >> v & 1)))
}
