#![allow(dead_code)]

use fcc_qec::{FccLattice, Side};

/// All-pairs hop distances by Floyd-Warshall on the raw incidence lists.
pub fn floyd_distances(lattice: &FccLattice, side: Side) -> Vec<Vec<u64>> {
    let (n, edges): (usize, Vec<(usize, usize)>) = match side {
        Side::Vertex => (lattice.num_nodes(), lattice.edges().to_vec()),
        Side::Oct => (
            lattice.num_octs(),
            lattice.edge_octs().iter().map(|&[a, b]| (a, b)).collect(),
        ),
    };
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Minimum total cost over all (2m-1)!! perfect pairings.
pub fn brute_min_pairing(cost: &[Vec<u64>]) -> u64 {
    fn rec(free: &mut Vec<usize>, cost: &[Vec<u64>]) -> u64 {
        if free.is_empty() {
            return 0;
        }
        let a = free.remove(0);
        let mut best = u64::MAX;
        for idx in 0..free.len() {
            let b = free.remove(idx);
            best = best.min(cost[a][b] + rec(free, cost));
            free.insert(idx, b);
        }
        free.insert(0, a);
        best
    }
    rec(&mut (0..cost.len()).collect(), cost)
}

/// Deterministic xorshift for choosing test instances.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    /// `count` distinct values from `0..n`.
    pub fn distinct(&mut self, n: usize, count: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let v = self.below(n);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}
