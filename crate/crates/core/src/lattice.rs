//! FCC lattice on the periodic 3-torus of side `L`.
//!
//! Nodes are the even-parity integer points, qubits live on the 12
//! nearest-neighbour edges of each node, and every odd-parity site is an
//! octahedral void bounded by its 6 axis neighbours. All enumeration orders
//! are fixed: rows and columns of the parity-check matrices, and therefore
//! kernel bases and decoder tie-breaking, inherit them.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Nearest-neighbour displacements, in enumeration order.
pub const NEIGHBOR_OFFSETS: [[i64; 3]; 12] = [
    [1, 1, 0],
    [1, -1, 0],
    [-1, 1, 0],
    [-1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [-1, 0, 1],
    [-1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [0, -1, 1],
    [0, -1, -1],
];

/// Axis displacements from a void centre to its surrounding nodes.
pub const AXIS_OFFSETS: [[i64; 3]; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

pub type Coord = [usize; 3];

#[derive(Debug, Clone)]
pub struct FccLattice {
    size: usize,
    nodes: Vec<Coord>,
    node_index: HashMap<Coord, usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    oct_centers: Vec<Coord>,
    octs: Vec<[usize; 6]>,
    oct_edges: Vec<Vec<usize>>,
    edge_octs: Vec<[usize; 2]>,
    node_adjacency: Vec<Vec<(usize, usize)>>,
    oct_adjacency: Vec<Vec<(usize, usize)>>,
}

fn wrap(c: Coord, d: [i64; 3], l: usize) -> Coord {
    let l = l as i64;
    let f = |a: usize, b: i64| (a as i64 + b).rem_euclid(l) as usize;
    [f(c[0], d[0]), f(c[1], d[1]), f(c[2], d[2])]
}

impl FccLattice {
    pub fn new(size: usize) -> Result<Self> {
        if size < 4 || size % 2 != 0 {
            return Err(Error::InvalidLatticeSize(size));
        }

        let mut nodes = Vec::new();
        let mut node_index = HashMap::new();
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if (x + y + z) % 2 == 0 {
                        node_index.insert([x, y, z], nodes.len());
                        nodes.push([x, y, z]);
                    }
                }
            }
        }

        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        let mut node_adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(12); nodes.len()];
        for (i, &c) in nodes.iter().enumerate() {
            for d in NEIGHBOR_OFFSETS {
                let j = node_index[&wrap(c, d, size)];
                node_adjacency[i].push(j);
                if i < j {
                    edge_index.insert((i, j), edges.len());
                    edges.push((i, j));
                }
            }
        }
        let node_adjacency: Vec<Vec<(usize, usize)>> = node_adjacency
            .into_iter()
            .enumerate()
            .map(|(i, nbrs)| {
                nbrs.into_iter()
                    .map(|j| (j, edge_index[&(i.min(j), i.max(j))]))
                    .collect()
            })
            .collect();

        let mut oct_centers = Vec::new();
        let mut octs = Vec::new();
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if (x + y + z) % 2 == 1 {
                        let c = [x, y, z];
                        let nbs = AXIS_OFFSETS.map(|d| node_index[&wrap(c, d, size)]);
                        oct_centers.push(c);
                        octs.push(nbs);
                    }
                }
            }
        }

        // Edges whose both endpoints bound the void.
        let mut oct_edges = Vec::with_capacity(octs.len());
        for nbs in &octs {
            let mut es: Vec<usize> = Vec::with_capacity(12);
            for (a, &u) in nbs.iter().enumerate() {
                for &v in &nbs[a + 1..] {
                    if let Some(&e) = edge_index.get(&(u.min(v), u.max(v))) {
                        es.push(e);
                    }
                }
            }
            es.sort_unstable();
            oct_edges.push(es);
        }

        let mut containing: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (o, es) in oct_edges.iter().enumerate() {
            for &e in es {
                containing[e].push(o);
            }
        }

        let lat = Self {
            size,
            edge_octs: Vec::new(),
            oct_adjacency: Vec::new(),
            nodes,
            node_index,
            edges,
            edge_index,
            oct_centers,
            octs,
            oct_edges,
            node_adjacency,
        };
        lat.finish(containing)
    }

    fn finish(mut self, containing: Vec<Vec<usize>>) -> Result<Self> {
        let l3 = self.size.pow(3);
        if self.nodes.len() != l3 / 2 || self.octs.len() != l3 / 2 || self.edges.len() != 3 * l3 {
            return Err(Error::Lattice(format!(
                "expected {} nodes, {} edges and {} octs, found {}, {} and {}",
                l3 / 2,
                3 * l3,
                l3 / 2,
                self.nodes.len(),
                self.edges.len(),
                self.octs.len()
            )));
        }
        if let Some(v) = self.node_adjacency.iter().position(|a| a.len() != 12) {
            return Err(Error::Lattice(format!("node {v} does not have 12 incident edges")));
        }
        if let Some(o) = self.oct_edges.iter().position(|es| es.len() != 12) {
            return Err(Error::Lattice(format!("oct {o} does not contain 12 edges")));
        }
        let mut edge_octs = Vec::with_capacity(self.edges.len());
        for (e, os) in containing.iter().enumerate() {
            match os.as_slice() {
                &[a, b] => edge_octs.push([a, b]),
                _ => {
                    return Err(Error::Lattice(format!(
                        "edge {e} lies in {} octs, expected 2",
                        os.len()
                    )))
                }
            }
        }

        let mut oct_adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(12); self.octs.len()];
        for (e, &[a, b]) in edge_octs.iter().enumerate() {
            oct_adjacency[a].push((b, e));
            oct_adjacency[b].push((a, e));
        }
        for (o, adj) in oct_adjacency.iter().enumerate() {
            let mut nbrs: Vec<usize> = adj.iter().map(|&(n, _)| n).collect();
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Lattice(format!("oct {o} shares more than one edge with a neighbour")));
            }
        }
        self.edge_octs = edge_octs;
        self.oct_adjacency = oct_adjacency;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nodes(&self) -> &[Coord] {
        &self.nodes
    }

    pub fn node_at(&self, c: Coord) -> Option<usize> {
        self.node_index.get(&c).copied()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of the edge joining `a` and `b`, in either order.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn oct_centers(&self) -> &[Coord] {
        &self.oct_centers
    }

    /// The 6 surrounding nodes of each void, in axis order +x,-x,+y,-y,+z,-z.
    pub fn octs(&self) -> &[[usize; 6]] {
        &self.octs
    }

    /// Sorted edge indices of the 12 edges bounding each void.
    pub fn oct_edges(&self) -> &[Vec<usize>] {
        &self.oct_edges
    }

    /// The two voids containing each edge.
    pub fn edge_octs(&self) -> &[[usize; 2]] {
        &self.edge_octs
    }

    /// `(neighbour node, edge)` pairs in displacement order.
    pub fn node_adjacency(&self) -> &[Vec<(usize, usize)>] {
        &self.node_adjacency
    }

    /// `(neighbour oct, shared edge)` pairs in increasing edge order.
    pub fn oct_adjacency(&self) -> &[Vec<(usize, usize)>] {
        &self.oct_adjacency
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_octs(&self) -> usize {
        self.octs.len()
    }

    pub fn export(&self) -> LatticeExport {
        LatticeExport {
            size: self.size,
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            octs: self.octs.clone(),
            oct_centers: self.oct_centers.clone(),
        }
    }
}

/// JSON geometry dump for external visualisation.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeExport {
    #[serde(rename = "L")]
    pub size: usize,
    pub nodes: Vec<Coord>,
    pub edges: Vec<[usize; 2]>,
    pub octs: Vec<[usize; 6]>,
    pub oct_centers: Vec<Coord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Checks on lattice nodes; defects are nodes, paths run along edges.
    Vertex,
    /// Checks on octahedral voids; defects are voids, paths cross shared edges.
    Oct,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Vertex => "vertex",
            Side::Oct => "oct",
        }
    }
}

/// Graph whose edges are labelled by qubits, used to route corrections.
#[derive(Debug, Clone)]
pub struct DefectGraph {
    kind: Side,
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathResult {
    pub distance: usize,
    pub qubit_path: Vec<usize>,
}

/// Breadth-first search tree rooted at one graph node.
#[derive(Debug, Clone)]
pub struct BfsTree {
    root: usize,
    dist: Vec<usize>,
    // (parent node, qubit) recorded at first discovery
    parent: Vec<Option<(usize, usize)>>,
}

impl BfsTree {
    pub fn distance(&self, target: usize) -> Option<usize> {
        match self.dist[target] {
            usize::MAX => None,
            d => Some(d),
        }
    }

    /// Qubits along the tree path from the root to `target`, root side first.
    pub fn path_to(&self, target: usize) -> Result<PathResult> {
        let distance = self.distance(target).ok_or(Error::Disconnected(self.root, target))?;
        let mut qubit_path = Vec::with_capacity(distance);
        let mut cur = target;
        while let Some((p, q)) = self.parent[cur] {
            qubit_path.push(q);
            cur = p;
        }
        qubit_path.reverse();
        Ok(PathResult {
            distance,
            qubit_path,
        })
    }
}

impl DefectGraph {
    pub fn new(lattice: &FccLattice, kind: Side) -> Self {
        let adjacency = match kind {
            Side::Vertex => lattice.node_adjacency().to_vec(),
            Side::Oct => lattice.oct_adjacency().to_vec(),
        };
        Self { kind, adjacency }
    }

    pub fn kind(&self) -> Side {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[Vec<(usize, usize)>] {
        &self.adjacency
    }

    /// Unit-weight BFS from `root`, exploring neighbours in adjacency order.
    pub fn bfs(&self, root: usize) -> BfsTree {
        let n = self.adjacency.len();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(v, q) in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = Some((u, q));
                    queue.push_back(v);
                }
            }
        }
        BfsTree { root, dist, parent }
    }

    pub fn shortest_path(&self, a: usize, b: usize) -> Result<PathResult> {
        self.bfs(a).path_to(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_at_four_and_six() {
        for (l, nodes, edges) in [(4, 32, 192), (6, 108, 648)] {
            let lat = FccLattice::new(l).unwrap();
            assert_eq!(lat.num_nodes(), nodes);
            assert_eq!(lat.num_edges(), edges);
            assert_eq!(lat.num_octs(), nodes);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        for l in [0, 2, 3, 5, 7] {
            assert_eq!(FccLattice::new(l).unwrap_err(), Error::InvalidLatticeSize(l));
        }
    }

    #[test]
    fn handshake_and_degree() {
        let lat = FccLattice::new(4).unwrap();
        let total: usize = lat.node_adjacency().iter().map(Vec::len).sum();
        assert_eq!(total, 2 * lat.num_edges());
        let g = DefectGraph::new(&lat, Side::Vertex);
        assert_eq!(g.node_count(), 32);
        assert!(g.adjacency().iter().all(|a| a.len() == 12));
    }

    #[test]
    fn every_edge_in_two_octs_brute_force() {
        let lat = FccLattice::new(4).unwrap();
        for (e, &(a, b)) in lat.edges().iter().enumerate() {
            let containing = lat
                .octs()
                .iter()
                .filter(|nbs| nbs.contains(&a) && nbs.contains(&b))
                .count();
            assert_eq!(containing, 2, "edge {e}");
        }
        let g = DefectGraph::new(&lat, Side::Oct);
        let dual_edges: usize = g.adjacency().iter().map(Vec::len).sum::<usize>() / 2;
        assert_eq!(dual_edges, 192);
        let mut seen: HashSet<usize> = HashSet::new();
        for adj in g.adjacency() {
            for &(_, q) in adj {
                seen.insert(q);
            }
        }
        assert_eq!(seen.len(), 192);
    }

    #[test]
    fn octs_share_at_most_one_edge_brute_force() {
        let lat = FccLattice::new(4).unwrap();
        let sets: Vec<HashSet<usize>> = lat
            .oct_edges()
            .iter()
            .map(|es| es.iter().copied().collect())
            .collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                assert!(sets[i].intersection(&sets[j]).count() <= 1);
            }
        }
    }

    #[test]
    fn translation_preserves_incidence() {
        let lat = FccLattice::new(4).unwrap();
        let shift = |c: Coord| wrap(c, [2, 0, 0], 4);
        let node_perm: Vec<usize> = lat.nodes().iter().map(|&c| lat.node_at(shift(c)).unwrap()).collect();
        let mut img: HashSet<(usize, usize)> = HashSet::new();
        for &(a, b) in lat.edges() {
            let (x, y) = (node_perm[a], node_perm[b]);
            assert!(lat.edge_between(x, y).is_some());
            img.insert((x.min(y), x.max(y)));
        }
        assert_eq!(img.len(), lat.num_edges());
        let octs: HashSet<Vec<usize>> = lat
            .octs()
            .iter()
            .map(|o| {
                let mut v = o.to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        for o in lat.octs() {
            let mut v: Vec<usize> = o.iter().map(|&n| node_perm[n]).collect();
            v.sort_unstable();
            assert!(octs.contains(&v));
        }
    }

    #[test]
    fn trivial_paths() {
        let lat = FccLattice::new(4).unwrap();
        let g = DefectGraph::new(&lat, Side::Vertex);
        assert_eq!(
            g.shortest_path(5, 5).unwrap(),
            PathResult {
                distance: 0,
                qubit_path: vec![]
            }
        );
        let (nb, e) = g.adjacency()[5][3];
        assert_eq!(
            g.shortest_path(5, nb).unwrap(),
            PathResult {
                distance: 1,
                qubit_path: vec![e]
            }
        );
    }

    // All-pairs distances by Floyd-Warshall over the raw edge list.
    fn floyd(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
        let inf = usize::MAX / 4;
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
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    fn check_paths(g: &DefectGraph, endpoints: &dyn Fn(usize) -> (usize, usize), oracle: &[Vec<usize>]) {
        let n = g.node_count();
        for a in 0..n {
            let tree = g.bfs(a);
            for b in 0..n {
                let p = tree.path_to(b).unwrap();
                assert_eq!(p.distance, oracle[a][b]);
                assert_eq!(p.qubit_path.len(), p.distance);
                // walk the path
                let mut cur = a;
                for &q in &p.qubit_path {
                    let (x, y) = endpoints(q);
                    cur = if x == cur {
                        y
                    } else {
                        assert_eq!(y, cur);
                        x
                    };
                }
                assert_eq!(cur, b);
            }
        }
        // symmetry and triangle inequality
        for a in 0..n {
            for b in 0..n {
                assert_eq!(oracle[a][b], oracle[b][a]);
                for c in (0..n).step_by(7) {
                    assert!(oracle[a][c] <= oracle[a][b] + oracle[b][c]);
                }
            }
        }
    }

    #[test]
    fn bfs_matches_floyd_warshall_vertex_side() {
        let lat = FccLattice::new(4).unwrap();
        let g = DefectGraph::new(&lat, Side::Vertex);
        let oracle = floyd(lat.num_nodes(), lat.edges().iter().copied());
        let a = lat.node_at([0, 0, 0]).unwrap();
        let b = lat.node_at([2, 2, 2]).unwrap();
        assert_eq!(g.shortest_path(a, b).unwrap().distance, oracle[a][b]);
        assert_eq!(oracle[a][b], 3);
        let edges = lat.edges().to_vec();
        check_paths(&g, &|q| edges[q], &oracle);
    }

    #[test]
    fn bfs_matches_floyd_warshall_oct_side() {
        let lat = FccLattice::new(4).unwrap();
        let g = DefectGraph::new(&lat, Side::Oct);
        let eo = lat.edge_octs().to_vec();
        let oracle = floyd(lat.num_octs(), eo.iter().map(|&[a, b]| (a, b)));
        check_paths(&g, &|q| (eo[q][0], eo[q][1]), &oracle);
    }
}
