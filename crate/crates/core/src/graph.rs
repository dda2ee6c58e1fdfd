//! Undirected multigraphs, incidence matrices and bond configurations.
//!
//! Edge order is authoritative: bit `j` of every length-`|E|` vector refers to
//! edge number `j` in the order the edges were given.

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector, KernelBasis};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Bond signs, one bit per edge: 0 ferromagnetic, 1 antiferromagnetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BondConfig(pub Gf2Vector);

impl BondConfig {
    pub fn ferromagnetic(num_edges: usize) -> Self {
        BondConfig(Gf2Vector::zeros(num_edges))
    }

    pub fn antiferromagnetic(num_edges: usize) -> Self {
        BondConfig(Gf2Vector::ones(num_edges))
    }

    pub fn bits(&self) -> &Gf2Vector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `q_e = (-1)^{w_e}`.
    pub fn sign(&self, edge: usize) -> i64 {
        if self.0.get(edge) {
            -1
        } else {
            1
        }
    }

    /// `Some(false)` for all-ferro, `Some(true)` for all-antiferro, `None` otherwise.
    /// An empty configuration counts as ferromagnetic.
    pub fn uniform(&self) -> Option<bool> {
        let weight = self.0.weight();
        if weight == 0 {
            Some(false)
        } else if weight == self.0.len() {
            Some(true)
        } else {
            None
        }
    }
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (e, &(i, j)) in edges.iter().enumerate() {
            for v in [i, j] {
                if v >= num_vertices {
                    return Err(Error::IndexOutOfRange {
                        context: "edge endpoint",
                        index: v,
                        bound: num_vertices,
                    });
                }
            }
            if i == j {
                return Err(Error::SelfLoop { edge: e, vertex: i });
            }
        }
        Ok(Self { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Open chain `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, edges).expect("path edges are valid")
    }

    /// Periodic chain on `n >= 2` vertices; `n = 2` gives a doubled edge.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a cycle needs at least two vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Self::new(n, edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, edges).expect("complete graph edges are valid")
    }

    /// Open `rows x cols` grid, row-major vertex numbering; horizontal edges first.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 1..cols {
                edges.push((id(r, c - 1), id(r, c)));
            }
        }
        for r in 1..rows {
            for c in 0..cols {
                edges.push((id(r - 1, c), id(r, c)));
            }
        }
        Self::new(rows * cols, edges).expect("grid edges are valid")
    }

    /// `side x side` grid with periodic boundaries: every vertex bonds to its right
    /// and lower neighbour, giving `2 side^2` edges (parallel edges when `side = 2`).
    pub fn torus(side: usize) -> Self {
        assert!(side >= 2, "torus side must be at least 2");
        let id = |r: usize, c: usize| r * side + c;
        let mut edges = Vec::with_capacity(2 * side * side);
        for r in 0..side {
            for c in 0..side {
                edges.push((id(r, c), id(r, (c + 1) % side)));
                edges.push((id(r, c), id((r + 1) % side, c)));
            }
        }
        Self::new(side * side, edges).expect("torus edges are valid")
    }

    /// `|V| x |E|` incidence matrix; column `e` has ones at the two endpoints of edge `e`.
    pub fn incidence_matrix(&self) -> Gf2Matrix {
        let mut a = Gf2Matrix::zeros(self.num_vertices, self.edges.len());
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            a.set(i, e, true);
            a.set(j, e, true);
        }
        a
    }

    /// Per-vertex degree parities of the subgraph `b`.
    pub fn parity_vector(&self, b: &Gf2Vector) -> Result<Gf2Vector> {
        self.check_edge_vector(b, "subgraph vector")?;
        let mut alpha = Gf2Vector::zeros(self.num_vertices);
        for e in b.ones_indices() {
            let (i, j) = self.edges[e];
            alpha.flip(i);
            alpha.flip(j);
        }
        Ok(alpha)
    }

    /// Number of edges of `b` incident to `vertex`.
    pub fn subgraph_degree(&self, b: &Gf2Vector, vertex: usize) -> Result<usize> {
        self.check_edge_vector(b, "subgraph vector")?;
        if vertex >= self.num_vertices {
            return Err(Error::IndexOutOfRange {
                context: "subgraph degree vertex",
                index: vertex,
                bound: self.num_vertices,
            });
        }
        Ok(b
            .ones_indices()
            .filter(|&e| {
                let (i, j) = self.edges[e];
                i == vertex || j == vertex
            })
            .count())
    }

    /// Component label of every vertex, labels dense from 0 in first-seen order.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut label = vec![usize::MAX; self.num_vertices];
        let mut next = 0;
        (0..self.num_vertices)
            .map(|v| {
                let root = find(&mut parent, v);
                if label[root] == usize::MAX {
                    label[root] = next;
                    next += 1;
                }
                label[root]
            })
            .collect()
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Dimension of the cycle space, computed as the GF(2) nullity of the incidence matrix.
    pub fn cycle_space_dimension(&self) -> usize {
        self.cycle_basis().dim()
    }

    pub fn cycle_basis(&self) -> KernelBasis {
        KernelBasis::of(&self.incidence_matrix())
    }

    /// Adds an always-up spin bonded to every vertex, for a uniform-magnitude field.
    ///
    /// The new spin is vertex `|V|`; the new edges `(v, |V|)` follow the original
    /// edges in vertex order and carry `field_signs[v]` as their bond bit.
    pub fn augment_star(&self, w: &BondConfig, field_signs: &Gf2Vector) -> Result<(Graph, BondConfig)> {
        self.check_edge_vector(w.bits(), "bond configuration")?;
        if field_signs.len() != self.num_vertices {
            return Err(Error::mismatch("field signs", self.num_vertices, field_signs.len()));
        }
        let center = self.num_vertices;
        let mut edges = self.edges.clone();
        edges.extend((0..self.num_vertices).map(|v| (v, center)));
        let mut bits = w.bits().to_bits();
        bits.extend(field_signs.to_bits());
        let graph = Graph::new(self.num_vertices + 1, edges)?;
        Ok((graph, BondConfig(Gf2Vector::from_bits(&bits)?)))
    }

    /// Gauge transform: flip the spins in `v` and the bonds with exactly one flipped endpoint.
    pub fn gauge_transform(&self, w: &BondConfig, v: &Gf2Vector) -> Result<BondConfig> {
        self.check_edge_vector(w.bits(), "bond configuration")?;
        let flips = self.incidence_matrix().transpose_matvec(v)?;
        Ok(BondConfig(w.bits().xor(&flips)?))
    }

    /// Renames vertex `v` to `perm[v]`, keeping edge order.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.num_vertices {
            return Err(Error::mismatch("vertex permutation", self.num_vertices, perm.len()));
        }
        let edges = self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        Graph::new(self.num_vertices, edges)
    }

    pub(crate) fn check_edge_vector(&self, b: &Gf2Vector, context: &'static str) -> Result<()> {
        if b.len() != self.edges.len() {
            return Err(Error::mismatch(context, self.edges.len(), b.len()));
        }
        Ok(())
    }
}
