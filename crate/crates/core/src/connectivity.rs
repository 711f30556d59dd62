//! Isolated faces and hypergraph connectivity of the `(k - 1)`-faces.

use serde::{Deserialize, Serialize};

use crate::complex::{binomial, boundary_ranks_into, unrank_into, SimplicialComplexK};

/// Disjoint sets over `0..len` with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        assert!(len <= u32::MAX as usize);
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
            sets: len,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns true when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub fn num_sets(&self) -> usize {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// Sizes of all sets, largest first.
    pub fn sizes(&mut self) -> Vec<usize> {
        let mut sizes: Vec<usize> = (0..self.len())
            .filter(|&x| self.parent[x] as usize == x)
            .map(|x| self.size[x] as usize)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub num_components: usize,
    pub isolated_count: usize,
    pub largest_size: usize,
    /// Component sizes, largest first; they sum to `C(n, k)`.
    pub sizes: Vec<usize>,
}

impl ComponentProfile {
    /// One component holding every non-isolated face, plus isolated faces.
    pub fn is_giant_plus_isolated(&self) -> bool {
        let total: usize = self.sizes.iter().sum();
        self.largest_size + self.isolated_count == total
            && (self.largest_size > 1 || self.isolated_count == total)
    }
}

fn for_each_boundary(complex: &SimplicialComplexK, mut f: impl FnMut(&[usize])) {
    let k = complex.k();
    let mut vs = vec![0; k + 1];
    let mut bd = vec![0; k + 1];
    for r in complex.faces() {
        unrank_into(r.0, complex.n(), &mut vs);
        boundary_ranks_into(&vs, &mut bd);
        f(&bd);
    }
}

/// Number of `(k - 1)`-faces in no present `k`-face.
pub fn isolated_count(complex: &SimplicialComplexK) -> usize {
    let mut covered = vec![false; binomial(complex.n(), complex.k())];
    for_each_boundary(complex, |bd| {
        for &r in bd {
            covered[r] = true;
        }
    });
    covered.iter().filter(|c| !**c).count()
}

pub fn components(complex: &SimplicialComplexK) -> ComponentProfile {
    let mut uf = UnionFind::new(binomial(complex.n(), complex.k()));
    for_each_boundary(complex, |bd| {
        for &r in &bd[1..] {
            uf.union(bd[0], r);
        }
    });
    let sizes = uf.sizes();
    // a present k-face always joins k + 1 >= 2 faces, so singletons are
    // exactly the isolated faces
    ComponentProfile {
        num_components: sizes.len(),
        isolated_count: sizes.iter().filter(|&&s| s == 1).count(),
        largest_size: sizes.first().copied().unwrap_or(0),
        sizes,
    }
}

pub fn is_hypergraph_connected(complex: &SimplicialComplexK) -> bool {
    components(complex).num_components == 1
}
