//! Faces, colex ranking and the random complex models.
//!
//! A `j`-face on `n` vertices is a strictly increasing list of `j + 1`
//! vertices drawn from `[0, n)`. Faces of a fixed size are indexed densely
//! by their colexicographic rank, `sum_i C(v_i, i + 1)`, which does not
//! depend on `n`: adding vertices never renumbers existing faces.
//!
//! A [`SimplicialComplexK`] stores only its top-dimensional faces. The
//! `(k - 1)`-skeleton is complete and never materialised.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Binomial coefficient `C(n, r)`; zero when `r > n`.
pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial coefficient overflows usize")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    /// Validates that `vertices` is non-empty, strictly increasing and
    /// bounded by `n`.
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        if vertices.is_empty() {
            return invalid("a face needs at least one vertex");
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] >= w[1]) {
            return invalid(format!(
                "face vertices must be strictly increasing, found {} before {}",
                w[0], w[1]
            ));
        }
        let last = *vertices.last().unwrap();
        if last >= n {
            return invalid(format!("vertex {last} out of range for n = {n}"));
        }
        Ok(Face(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Colex index of a face among all faces of the same size.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceRank(pub usize);

impl FaceRank {
    pub fn get(self) -> usize {
        self.0
    }
}

pub fn face_rank(face: &Face) -> FaceRank {
    FaceRank(rank_of_sorted(face.vertices()))
}

/// Colex rank of a strictly increasing vertex list. No validation.
#[inline]
pub(crate) fn rank_of_sorted(vertices: &[usize]) -> usize {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v, i + 1))
        .sum()
}

/// Inverse of [`face_rank`] for faces with `size` vertices on `n` vertices.
pub fn face_unrank(rank: FaceRank, size: usize, n: usize) -> Result<Face> {
    if size == 0 {
        return invalid("face size must be at least 1");
    }
    let total = binomial(n, size);
    if rank.0 >= total {
        return invalid(format!(
            "rank {} out of range: there are {total} faces of size {size} on {n} vertices",
            rank.0
        ));
    }
    let mut out = vec![0; size];
    unrank_into(rank.0, n, &mut out);
    Ok(Face::from_sorted(out))
}

/// Writes the vertices of the face with the given colex rank into `out`,
/// whose length is the face size. The rank must be valid for `n`.
pub(crate) fn unrank_into(mut rank: usize, n: usize, out: &mut [usize]) {
    let mut hi = n;
    for i in (1..=out.len()).rev() {
        // largest v < hi with C(v, i) <= rank
        let mut v = hi - 1;
        while binomial(v, i) > rank {
            v -= 1;
        }
        rank -= binomial(v, i);
        out[i - 1] = v;
        hi = v;
    }
}

/// Writes the colex ranks of the codimension-one faces of `vertices` into
/// `out`, in deletion-index order.
#[inline]
pub(crate) fn boundary_ranks_into(vertices: &[usize], out: &mut [usize]) {
    debug_assert_eq!(vertices.len(), out.len());
    let len = vertices.len();
    // with vertex i deleted, vertices before i keep their position and
    // vertices after i move down one slot
    let shifted: usize = vertices
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &v)| binomial(v, j))
        .sum();
    let mut prefix = 0;
    let mut suffix = shifted;
    for i in 0..len {
        if i > 0 {
            prefix += binomial(vertices[i - 1], i);
            suffix -= binomial(vertices[i], i);
        }
        out[i] = prefix + suffix;
    }
}

/// The faces obtained by deleting one vertex, in deletion-index order.
pub fn boundary_faces(face: &Face) -> Result<Vec<Face>> {
    if face.len() < 2 {
        return invalid("a face with fewer than two vertices has no boundary faces");
    }
    Ok((0..face.len())
        .map(|i| {
            let mut vs = face.vertices().to_vec();
            vs.remove(i);
            Face::from_sorted(vs)
        })
        .collect())
}

/// Advances `comb` to the next subset of `[0, n)` in colex order.
/// Returns false when `comb` was the last one.
pub(crate) fn next_colex(comb: &mut [usize], n: usize) -> bool {
    let len = comb.len();
    for i in 0..len {
        let limit = if i + 1 < len { comb[i + 1] } else { n };
        if comb[i] + 1 < limit {
            comb[i] += 1;
            for (j, c) in comb.iter_mut().enumerate().take(i) {
                *c = j;
            }
            return true;
        }
    }
    false
}

/// Calls `f(rank, vertices)` for every face of `size` vertices on `[0, n)`
/// in increasing rank order.
pub(crate) fn for_each_face(n: usize, size: usize, mut f: impl FnMut(usize, &[usize])) {
    if size > n {
        return;
    }
    if size == 0 {
        f(0, &[]);
        return;
    }
    let mut comb: Vec<usize> = (0..size).collect();
    let mut rank = 0;
    loop {
        f(rank, &comb);
        rank += 1;
        if !next_colex(&mut comb, n) {
            break;
        }
    }
}

/// A `k`-dimensional complex on `n` vertices with complete `(k - 1)`-skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexK {
    n: usize,
    k: usize,
    faces: Vec<FaceRank>,
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    n: usize,
    k: usize,
    faces: Vec<Vec<usize>>,
}

impl SimplicialComplexK {
    /// Builds a complex from top-face ranks. Ranks are sorted; duplicates
    /// are rejected.
    pub fn new(n: usize, k: usize, faces: impl IntoIterator<Item = FaceRank>) -> Result<Self> {
        check_dims(n, k)?;
        let total = binomial(n, k + 1);
        let mut faces: Vec<FaceRank> = faces.into_iter().collect();
        faces.sort_unstable();
        if let Some(w) = faces.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("duplicate k-face rank {}", w[0].0));
        }
        if let Some(last) = faces.last() {
            if last.0 >= total {
                return invalid(format!(
                    "k-face rank {} out of range (C({n}, {}) = {total})",
                    last.0,
                    k + 1
                ));
            }
        }
        Ok(SimplicialComplexK { n, k, faces })
    }

    pub fn from_faces(n: usize, k: usize, faces: &[Face]) -> Result<Self> {
        for f in faces {
            if f.len() != k + 1 {
                return invalid(format!("face {f} is not a {k}-face"));
            }
            if f.vertices().iter().any(|&v| v >= n) {
                return invalid(format!("face {f} has a vertex outside [0, {n})"));
            }
        }
        Self::new(n, k, faces.iter().map(face_rank))
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty())
    }

    /// The complex containing every possible `k`-face.
    pub fn full(n: usize, k: usize) -> Result<Self> {
        check_dims(n, k)?;
        Self::new(n, k, (0..binomial(n, k + 1)).map(FaceRank))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Present `k`-faces in increasing rank order.
    pub fn faces(&self) -> &[FaceRank] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// `C(n, k + 1)`
    pub fn num_possible_faces(&self) -> usize {
        binomial(self.n, self.k + 1)
    }

    /// `C(n, k)`, the size of the complete `(k - 1)`-skeleton.
    pub fn num_lower_faces(&self) -> usize {
        binomial(self.n, self.k)
    }

    pub fn contains(&self, rank: FaceRank) -> bool {
        self.faces.binary_search(&rank).is_ok()
    }

    pub fn face(&self, rank: FaceRank) -> Face {
        let mut vs = vec![0; self.k + 1];
        unrank_into(rank.0, self.n, &mut vs);
        Face::from_sorted(vs)
    }

    pub fn iter_faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces.iter().map(|&r| self.face(r))
    }

    /// Number of present `k`-faces containing vertex `v`.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.iter_faces().filter(|f| f.contains(v)).count()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ComplexFile {
            n: self.n,
            k: self.k,
            faces: self.iter_faces().map(|f| f.0).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s)?;
        check_dims(file.n, file.k)?;
        let faces = file
            .faces
            .into_iter()
            .map(|vs| Face::new(vs, file.n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_faces(file.n, file.k, &faces)
    }
}

fn check_dims(n: usize, k: usize) -> Result<()> {
    if k < 1 {
        return invalid("top dimension k must be at least 1");
    }
    if n <= k {
        return invalid(format!("need n > k, got n = {n}, k = {k}"));
    }
    Ok(())
}

/// Largest number of potential `k`-faces the samplers will enumerate.
pub const MAX_TOP_FACES: usize = 1 << 28;

/// Fails with a capacity error when `C(n, k + 1)` exceeds [`MAX_TOP_FACES`].
pub fn check_capacity(n: usize, k: usize) -> Result<()> {
    let r = (k + 1).min(n.saturating_sub(k + 1));
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > MAX_TOP_FACES as u128 {
            return Err(Error::Capacity {
                what: "potential k-faces",
                needed: usize::try_from(acc).unwrap_or(usize::MAX),
                limit: MAX_TOP_FACES,
            });
        }
    }
    Ok(())
}

/// Samples the Bernoulli model: each `k`-face present independently with
/// probability `p`.
pub fn sample_ynp<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<SimplicialComplexK> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    check_dims(n, k)?;
    check_capacity(n, k)?;
    let total = binomial(n, k + 1);
    let faces: Vec<FaceRank> = (0..total)
        .filter(|_| rng.gen_bool(p))
        .map(FaceRank)
        .collect();
    Ok(SimplicialComplexK { n, k, faces })
}

/// Birth order of all `k`-faces; its length-`m` prefix is a uniform
/// complex with `m` faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthOrder {
    n: usize,
    k: usize,
    order: Vec<FaceRank>,
}

#[derive(Serialize, Deserialize)]
struct GrowthOrderFile {
    n: usize,
    k: usize,
    order: Vec<usize>,
}

impl GrowthOrder {
    /// Validates that `order` is a permutation of all `C(n, k + 1)` ranks.
    pub fn new(n: usize, k: usize, order: Vec<FaceRank>) -> Result<Self> {
        check_dims(n, k)?;
        let total = binomial(n, k + 1);
        if order.len() != total {
            return invalid(format!(
                "growth order has {} entries, expected C({n}, {}) = {total}",
                order.len(),
                k + 1
            ));
        }
        let mut seen = vec![false; total];
        for r in &order {
            match seen.get_mut(r.0) {
                None => return invalid(format!("rank {} out of range", r.0)),
                Some(true) => return invalid(format!("rank {} repeated", r.0)),
                Some(s) => *s = true,
            }
        }
        Ok(GrowthOrder { n, k, order })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> &[FaceRank] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The complex formed by the first `m` faces.
    pub fn prefix(&self, m: usize) -> SimplicialComplexK {
        let m = m.min(self.order.len());
        let mut faces = self.order[..m].to_vec();
        faces.sort_unstable();
        SimplicialComplexK {
            n: self.n,
            k: self.k,
            faces,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = GrowthOrderFile {
            n: self.n,
            k: self.k,
            order: self.order.iter().map(|r| r.0).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GrowthOrderFile = serde_json::from_str(s)?;
        Self::new(file.n, file.k, file.order.into_iter().map(FaceRank).collect())
    }
}

/// Fisher-Yates shuffle of every `k`-face rank.
pub fn sample_growth_order<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<GrowthOrder> {
    check_dims(n, k)?;
    check_capacity(n, k)?;
    let mut order: Vec<FaceRank> = (0..binomial(n, k + 1)).map(FaceRank).collect();
    order.shuffle(rng);
    Ok(GrowthOrder { n, k, order })
}

/// Vertex link: the `(k - 1)`-complex on `n - 1` vertices whose top faces
/// are `sigma \ {v}` for present `sigma` containing `v`, relabelled by the
/// order-preserving map `[0, n) \ {v} -> [0, n - 1)`.
pub fn link(complex: &SimplicialComplexK, v: usize) -> Result<SimplicialComplexK> {
    let (n, k) = (complex.n, complex.k);
    if v >= n {
        return invalid(format!("vertex {v} out of range for n = {n}"));
    }
    if k < 2 {
        return Err(Error::InvalidInput(
            "the link of a 1-complex is 0-dimensional and not representable".into(),
        ));
    }
    let mut vs = vec![0; k + 1];
    let mut rest = Vec::with_capacity(k);
    let mut faces = Vec::new();
    for r in &complex.faces {
        unrank_into(r.0, n, &mut vs);
        if vs.binary_search(&v).is_err() {
            continue;
        }
        rest.clear();
        rest.extend(
            vs.iter()
                .filter(|&&u| u != v)
                .map(|&u| if u > v { u - 1 } else { u }),
        );
        faces.push(FaceRank(rank_of_sorted(&rest)));
    }
    SimplicialComplexK::new(n - 1, k - 1, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn face(vs: &[usize], n: usize) -> Face {
        Face::new(vs.to_vec(), n).unwrap()
    }

    /// All `size`-subsets of `[0, n)` listed in colex order by sorting on
    /// the reversed vertex list.
    fn colex_enumeration(n: usize, size: usize) -> Vec<Vec<usize>> {
        let mut all = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == size {
                all.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        all
    }

    #[test]
    fn capacity_guard() {
        assert!(check_capacity(100, 2).is_ok());
        assert!(matches!(check_capacity(2000, 3), Err(Error::Capacity { .. })));
        let mut rng = rand::rngs::mock::StepRng::new(0, 1);
        assert!(matches!(sample_ynp(5000, 2, 0.1, &mut rng), Err(Error::Capacity { .. })));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(100, 3), 161_700);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn rank_matches_enumeration() {
        let list = colex_enumeration(5, 2);
        assert_eq!(list[4], vec![1, 3]);
        for (i, vs) in list.iter().enumerate() {
            assert_eq!(face_rank(&face(vs, 5)), FaceRank(i));
        }
        for n in 1..=8 {
            for size in 1..=n {
                for (i, vs) in colex_enumeration(n, size).iter().enumerate() {
                    assert_eq!(face_unrank(FaceRank(i), size, n).unwrap().vertices(), &vs[..]);
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(face_rank(&face(&[0, 1, 2, 3], 9)), FaceRank(0));
        assert_eq!(face_rank(&face(&[1, 3], 5)), FaceRank(4));
        assert_eq!(face_unrank(FaceRank(0), 3, 6).unwrap(), face(&[0, 1, 2], 6));
        assert_eq!(face_unrank(FaceRank(4), 2, 5).unwrap(), face(&[1, 3], 5));
        assert_eq!(
            face_unrank(FaceRank(binomial(9, 4) - 1), 4, 9).unwrap(),
            face(&[5, 6, 7, 8], 9)
        );
    }

    #[test]
    fn round_trip_three_subsets() {
        for r in 0..binomial(7, 3) {
            let f = face_unrank(FaceRank(r), 3, 7).unwrap();
            assert_eq!(face_rank(&f), FaceRank(r));
        }
    }

    #[test]
    fn malformed_faces_rejected() {
        assert!(Face::new(vec![2, 1], 5).is_err());
        assert!(Face::new(vec![1, 1], 5).is_err());
        assert!(Face::new(vec![0, 5], 5).is_err());
        assert!(Face::new(vec![], 5).is_err());
        assert!(face_unrank(FaceRank(10), 2, 5).is_err());
        assert!(face_unrank(FaceRank(0), 0, 5).is_err());
    }

    #[test]
    fn boundary_examples() {
        let b = boundary_faces(&face(&[0, 1, 2], 3)).unwrap();
        assert_eq!(b, vec![face(&[1, 2], 3), face(&[0, 2], 3), face(&[0, 1], 3)]);
        let b = boundary_faces(&face(&[2, 5], 6)).unwrap();
        assert_eq!(b, vec![face(&[5], 6), face(&[2], 6)]);
        assert!(boundary_faces(&face(&[3], 6)).is_err());
    }

    #[test]
    fn boundary_ranks_agree_with_boundary_faces() {
        for size in 2..=5 {
            for_each_face(9, size, |_, vs| {
                let mut out = vec![0; size];
                boundary_ranks_into(vs, &mut out);
                let faces = boundary_faces(&face(vs, 9)).unwrap();
                assert_eq!(faces.len(), size);
                for (r, f) in out.iter().zip(&faces) {
                    assert_eq!(*r, face_rank(f).0);
                }
            });
        }
    }

    #[test]
    fn for_each_face_is_in_rank_order() {
        let mut count = 0;
        for_each_face(8, 3, |r, vs| {
            assert_eq!(rank_of_sorted(vs), r);
            count += 1;
        });
        assert_eq!(count, binomial(8, 3));
    }

    #[test]
    fn sample_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_ynp(8, 2, 0.0, &mut rng).unwrap().num_faces(), 0);
        assert_eq!(sample_ynp(8, 2, 1.0, &mut rng).unwrap().num_faces(), 56);
        assert!(sample_ynp(8, 2, 1.5, &mut rng).is_err());
        assert!(sample_ynp(8, 2, -0.1, &mut rng).is_err());
        assert!(sample_ynp(2, 2, 0.5, &mut rng).is_err());
    }

    #[test]
    fn sample_is_reproducible() {
        let a = sample_ynp(12, 2, 0.3, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = sample_ynp(12, 2, 0.3, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_face_count() {
        // Binomial(4060, 1/2): mean 2030, sd of the mean over 1000 draws
        // is sqrt(1015) / sqrt(1000).
        let trials = 1000;
        let total: usize = (0..trials)
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                sample_ynp(30, 2, 0.5, &mut rng).unwrap().num_faces()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let sigma = (4060.0f64 * 0.25).sqrt() / (trials as f64).sqrt();
        assert!((mean - 2030.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn growth_order_is_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let order = sample_growth_order(5, 2, &mut rng).unwrap();
        assert_eq!(order.len(), 10);
        let mut sorted: Vec<usize> = order.order().iter().map(|r| r.0).collect();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
        assert!(GrowthOrder::new(5, 2, vec![FaceRank(0); 10]).is_err());
        assert!(GrowthOrder::new(5, 2, vec![FaceRank(0)]).is_err());
    }

    #[test]
    fn growth_order_first_face_uniform() {
        let trials = 4000;
        let hits = (0..trials)
            .filter(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                sample_growth_order(4, 2, &mut rng).unwrap().order()[0] == FaceRank(0)
            })
            .count();
        let freq = hits as f64 / trials as f64;
        let sigma = (0.25f64 * 0.75 / trials as f64).sqrt();
        assert!((freq - 0.25).abs() < 3.0 * sigma, "freq {freq}");
    }

    #[test]
    fn link_examples() {
        let empty = SimplicialComplexK::empty(6, 2).unwrap();
        assert_eq!(link(&empty, 3).unwrap().num_faces(), 0);

        let y = SimplicialComplexK::from_faces(4, 2, &[face(&[0, 1, 2], 4), face(&[0, 1, 3], 4)]).unwrap();
        let lk = link(&y, 0).unwrap();
        assert_eq!((lk.n(), lk.k()), (3, 1));
        let faces: Vec<Face> = lk.iter_faces().collect();
        assert_eq!(faces, vec![face(&[0, 1], 3), face(&[0, 2], 3)]);

        assert!(link(&y, 4).is_err());
        let g = SimplicialComplexK::full(4, 1).unwrap();
        assert!(link(&g, 0).is_err());
    }

    #[test]
    fn link_face_count_is_vertex_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let y = sample_ynp(9, 3, 0.4, &mut rng).unwrap();
            for v in 0..9 {
                assert_eq!(link(&y, v).unwrap().num_faces(), y.vertex_degree(v));
            }
        }
    }

    #[test]
    fn link_face_count_mean() {
        // link(Y, 0) is Y_1(5, 1/2): C(5, 2) = 10 potential edges
        let trials = 2000;
        let total: usize = (0..trials)
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let y = sample_ynp(6, 2, 0.5, &mut rng).unwrap();
                link(&y, 0).unwrap().num_faces()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let sigma = (10.0f64 * 0.25).sqrt() / (trials as f64).sqrt();
        assert!((mean - 5.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y = sample_ynp(7, 2, 0.3, &mut rng).unwrap();
        let text = y.to_json().unwrap();
        assert_eq!(SimplicialComplexK::from_json(&text).unwrap(), y);

        let order = sample_growth_order(6, 2, &mut rng).unwrap();
        assert_eq!(GrowthOrder::from_json(&order.to_json().unwrap()).unwrap(), order);

        let y = SimplicialComplexK::from_json(r#"{"n":4,"k":2,"faces":[[0,1,3]]}"#).unwrap();
        assert_eq!(y.faces(), &[FaceRank(1)]);
        assert!(SimplicialComplexK::from_json(r#"{"n":4,"k":2,"faces":[[1,0,3]]}"#).is_err());
        assert!(SimplicialComplexK::from_json(r#"{"n":4,"k":2,"faces":[[0,1]]}"#).is_err());
        assert!(SimplicialComplexK::from_json(r#"{"n":4,"k":2,"faces":[[0,1,3],[0,1,3]]}"#).is_err());
    }
}
