//! Incidence matrices and top-degree Z/2 cohomology of complexes with a
//! complete lower skeleton.
//!
//! Matrices are indexed by their row degree: `incidence_matrix(n, j, ..)`
//! has one row per `j`-face and one column per selected `(j + 1)`-face.
//! For a `k`-complex, `beta^{k-1}` uses the upper matrix `j = k - 1`
//! (columns = present `k`-faces) and the complete lower matrix `j = k - 2`.
//! Degree `j = -1` is the reduced row: a single all-ones row over the
//! vertices, used only when `k = 1`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::complex::{binomial, boundary_ranks_into, for_each_face, unrank_into, FaceRank, SimplicialComplexK};
use crate::error::{invalid, Result};
use crate::gf2::{BitMatrix, BitMatrixBuilder, BitVector};

/// A Z/2-valued function on the `degree`-faces of `[0, n)`, indexed by
/// colex rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    n: usize,
    degree: usize,
    values: BitVector,
}

impl Cochain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Cochain {
            n,
            degree,
            values: BitVector::zeros(binomial(n, degree + 1)),
        }
    }

    pub fn from_values(n: usize, degree: usize, values: BitVector) -> Result<Self> {
        let expected = binomial(n, degree + 1);
        if values.len() != expected {
            return invalid(format!(
                "a degree-{degree} cochain on {n} vertices has {expected} values, got {}",
                values.len()
            ));
        }
        Ok(Cochain { n, degree, values })
    }

    /// Indicator of a set of faces (repeats cancel).
    pub fn indicator(n: usize, degree: usize, faces: &[FaceRank]) -> Result<Self> {
        let len = binomial(n, degree + 1);
        if let Some(r) = faces.iter().find(|r| r.0 >= len) {
            return invalid(format!("face rank {} out of range {len}", r.0));
        }
        let positions: Vec<usize> = faces.iter().map(|r| r.0).collect();
        Ok(Cochain {
            n,
            degree,
            values: BitVector::from_positions(len, &positions),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &BitVector {
        &self.values
    }

    pub fn get(&self, rank: FaceRank) -> bool {
        self.values.get(rank.0)
    }

    pub fn support(&self) -> Vec<FaceRank> {
        self.values.iter_ones().map(FaceRank).collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.count_ones()
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if (self.n, self.degree) != (other.n, other.degree) {
            return invalid("cochains live on different face sets");
        }
        let mut values = self.values.clone();
        values.xor_assign(&other.values);
        Ok(Cochain { values, ..*self })
    }
}

/// Which `(j + 1)`-faces become columns of an incidence matrix.
#[derive(Clone, Copy, Debug)]
pub enum FaceSelection<'a> {
    All,
    /// Must be sorted ascending; columns follow this order.
    Ranks(&'a [FaceRank]),
}

fn selected_columns(n: usize, j: isize, selection: FaceSelection<'_>) -> Result<Vec<usize>> {
    let col_size = (j + 2) as usize;
    let total = binomial(n, col_size);
    match selection {
        FaceSelection::All => Ok((0..total).collect()),
        FaceSelection::Ranks(ranks) => {
            if let Some(r) = ranks.iter().find(|r| r.0 >= total) {
                return invalid(format!(
                    "rank {} out of range: C({n}, {col_size}) = {total}",
                    r.0
                ));
            }
            if ranks.windows(2).any(|w| w[0] >= w[1]) {
                return invalid("selected ranks must be strictly increasing");
            }
            Ok(ranks.iter().map(|r| r.0).collect())
        }
    }
}

/// Rows are all `j`-faces, columns the selected `(j + 1)`-faces; an entry
/// is 1 iff the row face is contained in the column face. `j = -1` gives
/// the single all-ones reduced row.
pub fn incidence_matrix(n: usize, j: isize, selection: FaceSelection<'_>) -> Result<BitMatrix> {
    if j < -1 {
        return invalid(format!("row degree {j} below -1"));
    }
    let cols = selected_columns(n, j, selection)?;
    let row_count = binomial(n, (j + 1) as usize);
    let mut b = BitMatrixBuilder::new(row_count, cols.len());
    if j == -1 {
        for c in 0..cols.len() {
            b.set(0, c);
        }
        return Ok(b.build());
    }
    let size = (j + 2) as usize;
    let mut vs = vec![0; size];
    let mut bd = vec![0; size];
    for (c, &rank) in cols.iter().enumerate() {
        unrank_into(rank, n, &mut vs);
        boundary_ranks_into(&vs, &mut bd);
        for &r in &bd {
            b.set(r, c);
        }
    }
    Ok(b.build())
}

/// Transpose of [`incidence_matrix`] for the upper matrix: one row per
/// present face holding its boundary. Rank is unchanged; this orientation
/// keeps each row's bits below its highest boundary face, which is what the
/// row eliminator exploits.
fn boundary_rows(complex: &SimplicialComplexK) -> BitMatrix {
    let (n, k) = (complex.n(), complex.k());
    let mut b = BitMatrixBuilder::new(complex.num_faces(), binomial(n, k));
    let mut vs = vec![0; k + 1];
    let mut bd = vec![0; k + 1];
    for (row, rank) in complex.faces().iter().enumerate() {
        unrank_into(rank.0, n, &mut vs);
        boundary_ranks_into(&vs, &mut bd);
        for &c in &bd {
            b.set(row, c);
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiResult {
    pub beta: usize,
    pub rank_upper: usize,
    pub rank_lower: usize,
}

/// `beta^{k-1} = C(n, k) - rank(upper) - rank(lower)`.
pub fn betti_top(complex: &SimplicialComplexK) -> BettiResult {
    let rank_upper = boundary_rows(complex).rank();
    let rank_lower = rank_complete_lower(complex.n(), complex.k());
    let dim = complex.num_lower_faces();
    assert!(rank_upper + rank_lower <= dim, "rank exceeds cochain dimension");
    BettiResult {
        beta: dim - rank_upper - rank_lower,
        rank_upper,
        rank_lower,
    }
}

fn lower_rank_cache() -> &'static RwLock<HashMap<(usize, usize), usize>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), usize>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Rank of the complete incidence matrix of row degree `k - 2`, cached per
/// `(n, k)`.
pub fn rank_complete_lower(n: usize, k: usize) -> usize {
    assert!(k >= 1, "k must be at least 1");
    if let Some(&r) = lower_rank_cache().read().unwrap().get(&(n, k)) {
        return r;
    }
    let rank = incidence_matrix(n, k as isize - 2, FaceSelection::All)
        .expect("complete selection is always valid")
        .rank();
    lower_rank_cache().write().unwrap().insert((n, k), rank);
    rank
}

fn check_cochain_for(f: &Cochain, complex: &SimplicialComplexK) -> Result<()> {
    if f.n != complex.n() || f.degree + 1 != complex.k() {
        return invalid(format!(
            "cochain of degree {} on {} vertices does not match a {}-complex on {} vertices",
            f.degree,
            f.n,
            complex.k(),
            complex.n()
        ));
    }
    Ok(())
}

/// Whether `f` sums to zero over the boundary of every present top face.
pub fn is_cocycle(f: &Cochain, complex: &SimplicialComplexK) -> Result<bool> {
    check_cochain_for(f, complex)?;
    let k = complex.k();
    let mut vs = vec![0; k + 1];
    let mut bd = vec![0; k + 1];
    for rank in complex.faces() {
        unrank_into(rank.0, complex.n(), &mut vs);
        boundary_ranks_into(&vs, &mut bd);
        if bd.iter().filter(|&&r| f.values.get(r)).count() % 2 == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `f` lies in the row space of the complete incidence matrix one
/// degree down. The complete skeleton makes this independent of any
/// complex.
pub fn is_coboundary(f: &Cochain) -> bool {
    let lower = incidence_matrix(f.n, f.degree as isize - 1, FaceSelection::All)
        .expect("complete selection is always valid");
    lower
        .in_row_space(&f.values)
        .expect("cochain length matches the complete skeleton")
}

/// The coboundary of a `degree`-cochain given by its support ranks.
pub fn coboundary(f: &Cochain) -> Cochain {
    let (n, d) = (f.n, f.degree);
    let mut out = BitVector::zeros(binomial(n, d + 2));
    let mut bd = vec![0; d + 2];
    for_each_face(n, d + 2, |rank, vs| {
        boundary_ranks_into(vs, &mut bd);
        if bd.iter().filter(|&&r| f.values.get(r)).count() % 2 == 1 {
            out.set(rank, true);
        }
    });
    Cochain {
        n,
        degree: d + 1,
        values: out,
    }
}
