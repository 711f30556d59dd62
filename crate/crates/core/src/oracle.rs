//! Exhaustive ground truth for small complexes.
//!
//! Everything here enumerates cochains as bitmasks over the `(k - 1)`-faces
//! and never touches the elimination code in [`crate::gf2`], so it can be
//! used to check [`crate::cohomology`] and [`crate::process`].
//!
//! The cocycle survey lists every nontrivial cocycle of a complex together
//! with the quantities used by the extremal-cocycle argument: the support
//! hypergraph, its maximum hypervertex degree, and `X(f)`, the number of
//! `k`-faces of the complete complex whose boundary meets the support an
//! odd number of times. For `k = 2` the support hypergraph is the graph
//! `G(f)` on the vertices; for `k = 3` its hypervertices are edges and its
//! hyperedges are the support triangles.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::Cochain;
use crate::complex::{binomial, boundary_ranks_into, for_each_face, unrank_into, FaceRank, SimplicialComplexK};
use crate::connectivity::UnionFind;
use crate::error::{invalid, Error, Result};
use crate::gf2::BitVector;

/// Largest number of `(k - 1)`-faces (and of `(k - 2)`-faces) that
/// [`brute_betti`] will enumerate cochains over.
pub const MAX_BRUTE_FACES: usize = 24;
/// Largest vertex count accepted by the cocycle survey.
pub const MAX_SURVEY_VERTICES: usize = 6;

/// Boundary of every `size`-face of `[0, n)` as a bitmask over the
/// `(size - 1)`-faces.
fn boundary_masks(n: usize, size: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(binomial(n, size));
    let mut bd = vec![0; size];
    for_each_face(n, size, |_, vs| {
        boundary_ranks_into(vs, &mut bd);
        out.push(bd.iter().fold(0u32, |m, &r| m | 1 << r));
    });
    out
}

fn present_boundary_masks(complex: &SimplicialComplexK) -> Vec<u32> {
    let k = complex.k();
    let mut vs = vec![0; k + 1];
    let mut bd = vec![0; k + 1];
    complex
        .faces()
        .iter()
        .map(|r| {
            unrank_into(r.0, complex.n(), &mut vs);
            boundary_ranks_into(&vs, &mut bd);
            bd.iter().fold(0u32, |m, &b| m | 1 << b)
        })
        .collect()
}

#[inline]
fn is_cocycle_mask(f: u32, present: &[u32]) -> bool {
    present.iter().all(|&b| (f & b).count_ones().is_multiple_of(2))
}

/// All distinct `(k - 1)`-coboundaries, as masks. For `k = 1` the reduced
/// convention gives `{0, all ones}`.
fn coboundary_masks(n: usize, k: usize) -> Result<Vec<u32>> {
    let dim = binomial(n, k);
    let lower_dim = if k == 1 { 1 } else { binomial(n, k - 1) };
    if lower_dim > MAX_BRUTE_FACES {
        return Err(Error::Capacity {
            what: "lower cochain enumeration",
            needed: lower_dim,
            limit: MAX_BRUTE_FACES,
        });
    }
    // lower faces contained in each (k-1)-face
    let faces_lower: Vec<u32> = if k == 1 {
        vec![1; dim]
    } else {
        boundary_masks(n, k)
    };
    let mut seen = vec![0u64; (1usize << dim).div_ceil(64)];
    let mut out = Vec::new();
    for h in 0u32..(1u32 << lower_dim) {
        let image = faces_lower
            .iter()
            .enumerate()
            .filter(|(_, &m)| (h & m).count_ones() % 2 == 1)
            .fold(0u32, |acc, (a, _)| acc | 1 << a);
        let (w, b) = (image as usize / 64, image % 64);
        if seen[w] >> b & 1 == 0 {
            seen[w] |= 1 << b;
            out.push(image);
        }
    }
    Ok(out)
}

fn check_brute_capacity(complex: &SimplicialComplexK) -> Result<usize> {
    let dim = complex.num_lower_faces();
    if dim > MAX_BRUTE_FACES {
        return Err(Error::Capacity {
            what: "cochain enumeration",
            needed: dim,
            limit: MAX_BRUTE_FACES,
        });
    }
    Ok(dim)
}

/// `dim H^{k-1}` by counting cocycles and coboundaries:
/// `log2 |Z| - log2 |B|`.
pub fn brute_betti(complex: &SimplicialComplexK) -> Result<usize> {
    let dim = check_brute_capacity(complex)?;
    let cobounds = coboundary_masks(complex.n(), complex.k())?;
    let present = present_boundary_masks(complex);
    let cocycles = (0u32..(1u32 << dim))
        .filter(|&f| is_cocycle_mask(f, &present))
        .count();
    assert!(cocycles.is_power_of_two() && cobounds.len().is_power_of_two());
    let (z, b) = (cocycles.trailing_zeros(), cobounds.len().trailing_zeros());
    assert!(z >= b, "coboundaries must be cocycles");
    Ok((z - b) as usize)
}

/// Number of `(d + 1)`-faces of the complete complex whose boundary holds
/// an odd number of support faces of the degree-`d` cochain `f`.
pub fn x_count(f: &Cochain) -> usize {
    let size = f.degree() + 2;
    let mut bd = vec![0; size];
    let mut count = 0;
    for_each_face(f.n(), size, |_, vs| {
        boundary_ranks_into(vs, &mut bd);
        if bd.iter().filter(|&&r| f.get(FaceRank(r))).count() % 2 == 1 {
            count += 1;
        }
    });
    count
}

/// The support of a cochain of degree `d >= 1` viewed as a hypergraph on
/// the `(d - 1)`-faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportGraph {
    pub n: usize,
    pub edges: Vec<FaceRank>,
    /// Indexed by hypervertex rank; for `d = 1` these are vertex degrees.
    pub degree_sequence: Vec<usize>,
    /// Components containing at least one support face.
    pub num_nontrivial_components: usize,
}

impl SupportGraph {
    pub fn of(f: &Cochain) -> Result<Self> {
        let d = f.degree();
        if d == 0 {
            return invalid("support hypergraph needs a cochain of degree at least 1");
        }
        let n = f.n();
        let mut degree_sequence = vec![0; binomial(n, d)];
        let mut uf = UnionFind::new(degree_sequence.len());
        let edges = f.support();
        let mut vs = vec![0; d + 1];
        let mut bd = vec![0; d + 1];
        for e in &edges {
            unrank_into(e.0, n, &mut vs);
            boundary_ranks_into(&vs, &mut bd);
            for &hv in &bd {
                degree_sequence[hv] += 1;
            }
            for &hv in &bd[1..] {
                uf.union(bd[0], hv);
            }
        }
        let mut roots: Vec<usize> = (0..degree_sequence.len())
            .filter(|&hv| degree_sequence[hv] > 0)
            .map(|hv| uf.find(hv))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(SupportGraph {
            n,
            edges,
            degree_sequence,
            num_nontrivial_components: roots.len(),
        })
    }

    pub fn max_degree(&self) -> usize {
        self.degree_sequence.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleSurveyRecord {
    pub n: usize,
    pub k: usize,
    /// Bitmask over `(k - 1)`-face ranks.
    pub support_mask: u32,
    pub support_size: usize,
    pub max_degree: usize,
    pub x_count: usize,
    pub num_nontrivial_components: usize,
    /// No cochain in `f + B^{k-1}` has smaller support.
    pub is_minimal_in_coset: bool,
    /// Support size equals the smallest over all nontrivial cocycles of the
    /// complex.
    pub is_globally_minimal: bool,
}

impl CocycleSurveyRecord {
    pub fn support(&self) -> Vec<FaceRank> {
        (0..32)
            .filter(|b| self.support_mask >> b & 1 == 1)
            .map(FaceRank)
            .collect()
    }

    pub fn cochain(&self) -> Cochain {
        mask_cochain(self.n, self.k, self.support_mask)
    }
}

fn mask_cochain(n: usize, k: usize, mask: u32) -> Cochain {
    let len = binomial(n, k);
    let positions: Vec<usize> = (0..len).filter(|b| mask >> b & 1 == 1).collect();
    Cochain::from_values(n, k - 1, BitVector::from_positions(len, &positions))
        .expect("mask fits the face count")
}

/// Fully reduced basis of the coboundary space; `reduce` maps each coset
/// of `B` to a unique representative.
struct CosetReducer {
    basis: Vec<(u32, u32)>,
}

impl CosetReducer {
    fn new(vectors: &[u32]) -> Self {
        let mut basis: Vec<(u32, u32)> = Vec::new();
        for &v in vectors {
            let mut v = v;
            for &(p, b) in &basis {
                if v & p != 0 {
                    v ^= b;
                }
            }
            if v == 0 {
                continue;
            }
            let p = 1u32 << (31 - v.leading_zeros());
            for entry in basis.iter_mut() {
                if entry.1 & p != 0 {
                    entry.1 ^= v;
                }
            }
            basis.push((p, v));
        }
        CosetReducer { basis }
    }

    fn reduce(&self, mut v: u32) -> u32 {
        for &(p, b) in &self.basis {
            if v & p != 0 {
                v ^= b;
            }
        }
        v
    }
}

/// Calls `visit` for every nontrivial cocycle of `complex`, in increasing
/// mask order.
pub fn survey_cocycles(complex: &SimplicialComplexK, mut visit: impl FnMut(CocycleSurveyRecord)) -> Result<()> {
    let (n, k) = (complex.n(), complex.k());
    if !(2..=3).contains(&k) {
        return invalid(format!("cocycle survey supports k = 2 or 3, got {k}"));
    }
    if n > MAX_SURVEY_VERTICES {
        return Err(Error::Capacity {
            what: "cocycle survey vertices",
            needed: n,
            limit: MAX_SURVEY_VERTICES,
        });
    }
    let dim = check_brute_capacity(complex)?;
    let present = present_boundary_masks(complex);
    let cobounds = coboundary_masks(n, k)?;
    let reducer = CosetReducer::new(&cobounds);

    let cocycles: Vec<u32> = (0u32..(1u32 << dim))
        .filter(|&f| is_cocycle_mask(f, &present))
        .collect();
    let mut coset_min: HashMap<u32, u32> = HashMap::new();
    for &f in &cocycles {
        let c = reducer.reduce(f);
        let entry = coset_min.entry(c).or_insert(u32::MAX);
        *entry = (*entry).min(f.count_ones());
    }
    let global_min = coset_min
        .iter()
        .filter(|(c, _)| **c != 0)
        .map(|(_, m)| *m)
        .min();
    let Some(global_min) = global_min else {
        return Ok(());
    };

    let all_faces = boundary_masks(n, k + 1);
    for f in cocycles {
        let canon = reducer.reduce(f);
        if canon == 0 {
            continue;
        }
        let size = f.count_ones();
        let cochain = mask_cochain(n, k, f);
        let graph = SupportGraph::of(&cochain)?;
        visit(CocycleSurveyRecord {
            n,
            k,
            support_mask: f,
            support_size: size as usize,
            max_degree: graph.max_degree(),
            x_count: all_faces.iter().filter(|&&b| (f & b).count_ones() % 2 == 1).count(),
            num_nontrivial_components: graph.num_nontrivial_components,
            is_minimal_in_coset: size == coset_min[&canon],
            is_globally_minimal: size == global_min,
        });
    }
    Ok(())
}

pub fn minimal_cocycle_survey(complex: &SimplicialComplexK) -> Result<Vec<CocycleSurveyRecord>> {
    let mut out = Vec::new();
    survey_cocycles(complex, |r| out.push(r))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Maximum hypervertex degree above `floor((n - k + 1) / 2)`.
    DegreeBound,
    /// `X(f) < n * m / (k + 1)`.
    OddFaceBound,
    /// More than one nontrivial component.
    MultipleComponents,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureViolation {
    pub kind: ViolationKind,
    pub record: CocycleSurveyRecord,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub coset_minimal_checked: usize,
    pub globally_minimal_checked: usize,
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn merge(&mut self, other: StructureReport) {
        self.coset_minimal_checked += other.coset_minimal_checked;
        self.globally_minimal_checked += other.globally_minimal_checked;
        self.violations.extend(other.violations);
    }
}

impl StructureReport {
    /// Degree and odd-face bounds are checked on coset-minimal records, the
    /// single-component property on globally minimal ones.
    pub fn observe(&mut self, r: &CocycleSurveyRecord) {
        let mut flag = |kind| {
            self.violations.push(StructureViolation {
                kind,
                record: r.clone(),
            })
        };
        if r.is_minimal_in_coset {
            if r.max_degree > (r.n + 1 - r.k) / 2 {
                flag(ViolationKind::DegreeBound);
            }
            if r.x_count * (r.k + 1) < r.n * r.support_size {
                flag(ViolationKind::OddFaceBound);
            }
        }
        if r.is_globally_minimal && r.num_nontrivial_components > 1 {
            flag(ViolationKind::MultipleComponents);
        }
        if r.is_minimal_in_coset {
            self.coset_minimal_checked += 1;
        }
        if r.is_globally_minimal {
            self.globally_minimal_checked += 1;
        }
    }
}

pub fn check_structure_bounds(records: &[CocycleSurveyRecord]) -> StructureReport {
    let mut report = StructureReport::default();
    for r in records {
        report.observe(r);
    }
    report
}

/// One JSON object per line.
pub fn write_survey_jsonl<W: std::io::Write>(records: &[CocycleSurveyRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
