//! Exact distance certificate.
//!
//! Lower bound: no column of a check matrix is zero and no two columns are
//! equal, so no weight-1 or weight-2 vector is in its kernel. Upper bound:
//! a weight-3 vector of the deterministic kernel basis that is not a
//! product of the opposite checks.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::code::CssCode;
use crate::gf2::{BinaryMatrix, BitVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckSide {
    /// Kernel of `h_z` modulo the row space of `h_x`.
    Z,
    /// Kernel of `h_x` modulo the row space of `h_z`.
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowWeightCount {
    pub weight1: u64,
    pub weight2: u64,
    pub pairs_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub side: CheckSide,
    pub n: usize,
    pub kernel_dim: usize,
    pub weight1_kernel_count: u64,
    pub weight2_kernel_count: u64,
    pub pairs_checked: u64,
    pub weight3_logical_count: usize,
    pub kernel_weight_histogram: BTreeMap<usize, usize>,
    pub lower_bound: Option<u32>,
    pub upper_bound: Option<u32>,
    /// Weight-3 logicals over the whole kernel, not just the basis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_weight3_logicals: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceProof {
    #[serde(rename = "L")]
    pub lattice_size: usize,
    pub d_z: Option<u32>,
    pub d_x: Option<u32>,
    pub d: Option<u32>,
    pub z: DistanceReport,
    pub x: DistanceReport,
}

impl DistanceProof {
    /// What prevents the `d = 3` claim, if anything.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in [&self.z, &self.x] {
            if r.lower_bound.is_none() {
                out.push(format!(
                    "{:?} side: {} weight-1 and {} weight-2 kernel vectors",
                    r.side, r.weight1_kernel_count, r.weight2_kernel_count
                ));
            }
            if r.upper_bound.is_none() {
                out.push(format!("{:?} side: no weight-3 logical in the kernel basis", r.side));
            }
        }
        out
    }
}

fn choose2(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Counts zero columns and pairs of identical columns of `h`.
pub fn exhaustive_low_weight_check(h: &BinaryMatrix) -> LowWeightCount {
    let cols = h.transpose();
    let mut weight1 = 0;
    let mut groups: HashMap<&[u64], u64> = HashMap::new();
    for c in 0..cols.rows() {
        if cols.row_weight(c) == 0 {
            weight1 += 1;
        }
        *groups.entry(cols.row_words(c)).or_default() += 1;
    }
    let weight2 = groups.values().map(|&m| m * (m - 1) / 2).sum();
    LowWeightCount {
        weight1,
        weight2,
        pairs_checked: choose2(h.cols()),
    }
}

/// The same counts by testing every weight-1 and weight-2 vector's
/// syndrome directly. Quadratic; kept as the reference for
/// [`exhaustive_low_weight_check`].
pub fn literal_low_weight_check(h: &BinaryMatrix) -> LowWeightCount {
    let n = h.cols();
    let cols: Vec<BitVec> = h.transpose().row_iter().collect();
    let mut weight1 = 0;
    for i in 0..n {
        let e = BitVec::from_indices(n, [i]);
        if h.mul_vec(&e).expect("width matches").is_zero() {
            weight1 += 1;
        }
    }
    let mut weight2 = 0;
    let mut pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            if (&cols[i] ^ &cols[j]).is_zero() {
                weight2 += 1;
            }
        }
    }
    LowWeightCount {
        weight1,
        weight2,
        pairs_checked: pairs,
    }
}

/// Weight-3 rows of `kernel_basis(h_check)` outside `row_space(h_other)`.
pub fn weight3_logical_vectors(h_check: &BinaryMatrix, h_other: &BinaryMatrix) -> Vec<BitVec> {
    let rs = h_other.row_space();
    h_check
        .kernel_basis()
        .row_iter()
        .filter(|v| v.weight() == 3)
        .filter(|v| !rs.in_row_space(v).expect("same width"))
        .collect()
}

pub fn weight3_logicals(h_check: &BinaryMatrix, h_other: &BinaryMatrix) -> usize {
    weight3_logical_vectors(h_check, h_other).len()
}

pub fn kernel_weight_histogram(h: &BinaryMatrix) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in h.kernel_basis().row_iter() {
        *hist.entry(v.weight()).or_default() += 1;
    }
    hist
}

/// Every weight-3 vector in `ker(h_check)` that is not in
/// `row_space(h_other)`, by sweeping all column triples.
pub fn full_weight3_logicals(h_check: &BinaryMatrix, h_other: &BinaryMatrix) -> u64 {
    let n = h_check.cols();
    let cols = h_check.transpose();
    let rs = h_other.row_space();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let ci = cols.row_words(i);
            let mut count = 0u64;
            let mut pair = vec![0u64; ci.len()];
            for j in i + 1..n {
                for (p, (a, b)) in pair.iter_mut().zip(ci.iter().zip(cols.row_words(j))) {
                    *p = a ^ b;
                }
                for k in j + 1..n {
                    if pair.iter().zip(cols.row_words(k)).all(|(p, c)| p == c) {
                        let v = BitVec::from_indices(n, [i, j, k]);
                        if !rs.in_row_space(&v).expect("same width") {
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .sum()
}

pub fn side_report(h_check: &BinaryMatrix, h_other: &BinaryMatrix, side: CheckSide, full_w3: bool) -> DistanceReport {
    let low = exhaustive_low_weight_check(h_check);
    let weight3 = weight3_logicals(h_check, h_other);
    let hist = kernel_weight_histogram(h_check);
    let kernel_dim = hist.values().sum();
    DistanceReport {
        side,
        n: h_check.cols(),
        kernel_dim,
        weight1_kernel_count: low.weight1,
        weight2_kernel_count: low.weight2,
        pairs_checked: low.pairs_checked,
        weight3_logical_count: weight3,
        kernel_weight_histogram: hist,
        lower_bound: (low.weight1 == 0 && low.weight2 == 0).then_some(3),
        upper_bound: (weight3 > 0).then_some(3),
        full_weight3_logicals: full_w3.then(|| full_weight3_logicals(h_check, h_other)),
    }
}

pub fn prove_distance(code: &CssCode, full_w3: bool) -> DistanceProof {
    let (z, x) = rayon::join(
        || side_report(code.h_z(), code.h_x(), CheckSide::Z, full_w3),
        || side_report(code.h_x(), code.h_z(), CheckSide::X, full_w3),
    );
    let exact = |r: &DistanceReport| match (r.lower_bound, r.upper_bound) {
        (Some(lo), Some(hi)) if lo == hi => Some(lo),
        _ => None,
    };
    let d_z = exact(&z);
    let d_x = exact(&x);
    let d = match (d_z, d_x) {
        (Some(a), Some(b)) => Some(a.min(b)),
        _ => None,
    };
    DistanceProof {
        lattice_size: code.lattice().size(),
        d_z,
        d_x,
        d,
        z,
        x,
    }
}
