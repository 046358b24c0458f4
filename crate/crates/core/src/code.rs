//! The CSS code built on the lattice: vertex checks (`h_z`) and oct checks
//! (`h_x`), with qubits on edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::lattice::FccLattice;

#[derive(Debug, Clone)]
pub struct CssCode {
    lattice: FccLattice,
    h_z: BinaryMatrix,
    h_x: BinaryMatrix,
    rank_z: usize,
    rank_x: usize,
}

impl CssCode {
    /// Builds both check matrices and checks every structural claim about
    /// them, failing with the first violated one.
    pub fn new(lattice: FccLattice) -> Result<Self> {
        let n = lattice.num_edges();
        let mut h_z = BinaryMatrix::zeros(lattice.num_nodes(), n);
        for (e, &(i, j)) in lattice.edges().iter().enumerate() {
            h_z.set(i, e, true);
            h_z.set(j, e, true);
        }

        let mut h_x = BinaryMatrix::zeros(lattice.num_octs(), n);
        for (o, nbs) in lattice.octs().iter().enumerate() {
            for (e, &(i, j)) in lattice.edges().iter().enumerate() {
                if nbs.contains(&i) && nbs.contains(&j) {
                    h_x.set(o, e, true);
                }
            }
        }

        let rank_z = h_z.rank();
        let rank_x = h_x.rank();
        let code = Self {
            lattice,
            h_z,
            h_x,
            rank_z,
            rank_x,
        };

        let report = code.verify();
        if let Some(claim) = report.failures().into_iter().next() {
            return Err(Error::Construction(claim));
        }
        Ok(code)
    }

    pub fn from_size(size: usize) -> Result<Self> {
        Self::new(FccLattice::new(size)?)
    }

    pub fn lattice(&self) -> &FccLattice {
        &self.lattice
    }

    /// Vertex checks: row `v` covers the 12 edges incident to node `v`.
    pub fn h_z(&self) -> &BinaryMatrix {
        &self.h_z
    }

    /// Oct checks: row `o` covers the 12 edges among void `o`'s 6 nodes.
    pub fn h_x(&self) -> &BinaryMatrix {
        &self.h_x
    }

    pub fn n(&self) -> usize {
        self.h_z.cols()
    }

    pub fn rank_z(&self) -> usize {
        self.rank_z
    }

    pub fn rank_x(&self) -> usize {
        self.rank_x
    }

    pub fn k(&self) -> usize {
        self.n() - self.rank_z - self.rank_x
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// `2L³ + 2`, the count left after one global relation per check type.
    pub fn predicted_k(&self) -> usize {
        2 * self.lattice.size().pow(3) + 2
    }

    pub fn verify(&self) -> VerificationReport {
        let css_valid = self
            .h_x
            .mat_mul_mod2(&self.h_z)
            .map(|m| m.is_zero())
            .unwrap_or(false);
        let (z_global, x_global) = self.rank_deficiency_check();
        let z = MatrixStats::of(&self.h_z, self.rank_z);
        let x = MatrixStats::of(&self.h_x, self.rank_x);
        let k = self.k();
        let predicted_k = self.predicted_k();
        VerificationReport {
            lattice_size: self.lattice.size(),
            n: self.n(),
            css_valid,
            h_z: z,
            h_x: x,
            k,
            rate: self.rate(),
            predicted_k,
            k_matches_prediction: k == predicted_k,
            z_global_relation: z_global,
            x_global_relation: x_global,
        }
    }

    /// Whether the sum of all rows vanishes and the rank is exactly one
    /// below the row count, for `h_z` and `h_x` respectively.
    pub fn rank_deficiency_check(&self) -> (bool, bool) {
        let check = |h: &BinaryMatrix, rank: usize| {
            let sum_zero = h.col_weights().iter().all(|w| w % 2 == 0);
            sum_zero && rank + 1 == h.rows()
        };
        (check(&self.h_z, self.rank_z), check(&self.h_x, self.rank_x))
    }

    /// One line per row: the row index followed by its sorted column indices.
    pub fn sparse_text(h: &BinaryMatrix) -> String {
        let mut out = String::new();
        for r in 0..h.rows() {
            out.push_str(&r.to_string());
            for c in h.row_support(r) {
                out.push(' ');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixStats {
    pub rows: usize,
    pub rank: usize,
    pub min_row_weight: usize,
    pub max_row_weight: usize,
    pub min_col_weight: usize,
    pub max_col_weight: usize,
}

impl MatrixStats {
    fn of(h: &BinaryMatrix, rank: usize) -> Self {
        let rw = h.row_weights();
        let cw = h.col_weights();
        Self {
            rows: h.rows(),
            rank,
            min_row_weight: rw.iter().copied().min().unwrap_or(0),
            max_row_weight: rw.iter().copied().max().unwrap_or(0),
            min_col_weight: cw.iter().copied().min().unwrap_or(0),
            max_col_weight: cw.iter().copied().max().unwrap_or(0),
        }
    }

    fn uniform(&self, row: usize, col: usize) -> bool {
        self.min_row_weight == row
            && self.max_row_weight == row
            && self.min_col_weight == col
            && self.max_col_weight == col
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(rename = "L")]
    pub lattice_size: usize,
    pub n: usize,
    pub css_valid: bool,
    pub h_z: MatrixStats,
    pub h_x: MatrixStats,
    pub k: usize,
    pub rate: f64,
    pub predicted_k: usize,
    pub k_matches_prediction: bool,
    pub z_global_relation: bool,
    pub x_global_relation: bool,
}

impl VerificationReport {
    /// Human-readable list of every claim that does not hold.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.css_valid {
            out.push("H_X * H_Z^T != 0 over GF(2)".to_string());
        }
        for (name, s) in [("H_Z", &self.h_z), ("H_X", &self.h_x)] {
            if !s.uniform(12, 2) {
                out.push(format!(
                    "{name} weights not uniform: rows {}..{}, cols {}..{} (expected 12 and 2)",
                    s.min_row_weight, s.max_row_weight, s.min_col_weight, s.max_col_weight
                ));
            }
        }
        if !self.k_matches_prediction {
            out.push(format!("k = {} but 2L^3+2 = {}", self.k, self.predicted_k));
        }
        if !self.z_global_relation {
            out.push("H_Z rank is not rows - 1".to_string());
        }
        if !self.x_global_relation {
            out.push("H_X rank is not rows - 1".to_string());
        }
        out
    }

    pub fn all_hold(&self) -> bool {
        self.failures().is_empty()
    }
}
