//! Minimum-weight perfect matching decoder.
//!
//! Each qubit flips exactly two checks of each type, so both check types
//! see errors as chains on a graph: the lattice itself for the vertex
//! checks (`h_z`), and the void graph whose edges are shared qubits for the
//! oct checks (`h_x`). Defects are paired by exact matching on BFS
//! distances and the correction is the XOR of the connecting paths.

use serde::Serialize;

use crate::blossom::min_weight_perfect_matching;
use crate::code::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec};
use crate::lattice::{DefectGraph, Side};

/// One bit per qubit.
pub type ErrorPattern = BitVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    pub side: Side,
    pub bits: BitVec,
}

impl Syndrome {
    pub fn defects(&self) -> Vec<usize> {
        self.bits.ones_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeOutcome {
    #[serde(skip)]
    pub correction: ErrorPattern,
    pub matching_cost: usize,
    /// Matched defect pairs as check indices.
    pub pairs: Vec<(usize, usize)>,
}

/// Result of decoding a known error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub outcome: DecodeOutcome,
    pub residual: ErrorPattern,
    pub residual_is_logical: bool,
}

/// Decoder state shared by all trials on one code. Immutable once built.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    code: &'a CssCode,
    vertex_graph: DefectGraph,
    oct_graph: DefectGraph,
    rowspace_x: BinaryMatrix,
    rowspace_z: BinaryMatrix,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a CssCode) -> Self {
        Self {
            code,
            vertex_graph: DefectGraph::new(code.lattice(), Side::Vertex),
            oct_graph: DefectGraph::new(code.lattice(), Side::Oct),
            rowspace_x: code.h_x().row_space(),
            rowspace_z: code.h_z().row_space(),
        }
    }

    pub fn code(&self) -> &CssCode {
        self.code
    }

    pub fn graph(&self, side: Side) -> &DefectGraph {
        match side {
            Side::Vertex => &self.vertex_graph,
            Side::Oct => &self.oct_graph,
        }
    }

    fn checks(&self, side: Side) -> &BinaryMatrix {
        match side {
            Side::Vertex => self.code.h_z(),
            Side::Oct => self.code.h_x(),
        }
    }

    pub fn extract_syndrome(&self, e: &ErrorPattern, side: Side) -> Result<Syndrome> {
        Ok(Syndrome {
            side,
            bits: self.checks(side).mul_vec(e)?,
        })
    }

    pub fn decode(&self, s: &Syndrome) -> Result<DecodeOutcome> {
        let defects = s.defects();
        if defects.len() % 2 == 1 {
            return Err(Error::OddDefectCount(defects.len()));
        }
        let graph = self.graph(s.side);
        let trees: Vec<_> = defects.iter().map(|&d| graph.bfs(d)).collect();
        let mut cost = vec![vec![0u64; defects.len()]; defects.len()];
        for (i, tree) in trees.iter().enumerate() {
            for (j, &d) in defects.iter().enumerate() {
                let dist = tree.distance(d).ok_or(Error::Disconnected(defects[i], d))?;
                cost[i][j] = dist as u64;
            }
        }

        let mut correction = BitVec::zeros(self.code.n());
        let mut matching_cost = 0;
        let mut pairs = Vec::with_capacity(defects.len() / 2);
        for (i, j) in min_weight_perfect_matching(&cost)? {
            let path = trees[i].path_to(defects[j])?;
            matching_cost += path.distance;
            for q in path.qubit_path {
                correction.flip(q);
            }
            pairs.push((defects[i], defects[j]));
        }
        debug_assert_eq!(self.checks(s.side).mul_vec(&correction).ok().as_ref(), Some(&s.bits));
        Ok(DecodeOutcome {
            correction,
            matching_cost,
            pairs,
        })
    }

    /// Whether a zero-syndrome residual is a nontrivial logical operator,
    /// i.e. not a product of the opposite-type checks.
    pub fn is_logical_failure(&self, residual: &ErrorPattern, side: Side) -> Result<bool> {
        if !self.checks(side).mul_vec(residual)?.is_zero() {
            return Err(Error::NonzeroSyndrome(side.name()));
        }
        let stabilizers = match side {
            Side::Vertex => &self.rowspace_x,
            Side::Oct => &self.rowspace_z,
        };
        Ok(!stabilizers.in_row_space(residual)?)
    }

    /// Syndrome, decode and failure check for a known error on one side.
    pub fn correct(&self, e: &ErrorPattern, side: Side) -> Result<Correction> {
        let s = self.extract_syndrome(e, side)?;
        let outcome = self.decode(&s)?;
        let residual = e ^ &outcome.correction;
        let residual_is_logical = self.is_logical_failure(&residual, side)?;
        Ok(Correction {
            outcome,
            residual,
            residual_is_logical,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::weight3_logical_vectors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code4() -> CssCode {
        CssCode::from_size(4).unwrap()
    }

    #[test]
    fn zero_error() {
        let code = code4();
        let dec = Decoder::new(&code);
        for side in [Side::Vertex, Side::Oct] {
            let c = dec.correct(&BitVec::zeros(192), side).unwrap();
            assert!(c.outcome.correction.is_zero());
            assert_eq!(c.outcome.matching_cost, 0);
            assert!(!c.residual_is_logical);
        }
    }

    #[test]
    fn single_qubit_errors_flip_two_checks_and_are_corrected() {
        let code = code4();
        let dec = Decoder::new(&code);
        for q in 0..code.n() {
            let e = BitVec::from_indices(code.n(), [q]);
            for side in [Side::Vertex, Side::Oct] {
                assert_eq!(dec.extract_syndrome(&e, side).unwrap().bits.weight(), 2);
                let c = dec.correct(&e, side).unwrap();
                assert_eq!(c.outcome.correction, e);
                assert!(c.residual.is_zero());
                assert!(!c.residual_is_logical);
            }
        }
    }

    #[test]
    fn stabilizers_have_zero_syndrome_and_are_trivial() {
        let code = code4();
        let dec = Decoder::new(&code);
        for row in code.h_x().row_iter() {
            assert!(dec.extract_syndrome(&row, Side::Vertex).unwrap().bits.is_zero());
            assert!(!dec.is_logical_failure(&row, Side::Vertex).unwrap());
        }
        for row in code.h_z().row_iter() {
            assert!(!dec.is_logical_failure(&row, Side::Oct).unwrap());
        }
    }

    #[test]
    fn weight3_logicals_are_failures() {
        let code = code4();
        let dec = Decoder::new(&code);
        let z = weight3_logical_vectors(code.h_z(), code.h_x());
        assert_eq!(z.len(), 34);
        for v in &z {
            assert!(dec.is_logical_failure(v, Side::Vertex).unwrap());
        }
        for v in weight3_logical_vectors(code.h_x(), code.h_z()) {
            assert!(dec.is_logical_failure(&v, Side::Oct).unwrap());
        }
    }

    #[test]
    fn nonzero_syndrome_residual_rejected() {
        let code = code4();
        let dec = Decoder::new(&code);
        let e = BitVec::from_indices(192, [0]);
        assert!(matches!(dec.is_logical_failure(&e, Side::Vertex), Err(Error::NonzeroSyndrome(_))));
    }

    #[test]
    fn odd_syndrome_rejected() {
        let code = code4();
        let dec = Decoder::new(&code);
        let s = Syndrome {
            side: Side::Vertex,
            bits: BitVec::from_indices(32, [3]),
        };
        assert_eq!(dec.decode(&s), Err(Error::OddDefectCount(1)));
    }

    #[test]
    fn random_errors_syndrome_match_and_weight_bound() {
        let code = code4();
        let dec = Decoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..10_000 {
            let side = if t % 2 == 0 { Side::Vertex } else { Side::Oct };
            let w = rng.random_range(0..8);
            let e = BitVec::from_indices(192, (0..w).map(|_| rng.random_range(0..192)));
            let s = dec.extract_syndrome(&e, side).unwrap();
            assert_eq!(s.bits.weight() % 2, 0);
            let out = dec.decode(&s).unwrap();
            assert_eq!(dec.extract_syndrome(&out.correction, side).unwrap(), s);
            assert!(out.matching_cost <= e.weight());
            assert!(out.correction.weight() <= e.weight());
        }
    }

    #[test]
    fn decoding_is_deterministic() {
        let code = code4();
        let dec = Decoder::new(&code);
        let e = BitVec::from_indices(192, [1, 17, 40, 41, 99, 150]);
        for side in [Side::Vertex, Side::Oct] {
            let a = dec.correct(&e, side).unwrap();
            let b = dec.correct(&e, side).unwrap();
            assert_eq!(a, b);
        }
    }
}
