mod common;

use common::{brute_min_pairing, floyd_distances, XorShift};
use fcc_qec::decoder::{Decoder, Syndrome};
use fcc_qec::{BitVec, CssCode, Side};
use proptest::prelude::*;

#[test]
fn matching_cost_equals_brute_force_minimum() {
    let code = CssCode::from_size(4).unwrap();
    let dec = Decoder::new(&code);
    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
    for side in [Side::Vertex, Side::Oct] {
        let dist = floyd_distances(code.lattice(), side);
        let checks = dec.graph(side).node_count();
        for trial in 0..300 {
            let m = 1 + trial % 5;
            let defects = rng.distinct(checks, 2 * m);
            let s = Syndrome {
                side,
                bits: BitVec::from_indices(checks, defects.iter().copied()),
            };
            let out = dec.decode(&s).unwrap();
            let mut sorted = defects.clone();
            sorted.sort_unstable();
            let cost: Vec<Vec<u64>> = sorted
                .iter()
                .map(|&a| sorted.iter().map(|&b| dist[a][b]).collect())
                .collect();
            assert_eq!(out.matching_cost as u64, brute_min_pairing(&cost), "{side:?} {sorted:?}");
            assert_eq!(dec.extract_syndrome(&out.correction, side).unwrap(), s);
        }
    }
}

#[test]
fn single_errors_corrected_at_six() {
    let code = CssCode::from_size(6).unwrap();
    let dec = Decoder::new(&code);
    for q in 0..code.n() {
        let e = BitVec::from_indices(code.n(), [q]);
        for side in [Side::Vertex, Side::Oct] {
            let c = dec.correct(&e, side).unwrap();
            assert!(c.residual.is_zero(), "qubit {q} {side:?}");
            assert!(!c.residual_is_logical);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn syndromes_even_and_corrections_bounded(qubits in prop::collection::vec(0usize..192, 0..12)) {
        let code = CssCode::from_size(4).unwrap();
        let dec = Decoder::new(&code);
        let e = BitVec::from_indices(192, qubits);
        for side in [Side::Vertex, Side::Oct] {
            let s = dec.extract_syndrome(&e, side).unwrap();
            prop_assert_eq!(s.bits.weight() % 2, 0);
            let c = dec.correct(&e, side).unwrap();
            prop_assert!(c.outcome.matching_cost <= e.weight());
            prop_assert!(dec.extract_syndrome(&c.residual, side).unwrap().bits.is_zero());
        }
    }
}
