use std::collections::HashMap;

use lhz_core::layout::coordinate_of;
use lhz_core::{build_layout, QubitId};

/// Rank over GF(2) of rows packed into u128 bitsets.
fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r] >> bit & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn qubit_count_and_coordinates() {
    for n in 2..=12 {
        let l = build_layout(n).unwrap();
        assert_eq!(l.num_qubits(), n * (n + 1) / 2);
        let mut seen = HashMap::new();
        for q in l.qubits() {
            let c = coordinate_of(q);
            assert!(seen.insert((c.x, c.y), *q).is_none(), "{q} overlaps");
        }
    }
}

#[test]
fn constraints_are_even_local_and_span_the_code() {
    for n in 2..=12 {
        let l = build_layout(n).unwrap();
        let k = l.num_qubits();
        let index: HashMap<QubitId, usize> = l.qubits().iter().enumerate().map(|(i, q)| (*q, i)).collect();
        assert_eq!(l.constraints().len(), k - n, "n={n}");
        let mut rows = Vec::new();
        for c in l.constraints() {
            let mut mult = vec![0usize; n];
            for q in &c.qubits {
                for i in q.logical_indices() {
                    mult[i] += 1;
                }
            }
            assert!(mult.iter().all(|m| m % 2 == 0), "n={n} constraint {} is odd", c.id);
            let cs: Vec<_> = c.qubits.iter().map(coordinate_of).collect();
            for a in &cs {
                for b in &cs {
                    assert!((a.x - b.x).abs() <= 2 && (a.y - b.y).abs() <= 2, "n={n} constraint {} not compact", c.id);
                }
            }
            rows.push(c.qubits.iter().fold(0u128, |acc, q| acc | 1 << index[q]));
        }
        // even-multiplicity subsets form a space of dimension K - n
        assert_eq!(gf2_rank(rows), k - n, "n={n}");
    }
}

#[test]
fn lines_are_diagonal_walks_through_the_data_qubit() {
    for n in 2..=10 {
        let l = build_layout(n).unwrap();
        for line in l.lines() {
            let i = line.logical_index;
            assert_eq!(line.path.len(), n);
            assert_eq!(line.path[i], QubitId::Data(i));
            assert!(line.path.iter().all(|q| q.contains_index(i)));
            for w in line.path.windows(2) {
                assert!(l.are_neighbors(&w[0], &w[1]).unwrap(), "{} {}", w[0], w[1]);
            }
        }
    }
}
