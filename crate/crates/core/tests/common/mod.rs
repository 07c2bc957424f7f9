#![allow(dead_code)]

use std::path::PathBuf;

use iqcc_core::{HamiltonianFile, PauliHamiltonian, PauliProduct, ReferenceState, DEFAULT_PRUNE_EPS};
use rand::Rng;

pub fn fixture(name: &str) -> HamiltonianFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    HamiltonianFile::read(&path, DEFAULT_PRUNE_EPS).expect("fixture loads")
}

pub fn random_label<R: Rng>(rng: &mut R, n: usize) -> String {
    const CHARS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    (0..n).map(|_| CHARS[rng.gen_range(0..4)]).collect()
}

/// A random Pauli product with an even number of Y factors, so that a real
/// coefficient gives a real symmetric matrix.
pub fn random_real_label<R: Rng>(rng: &mut R, n: usize) -> PauliProduct {
    loop {
        let p: PauliProduct = random_label(rng, n).parse().unwrap();
        if !p.is_identity() && p.y_count().is_multiple_of(2) {
            return p;
        }
    }
}

/// `n_terms` is capped at the number of distinct non-identity real labels.
pub fn random_real_hamiltonian<R: Rng>(rng: &mut R, n: usize, n_terms: usize) -> PauliHamiltonian {
    // labels with an even number of Y: (4^n + 2^n) / 2, identity included
    let n_terms = n_terms.min(((1usize << (2 * n)) + (1usize << n)) / 2 - 1);
    let mut h = PauliHamiltonian::new(n, DEFAULT_PRUNE_EPS);
    while h.len() < n_terms {
        let p = random_real_label(rng, n);
        let c = rng.gen_range(-1.0..1.0);
        if c != 0.0 && !h.contains(&p) {
            h.add_term(p, c).unwrap();
        }
    }
    h
}

pub fn random_reference<R: Rng>(rng: &mut R, n: usize) -> ReferenceState {
    let s: String = (0..n).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect();
    ReferenceState::parse(&s).unwrap()
}

/// A random generator with an odd number of Y factors.
pub fn random_odd_y<R: Rng>(rng: &mut R, n: usize) -> PauliProduct {
    loop {
        let p: PauliProduct = random_label(rng, n).parse().unwrap();
        if p.y_count() % 2 == 1 {
            return p;
        }
    }
}
