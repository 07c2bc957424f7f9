//! Dense-matrix oracles for small systems.
//!
//! Everything here works from the character form of each Pauli label
//! (`I`, `X`, `Y`, `Z` per qubit) and plain complex matrices, so none of it
//! shares code with the symplectic fast paths it is used to check. Qubit 0
//! is the leftmost tensor factor, i.e. the most significant bit of a basis
//! index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{PauliHamiltonian, ReferenceState};
use crate::pauli::PauliProduct;

pub const MAX_DENSE_QUBITS: usize = 14;
pub const MAX_SPECTRUM_QUBITS: usize = 12;
pub const MAX_SWEEP_QUBITS: usize = 6;
/// Largest dimension diagonalized densely by [`ground_energy`].
const DENSE_EIGEN_DIM: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn guard(what: &'static str, n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::SizeGuard {
            what,
            n_qubits,
            limit,
        });
    }
    Ok(())
}

/// The 2x2 matrix of one Pauli character.
pub fn single_qubit_matrix(c: char) -> Result<DMatrix<Complex64>> {
    let m = match c {
        'I' => [ONE, ZERO, ZERO, ONE],
        'X' => [ZERO, ONE, ONE, ZERO],
        'Y' => [ZERO, -I, I, ZERO],
        'Z' => [ONE, ZERO, ZERO, -ONE],
        _ => {
            return Err(Error::ParsePauli {
                text: c.to_string(),
                reason: "expected one of I, X, Y, Z".into(),
            })
        }
    };
    Ok(DMatrix::from_row_slice(2, 2, &m))
}

/// Kronecker product of single-qubit matrices, qubit 0 leftmost.
pub fn pauli_matrix(label: &str) -> Result<DMatrix<Complex64>> {
    guard("dense Pauli matrix", label.chars().count(), MAX_DENSE_QUBITS)?;
    let mut m = DMatrix::from_element(1, 1, ONE);
    for c in label.chars() {
        m = m.kronecker(&single_qubit_matrix(c)?);
    }
    Ok(m)
}

/// Action of one Pauli string on basis states: `P|b> = phase(b) |b ^ flip>`.
#[derive(Clone, Copy, Debug)]
struct BasisAction {
    flip: usize,
    sign_mask: usize,
    y_phase: Complex64,
    coeff: f64,
}

impl BasisAction {
    fn new(label: &str, coeff: f64) -> Result<Self> {
        let n = label.chars().count();
        let (mut flip, mut sign_mask, mut n_y) = (0usize, 0usize, 0u32);
        for (q, c) in label.chars().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match c {
                'I' => {}
                'X' => flip |= bit,
                // Y|b> = i (-1)^b |1-b>
                'Y' => {
                    flip |= bit;
                    sign_mask |= bit;
                    n_y += 1;
                }
                'Z' => sign_mask |= bit,
                _ => {
                    return Err(Error::ParsePauli {
                        text: label.to_string(),
                        reason: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        Ok(Self {
            flip,
            sign_mask,
            y_phase: I.powu(n_y),
            coeff,
        })
    }

    /// Returns `(row, value)` with `value = <row| c P |col>`.
    fn apply(&self, col: usize) -> (usize, Complex64) {
        let sign = if (col & self.sign_mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        (col ^ self.flip, self.y_phase * (sign * self.coeff))
    }
}

fn actions(h: &PauliHamiltonian) -> Result<Vec<BasisAction>> {
    let mut out: Vec<BasisAction> = h
        .sorted_terms()
        .into_iter()
        .map(|(p, c)| BasisAction::new(&p.to_label_string(), c))
        .collect::<Result<_>>()?;
    if h.constant() != 0.0 {
        out.push(BasisAction::new(&"I".repeat(h.n_qubits()), h.constant())?);
    }
    Ok(out)
}

/// Dense matrix of `h`, including its constant.
pub fn to_matrix(h: &PauliHamiltonian) -> Result<DMatrix<Complex64>> {
    guard("dense matrix", h.n_qubits(), MAX_DENSE_QUBITS)?;
    let dim = 1usize << h.n_qubits();
    let acts = actions(h)?;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        for a in &acts {
            let (row, v) = a.apply(col);
            m[(row, col)] += v;
        }
    }
    Ok(m)
}

/// Basis index of a reference state, qubit 0 most significant.
pub fn basis_index(reference: &ReferenceState) -> usize {
    let bits = reference.bits();
    (0..bits.len()).fold(0usize, |acc, q| (acc << 1) | bits.get(q) as usize)
}

/// `<ref|H|ref>` from the dense matrix.
pub fn dense_expectation(h: &PauliHamiltonian, reference: &ReferenceState) -> Result<f64> {
    let m = to_matrix(h)?;
    let k = basis_index(reference);
    Ok(m[(k, k)].re)
}

/// Matrix-free `y = H x`.
fn apply_h(acts: &[BasisAction], x: &[Complex64], y: &mut [Complex64]) {
    y.par_iter_mut().enumerate().for_each(|(row, out)| {
        // P is its own inverse up to phase, so the column feeding `row`
        // is `row ^ flip`.
        let mut acc = ZERO;
        for a in acts {
            let col = row ^ a.flip;
            let (r, v) = a.apply(col);
            debug_assert_eq!(r, row);
            acc += v * x[col];
        }
        *out = acc;
    });
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenvalue by Lanczos with full reorthogonalization.
fn lanczos_ground(acts: &[BasisAction], dim: usize, seed: u64) -> f64 {
    let max_steps = dim.min(400);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![ZERO; dim];
    let mut last = f64::INFINITY;
    for step in 0..max_steps {
        apply_h(acts, &basis[step], &mut w);
        let a = dot(&basis[step], &w).re;
        alpha.push(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let ritz = tridiagonal_min(&alpha, &beta);
        let b = norm(&w);
        if b < 1e-12 || (step > 8 && (last - ritz).abs() < 1e-13 * ritz.abs().max(1.0)) {
            return ritz;
        }
        last = ritz;
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    last
}

fn tridiagonal_min(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t.symmetric_eigenvalues().min()
}

/// Exact ground-state energy of `h`, constant included.
pub fn ground_energy(h: &PauliHamiltonian) -> Result<f64> {
    guard("ground energy", h.n_qubits(), MAX_DENSE_QUBITS)?;
    let dim = 1usize << h.n_qubits();
    if dim <= DENSE_EIGEN_DIM {
        return Ok(to_matrix(h)?.symmetric_eigenvalues().min());
    }
    Ok(lanczos_ground(&actions(h)?, dim, 0x5eed))
}

/// The full spectrum in ascending order.
pub fn spectrum(h: &PauliHamiltonian) -> Result<Vec<f64>> {
    guard("full spectrum", h.n_qubits(), MAX_SPECTRUM_QUBITS)?;
    let mut ev: Vec<f64> = to_matrix(h)?.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// The `k` lowest eigenvalues, ascending.
pub fn lowest_eigenvalues(h: &PauliHamiltonian, k: usize) -> Result<Vec<f64>> {
    let mut ev = spectrum(h)?;
    ev.truncate(k);
    Ok(ev)
}

/// Whether sorted spectra agree elementwise within `tol`.
pub fn spectra_match(a: &PauliHamiltonian, b: &PauliHamiltonian, tol: f64) -> Result<bool> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    Ok(max_spectral_deviation(a, b)? <= tol)
}

/// Largest elementwise difference of the sorted spectra.
pub fn max_spectral_deviation(a: &PauliHamiltonian, b: &PauliHamiltonian) -> Result<f64> {
    let (ea, eb) = (spectrum(a)?, spectrum(b)?);
    if ea.len() != eb.len() {
        return Err(Error::DimensionMismatch {
            expected: ea.len(),
            found: eb.len(),
        });
    }
    Ok(ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Every non-identity Pauli label on `n` qubits, in base-4 order over `IXYZ`.
pub fn all_pauli_labels(n: usize) -> Result<Vec<String>> {
    guard("Pauli sweep", n, MAX_SWEEP_QUBITS)?;
    const CHARS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    Ok((1..1usize << (2 * n))
        .map(|mut k| {
            let mut s = vec!['I'; n];
            for q in (0..n).rev() {
                s[q] = CHARS[k & 3];
                k >>= 2;
            }
            s.into_iter().collect()
        })
        .collect())
}

/// `|<ref|[H, P]|ref>| / 2` for every non-identity `P`, from dense matrices.
pub fn brute_force_gradients(
    h: &PauliHamiltonian,
    reference: &ReferenceState,
) -> Result<Vec<(String, f64)>> {
    guard("gradient sweep", h.n_qubits(), MAX_SWEEP_QUBITS)?;
    let hm = to_matrix(h)?;
    let k = basis_index(reference);
    all_pauli_labels(h.n_qubits())?
        .into_par_iter()
        .map(|label| {
            let pm = pauli_matrix(&label)?;
            let hp = hm.row(k).transpose().dot(&pm.column(k));
            let ph = pm.row(k).transpose().dot(&hm.column(k));
            Ok((label, (hp - ph).norm() / 2.0))
        })
        .collect()
}

/// `dE/dtau` at zero for `e^{i tau P/2} H e^{-i tau P/2}`, from dense matrices.
pub fn dense_signed_gradient(
    h: &PauliHamiltonian,
    reference: &ReferenceState,
    generator: &PauliProduct,
) -> Result<f64> {
    let hm = to_matrix(h)?;
    let pm = pauli_matrix(&generator.to_label_string())?;
    let k = basis_index(reference);
    let comm = &pm * &hm - &hm * &pm;
    // (i/2) <[P, H]>
    Ok((I * comm[(k, k)] / 2.0).re)
}

/// `<ref| e^{i tau P/2} H e^{-i tau P/2} |ref>` from dense matrices.
pub fn dense_dressed_energy(
    h: &PauliHamiltonian,
    reference: &ReferenceState,
    generator: &PauliProduct,
    tau: f64,
) -> Result<f64> {
    let hm = to_matrix(h)?;
    let pm = pauli_matrix(&generator.to_label_string())?;
    let dim = hm.nrows();
    let u = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new((tau / 2.0).cos(), 0.0)
        - pm * (I * (tau / 2.0).sin());
    let mut e = DVector::from_element(dim, ZERO);
    e[basis_index(reference)] = ONE;
    let psi = &u * e;
    Ok(psi.dotc(&(&hm * &psi)).re)
}

/// Character-level product of two labels: `(k, label)` with `a b = i^k label`.
pub fn naive_product(a: &str, b: &str) -> Result<(u8, String)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let mut k = 0u8;
    let mut out = String::with_capacity(a.len());
    for (x, y) in a.chars().zip(b.chars()) {
        let (phase, c) = match (x, y) {
            ('I', c) | (c, 'I') => (0, c),
            (p, q) if p == q => (0, 'I'),
            ('X', 'Y') => (1, 'Z'),
            ('Y', 'Z') => (1, 'X'),
            ('Z', 'X') => (1, 'Y'),
            ('Y', 'X') => (3, 'Z'),
            ('Z', 'Y') => (3, 'X'),
            ('X', 'Z') => (3, 'Y'),
            _ => {
                return Err(Error::ParsePauli {
                    text: format!("{a} * {b}"),
                    reason: "unexpected character".into(),
                })
            }
        };
        k = (k + phase) % 4;
        out.push(c);
    }
    Ok((k, out))
}

/// Growth of `generator` by string-level multiplication: anticommuting terms
/// whose product label is absent from `h`.
pub fn naive_growth(h: &PauliHamiltonian, generator: &str) -> Result<usize> {
    let labels: std::collections::BTreeSet<String> =
        h.iter().map(|(p, _)| p.to_label_string()).collect();
    let mut new = std::collections::BTreeSet::new();
    for t in &labels {
        let (k, prod) = naive_product(t, generator)?;
        if k % 2 == 1 && !labels.contains(&prod) {
            new.insert(prod);
        }
    }
    Ok(new.len())
}
