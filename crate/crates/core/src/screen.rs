//! Gradient screening of the full Pauli pool.
//!
//! For a real Hamiltonian written as `sum_i (sum_j c_j Z_j) X_i`, a pool
//! element `P` has a nonzero first derivative `|dE/dtau|` only when it
//! carries an odd number of Y factors and its x-string equals one of the
//! `X_i`. Every such element of group `i` shares the magnitude
//! `|sum_j c_j lambda_j|`, where `lambda_j` is the eigenvalue of `Z_j` on the
//! reference. Screening is therefore one pass over the grouped terms.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hamiltonian::{IsingGrouping, PauliHamiltonian, ReferenceState};
use crate::pauli::PauliProduct;

/// Partitions with gradient at or below this value are treated as zero.
pub const DEFAULT_GRADIENT_FLOOR: f64 = 1e-10;

/// The `2^(N-1)` odd-y pool elements sharing `x_string`, all with gradient
/// magnitude `gradient`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientPartition {
    pub x_string: BitString,
    pub gradient: f64,
}

/// Nonzero-gradient partitions, by descending gradient then ascending
/// x-string.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartitionTable {
    partitions: Vec<GradientPartition>,
}

impl PartitionTable {
    fn from_unsorted(mut partitions: Vec<GradientPartition>) -> Self {
        partitions.sort_by(|a, b| {
            b.gradient
                .total_cmp(&a.gradient)
                .then_with(|| a.x_string.cmp(&b.x_string))
        });
        Self { partitions }
    }

    pub fn partitions(&self) -> &[GradientPartition] {
        &self.partitions
    }

    pub fn top(&self, p: usize) -> &[GradientPartition] {
        &self.partitions[..p.min(self.partitions.len())]
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Sum of all partition gradients, the convergence measure.
    pub fn grad_norm(&self) -> f64 {
        self.partitions.iter().map(|p| p.gradient).sum()
    }

    pub fn find(&self, x_string: &BitString) -> Option<&GradientPartition> {
        self.partitions.iter().find(|p| &p.x_string == x_string)
    }
}

/// Screens with the default gradient floor.
pub fn screen(h: &PauliHamiltonian, reference: &ReferenceState) -> Result<PartitionTable> {
    screen_grouping(&h.ising_grouping(), reference, DEFAULT_GRADIENT_FLOOR)
}

pub fn screen_grouping(
    grouping: &IsingGrouping,
    reference: &ReferenceState,
    gradient_floor: f64,
) -> Result<PartitionTable> {
    check_reference(grouping.n_qubits(), reference)?;
    let mut partitions = Vec::new();
    for group in grouping.groups() {
        if group.x_string.is_zero() {
            continue;
        }
        let mut sum = 0.0;
        for (idx, m) in group.members.iter().enumerate() {
            if m.imaginary {
                return Err(Error::ComplexCoefficient {
                    label: group.label(idx).to_string(),
                });
            }
            sum += m.coeff * reference.z_eigenvalue(&m.z_string);
        }
        let gradient = sum.abs();
        if gradient > gradient_floor {
            partitions.push(GradientPartition {
                x_string: group.x_string.clone(),
                gradient,
            });
        }
    }
    Ok(PartitionTable::from_unsorted(partitions))
}

fn check_reference(n_qubits: usize, reference: &ReferenceState) -> Result<()> {
    if reference.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: reference.n_qubits(),
        });
    }
    Ok(())
}

fn check_generator(n_qubits: usize, p: &PauliProduct) -> Result<()> {
    if p.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: p.n_qubits(),
        });
    }
    if p.is_identity() {
        return Err(Error::IdentityGenerator);
    }
    Ok(())
}

/// `|dE/dtau|` at `tau = 0` for generator `p`, by the partition rule.
pub fn gradient_of(h: &PauliHamiltonian, reference: &ReferenceState, p: &PauliProduct) -> Result<f64> {
    check_generator(h.n_qubits(), p)?;
    check_reference(h.n_qubits(), reference)?;
    if !p.y_parity() {
        return Ok(0.0);
    }
    let grouping = h.ising_grouping();
    let table = screen_grouping(&grouping, reference, 0.0)?;
    Ok(table.find(p.x_bits()).map_or(0.0, |part| part.gradient))
}

/// Signed derivative `dE/dtau = -(i/2) <ref|[H, P]|ref> = Im <ref|H P|ref>`
/// at `tau = 0`.
///
/// Only terms sharing `p`'s x-string can contribute, so the sum runs over
/// that group alone.
pub fn signed_gradient(
    grouping: &IsingGrouping,
    reference: &ReferenceState,
    p: &PauliProduct,
) -> Result<f64> {
    check_generator(grouping.n_qubits(), p)?;
    check_reference(grouping.n_qubits(), reference)?;
    let Some(group) = grouping.group(p.x_bits()) else {
        return Ok(0.0);
    };
    let mut sum = 0.0;
    for (term, coeff) in group.terms() {
        let prod = term.multiply_unchecked(p);
        debug_assert!(prod.label.is_diagonal());
        // Im(i^k): only odd k (anticommuting pairs) contribute
        let im = match prod.phase_exponent {
            1 => 1.0,
            3 => -1.0,
            _ => continue,
        };
        sum += coeff * im * reference.z_eigenvalue(prod.label.z_bits());
    }
    Ok(sum)
}

/// Y on the lowest set qubit of `x_string`, X on the other set qubits.
pub fn canonical_element(x_string: &BitString) -> Result<PauliProduct> {
    let first = x_string.first_one().ok_or(Error::ZeroXString)?;
    let mut z = BitString::zeros(x_string.len());
    z.set(first, true);
    PauliProduct::from_bits(x_string.clone(), z)
}
