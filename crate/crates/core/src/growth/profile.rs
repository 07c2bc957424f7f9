use super::deterministic::commutator_multiset;
use super::{growth_exact, SearchContext};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::PauliProduct;

/// Largest partition enumerated, `2^24` members.
pub const MAX_PROFILE_MEMBERS: usize = 1 << 24;

/// One member of a partition with its multiplicity and growth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfilePoint {
    pub candidate: PauliProduct,
    pub multiplicity: usize,
    pub growth: usize,
}

/// All `2^(N-1)` odd-y Pauli products with x-string `x_string`, ordered by
/// z-string.
pub fn partition_members(x_string: &BitString) -> Result<Vec<PauliProduct>> {
    let n = x_string.len();
    let pivot = x_string.first_one().ok_or(Error::ZeroXString)?;
    if n > 25 {
        return Err(Error::SizeGuard {
            what: "partition enumeration",
            n_qubits: n,
            limit: 25,
        });
    }
    let x = x_string.to_u64().expect("n <= 25 fits one word");
    let count = 1usize << (n - 1);
    let low = (1u64 << pivot) - 1;
    let mut members = Vec::with_capacity(count);
    for t in 0..count as u64 {
        // free bits everywhere except the pivot, which fixes odd overlap
        let mut z = (t & low) | ((t >> pivot) << (pivot + 1));
        if (z & x).count_ones().is_multiple_of(2) {
            z |= 1 << pivot;
        }
        members.push(PauliProduct::from_bits(
            x_string.clone(),
            BitString::from_u64(n, z),
        )?);
    }
    members.sort_unstable();
    Ok(members)
}

/// Multiplicity in the commutator multiset and growth for every member of
/// the partition, for multiplicity-versus-growth diagnostics.
pub fn partition_growth_profile(
    h: &PauliHamiltonian,
    x_string: &BitString,
) -> Result<Vec<ProfilePoint>> {
    if x_string.len() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: x_string.len(),
        });
    }
    let members = partition_members(x_string)?;
    let grouping = h.ising_grouping();
    let ctx = SearchContext::new(h, &grouping);
    let (counts, _) = commutator_multiset(&ctx, x_string);
    members
        .into_iter()
        .map(|p| {
            let report = growth_exact(h, &p)?;
            Ok(ProfilePoint {
                multiplicity: counts.get(&p).copied().unwrap_or(0),
                growth: report.growth,
                candidate: p,
            })
        })
        .collect()
}
