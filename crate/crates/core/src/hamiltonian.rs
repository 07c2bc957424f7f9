//! Sparse qubit Hamiltonians with real coefficients.
//!
//! The identity component is held separately as [`PauliHamiltonian::constant`]
//! and never counts toward the term count `M`, the growth of a dressing step,
//! or any commutator set.

use rustc_hash::FxHashMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::pauli::PauliProduct;

pub const DEFAULT_PRUNE_EPS: f64 = 1e-8;

/// Computational basis state; bit `q` is the occupation of qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReferenceState {
    bits: BitString,
}

impl ReferenceState {
    pub fn new(bits: BitString) -> Self {
        Self { bits }
    }

    pub fn parse(text: &str) -> Result<Self> {
        BitString::parse(text).map(Self::new)
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn n_qubits(&self) -> usize {
        self.bits.len()
    }

    /// Eigenvalue (+1 or -1) of the Z-string `z` on this state.
    #[inline]
    pub fn z_eigenvalue(&self, z: &BitString) -> f64 {
        if self.bits.dot(z) {
            -1.0
        } else {
            1.0
        }
    }
}

/// Real linear combination of Pauli products plus a constant shift.
#[derive(Clone, Debug)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    constant: f64,
    terms: FxHashMap<PauliProduct, f64>,
    prune_eps: f64,
}

impl PartialEq for PauliHamiltonian {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits
            && self.constant == other.constant
            && self.terms == other.terms
    }
}

impl PauliHamiltonian {
    pub fn new(n_qubits: usize, prune_eps: f64) -> Self {
        Self {
            n_qubits,
            constant: 0.0,
            terms: FxHashMap::default(),
            prune_eps,
        }
    }

    /// Sums duplicate labels, folds identity terms into the constant and
    /// prunes small coefficients.
    pub fn from_terms<I>(n_qubits: usize, constant: f64, terms: I, prune_eps: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliProduct, f64)>,
    {
        let mut h = Self::new(n_qubits, prune_eps);
        h.constant = constant;
        for (p, c) in terms {
            h.add_term(p, c)?;
        }
        h.prune();
        Ok(h)
    }

    /// Adds `coeff * p` without pruning.
    pub fn add_term(&mut self, p: PauliProduct, coeff: f64) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        if p.is_identity() {
            self.constant += coeff;
        } else {
            *self.terms.entry(p).or_insert(0.0) += coeff;
        }
        Ok(())
    }

    /// Drops every coefficient below `prune_eps` in magnitude, and exact zeros.
    pub fn prune(&mut self) {
        let eps = self.prune_eps;
        self.terms.retain(|_, c| *c != 0.0 && c.abs() >= eps);
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn prune_eps(&self) -> f64 {
        self.prune_eps
    }

    pub fn set_prune_eps(&mut self, eps: f64) {
        self.prune_eps = eps;
        self.prune();
    }

    /// Number of non-identity terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliProduct) -> Option<f64> {
        self.terms.get(p).copied()
    }

    pub fn contains(&self, p: &PauliProduct) -> bool {
        self.terms.contains_key(p)
    }

    /// Terms in unspecified (but run-to-run stable) order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliProduct, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    /// Terms sorted by `(x_bits, z_bits)` as integers.
    pub fn sorted_terms(&self) -> Vec<(&PauliProduct, f64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v
    }

    fn check_reference(&self, reference: &ReferenceState) -> Result<()> {
        if reference.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: reference.n_qubits(),
            });
        }
        Ok(())
    }

    /// `<ref|H|ref>`, including the constant.
    pub fn expectation(&self, reference: &ReferenceState) -> Result<f64> {
        self.check_reference(reference)?;
        let diagonal = self
            .sorted_terms()
            .into_iter()
            .filter(|(p, _)| p.is_diagonal())
            .map(|(p, c)| c * reference.z_eigenvalue(p.z_bits()))
            .sum::<f64>();
        Ok(self.constant + diagonal)
    }

    /// Exact conjugation `exp(i tau P / 2) H exp(-i tau P / 2)`.
    ///
    /// Terms commuting with `P` pass through. An anticommuting term
    /// `c P_i` becomes `c cos(tau) P_i + c sin(tau) (-i P_i P)`, where
    /// `-i P_i P` is a real-signed Hermitian label.
    pub fn dress(&self, generator: &PauliProduct, tau: f64) -> Result<Self> {
        if generator.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: generator.n_qubits(),
            });
        }
        if generator.is_identity() {
            return Err(Error::IdentityGenerator);
        }
        let (sin, cos) = tau.sin_cos();
        let mut out: FxHashMap<PauliProduct, f64> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * 2, Default::default());
        // Each output label receives at most two contributions, so the
        // (commutative) float sums are independent of iteration order.
        for (p, &c) in &self.terms {
            if p.commutes_unchecked(generator) {
                *out.entry(p.clone()).or_insert(0.0) += c;
                continue;
            }
            *out.entry(p.clone()).or_insert(0.0) += c * cos;
            let prod = p.multiply_unchecked(generator);
            // anticommuting pairs give odd k; -i * i^k is +1 for k = 1, -1 for k = 3
            let sign = if prod.phase_exponent == 1 { 1.0 } else { -1.0 };
            debug_assert!(prod.phase_exponent % 2 == 1);
            *out.entry(prod.label).or_insert(0.0) += sign * c * sin;
        }
        let mut dressed = Self {
            n_qubits: self.n_qubits,
            constant: self.constant,
            terms: out,
            prune_eps: self.prune_eps,
        };
        dressed.prune();
        Ok(dressed)
    }

    /// Regroups terms as `sum_i (sum_j c_j Z_j) X_i`.
    pub fn ising_grouping(&self) -> IsingGrouping {
        IsingGrouping::build(self)
    }

    /// Adds `other` scaled by `scale`; used for perturbation checks.
    pub fn add_scaled(&mut self, other: &Self, scale: f64) -> Result<()> {
        for (p, c) in other.sorted_terms() {
            self.add_term(p.clone(), scale * c)?;
        }
        self.constant += scale * other.constant;
        self.prune();
        Ok(())
    }
}

/// One term of an x-string group: `coeff * (i if imaginary) * Z^z X^x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZTerm {
    pub z_string: BitString,
    pub coeff: f64,
    pub imaginary: bool,
}

/// All terms sharing one x-string.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingGroup {
    pub x_string: BitString,
    pub members: Vec<ZTerm>,
}

/// Terms of a Hamiltonian grouped by x-string, in `Z * X` factor order.
///
/// Groups are sorted by x-string and members by z-string, so every sum over
/// a group runs in a fixed order.
#[derive(Clone, Debug)]
pub struct IsingGrouping {
    n_qubits: usize,
    groups: Vec<IsingGroup>,
    index: FxHashMap<BitString, usize>,
}

impl IsingGrouping {
    fn build(h: &PauliHamiltonian) -> Self {
        let mut groups: Vec<IsingGroup> = Vec::new();
        for (p, c) in h.sorted_terms() {
            // label = i^y X Z = (-i)^y Z X
            let y = p.y_count();
            let (coeff, imaginary) = match y % 4 {
                0 => (c, false),
                1 => (-c, true),
                2 => (-c, false),
                _ => (c, true),
            };
            let term = ZTerm {
                z_string: p.z_bits().clone(),
                coeff,
                imaginary,
            };
            match groups.last_mut() {
                Some(g) if &g.x_string == p.x_bits() => g.members.push(term),
                _ => groups.push(IsingGroup {
                    x_string: p.x_bits().clone(),
                    members: vec![term],
                }),
            }
        }
        let index = groups
            .iter()
            .enumerate()
            .map(|(i, g)| (g.x_string.clone(), i))
            .collect();
        Self {
            n_qubits: h.n_qubits(),
            groups,
            index,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn groups(&self) -> &[IsingGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, x_string: &BitString) -> Option<&IsingGroup> {
        self.index.get(x_string).map(|&i| &self.groups[i])
    }

    pub fn group_index(&self, x_string: &BitString) -> Option<usize> {
        self.index.get(x_string).copied()
    }

    /// Reassembles the Hermitian terms; inverse of the grouping.
    pub fn to_terms(&self) -> Vec<(PauliProduct, f64)> {
        self.groups.iter().flat_map(|g| g.terms()).collect()
    }
}

impl IsingGroup {
    /// Hermitian label and coefficient of member `idx`.
    pub fn term(&self, idx: usize) -> (PauliProduct, f64) {
        let m = &self.members[idx];
        let p = PauliProduct::from_bits(self.x_string.clone(), m.z_string.clone())
            .expect("group strings share a length");
        let c = match (p.y_count() % 4, m.imaginary) {
            (0, false) => m.coeff,
            (1, true) => -m.coeff,
            (2, false) => -m.coeff,
            (3, true) => m.coeff,
            _ => unreachable!("imaginary flag tracks y parity"),
        };
        (p, c)
    }

    /// Hermitian label of member `idx`.
    pub fn label(&self, idx: usize) -> PauliProduct {
        PauliProduct::from_bits(self.x_string.clone(), self.members[idx].z_string.clone())
            .expect("group strings share a length")
    }

    pub fn terms(&self) -> impl Iterator<Item = (PauliProduct, f64)> + '_ {
        (0..self.members.len()).map(|i| self.term(i))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
