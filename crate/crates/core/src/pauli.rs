//! Symplectic algebra for N-qubit Pauli products.
//!
//! A product is stored as two bit vectors: `x` marks qubits carrying X or Y,
//! `z` marks qubits carrying Z or Y. The stored label always denotes the
//! Hermitian operator; phases produced by multiplication are returned
//! alongside it as a power of `i`.
//!
//! With `y = |x AND z|` the Hermitian label is `i^y X^x Z^z`, which gives
//!
//! ```text
//! p q = i^(y_p + y_q - y_pq + 2 |z_p AND x_q|) * label(x_p ^ x_q, z_p ^ z_q)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Hermitian N-qubit Pauli product in symplectic form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliProduct {
    // field order gives the (x_bits, z_bits) integer ordering
    x: BitString,
    z: BitString,
}

/// A Pauli label with an explicit `i^phase_exponent` prefactor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub label: PauliProduct,
    /// Exponent `k` of the factor `i^k`, always in `0..4`.
    pub phase_exponent: u8,
}

impl PhasedPauli {
    /// The scalar `i^k` as `(re, im)`.
    pub fn phase(&self) -> (f64, f64) {
        match self.phase_exponent & 3 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    }
}

impl PauliProduct {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            x: BitString::zeros(n_qubits),
            z: BitString::zeros(n_qubits),
        }
    }

    pub fn from_bits(x: BitString, z: BitString) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    /// Qubits carrying X or Y.
    pub fn x_bits(&self) -> &BitString {
        &self.x
    }

    /// Qubits carrying Z or Y.
    pub fn z_bits(&self) -> &BitString {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the label has no X or Y factor.
    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    /// Number of Y factors.
    pub fn y_count(&self) -> u32 {
        self.x.and_count(&self.z)
    }

    /// Parity of the number of Y factors. Odd parity means the matrix is
    /// purely imaginary.
    pub fn y_parity(&self) -> bool {
        self.x.dot(&self.z)
    }

    /// Single-qubit factor at `q` as one of `I`, `X`, `Y`, `Z`.
    pub fn factor(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        Ok(())
    }

    /// Product `self * other` as a Hermitian label and a phase.
    pub fn multiply(&self, other: &Self) -> Result<PhasedPauli> {
        self.check_dims(other)?;
        Ok(self.multiply_unchecked(other))
    }

    #[inline]
    pub(crate) fn multiply_unchecked(&self, other: &Self) -> PhasedPauli {
        let label = Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        };
        let k = self.y_count() + other.y_count() + 2 * self.z.and_count(&other.x)
            + 3 * label.y_count();
        PhasedPauli {
            label,
            phase_exponent: (k & 3) as u8,
        }
    }

    /// Label of `self * other` with the phase dropped.
    #[inline]
    pub(crate) fn product_label(&self, other: &Self) -> Self {
        Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    /// True iff the symplectic form `x_p . z_q + x_q . z_p` vanishes mod 2.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        let acc = self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words().iter().zip(other.z.words()))
            .fold(0u64, |acc, ((xp, zp), (xq, zq))| acc ^ (xp & zq) ^ (xq & zp));
        acc.count_ones() & 1 == 0
    }

    /// `None` when the two commute, otherwise `self * other` (the commutator
    /// is twice this product; the factor 2 is dropped).
    pub fn commutator_label(&self, other: &Self) -> Result<Option<PhasedPauli>> {
        self.check_dims(other)?;
        Ok(if self.commutes_unchecked(other) {
            None
        } else {
            Some(self.multiply_unchecked(other))
        })
    }

    /// Text form, one character per qubit, qubit 0 first.
    pub fn to_label_string(&self) -> String {
        (0..self.n_qubits()).map(|q| self.factor(q)).collect()
    }
}

impl FromStr for PauliProduct {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let n = text.chars().count();
        if n == 0 {
            return Err(Error::ParsePauli {
                text: text.to_string(),
                reason: "empty string".into(),
            });
        }
        let mut x = BitString::zeros(n);
        let mut z = BitString::zeros(n);
        for (q, c) in text.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                other => {
                    return Err(Error::ParsePauli {
                        text: text.to_string(),
                        reason: format!("unexpected character {other:?} at qubit {q}"),
                    })
                }
            };
            x.set(q, xb);
            z.set(q, zb);
        }
        Ok(Self { x, z })
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label_string())
    }
}

impl fmt::Debug for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}
