//! Growth accounting and searches for growth-minimizing partition members.
//!
//! Dressing with generator `P` can only add the labels `P_i P` of terms
//! `P_i` that anticommute with `P`. The growth `gamma(P)` counts those
//! labels that are not already present. Pairs of Hamiltonian terms whose
//! product is proportional to `P` cancel each other's new labels, so with
//! `m(P)` such pairs and `|H_A|` anticommuting terms, `gamma = |H_A| - 2 m`.
//!
//! Searches are strategies behind [`GrowthSearch`], created by name from a
//! [`GrowthSearchRegistry`].

mod deterministic;
mod exhaustive;
mod probabilistic;
mod profile;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hamiltonian::{IsingGrouping, PauliHamiltonian};
use crate::pauli::PauliProduct;

pub use deterministic::{commutator_multiset, DeterministicSearch};
pub use exhaustive::ExhaustiveSearch;
pub use probabilistic::ProbabilisticSearch;
pub use profile::{partition_growth_profile, partition_members, ProfilePoint, MAX_PROFILE_MEMBERS};

/// Growth accounting for one candidate generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub candidate: PauliProduct,
    /// Number of unordered term pairs `(P_i, P_j)` with `[P_i, P_j]` proportional to the candidate.
    pub multiplicity: usize,
    /// `|H_A|`, terms anticommuting with the candidate.
    pub anticommuting_count: usize,
    /// New labels introduced by dressing with the candidate.
    pub growth: usize,
}

impl GrowthReport {
    pub fn is_normalizer(&self) -> bool {
        self.growth == 0
    }
}

/// How many top-multiplicity candidates get their growth evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankLimit {
    /// `ceil(log2 M)`.
    Log2M,
    /// `ceil(M / 10)`.
    TenthM,
    Fixed(usize),
    /// Every distinct candidate.
    All,
}

impl RankLimit {
    pub fn resolve(self, n_terms: usize) -> usize {
        match self {
            RankLimit::Log2M => ceil_log2(n_terms).max(1),
            RankLimit::TenthM => n_terms.div_ceil(10).max(1),
            RankLimit::Fixed(r) => r.max(1),
            RankLimit::All => usize::MAX,
        }
    }
}

impl fmt::Display for RankLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankLimit::Log2M => f.write_str("log2m"),
            RankLimit::TenthM => f.write_str("m/10"),
            RankLimit::Fixed(r) => write!(f, "{r}"),
            RankLimit::All => f.write_str("all"),
        }
    }
}

impl std::str::FromStr for RankLimit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log2m" | "log2" => Ok(RankLimit::Log2M),
            "m/10" | "tenth" => Ok(RankLimit::TenthM),
            "all" => Ok(RankLimit::All),
            n => match n.parse::<usize>() {
                Ok(r) if r >= 1 => Ok(RankLimit::Fixed(r)),
                _ => Err(Error::Config(format!(
                    "rank limit must be a positive integer, log2m, m/10 or all; got {s:?}"
                ))),
            },
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Parameters shared by the search strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub r: RankLimit,
    /// Second pass with a larger limit when the first result loses to the
    /// partition's canonical element.
    pub r_fallback: Option<RankLimit>,
    /// Sample count for the probabilistic search; `None` means `M`.
    pub n_samples: Option<usize>,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            r: RankLimit::Log2M,
            r_fallback: None,
            n_samples: None,
            rng_seed: 0,
        }
    }
}

/// A Hamiltonian snapshot and its grouping, shared by every search in one
/// iteration.
pub struct SearchContext<'a> {
    pub hamiltonian: &'a PauliHamiltonian,
    pub grouping: &'a IsingGrouping,
}

impl<'a> SearchContext<'a> {
    pub fn new(hamiltonian: &'a PauliHamiltonian, grouping: &'a IsingGrouping) -> Self {
        Self {
            hamiltonian,
            grouping,
        }
    }

    /// Group index pairs `(i, j)`, `i < j`, whose x-strings sum to `target`.
    pub fn valid_pairs(&self, target: &BitString) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, g) in self.grouping.groups().iter().enumerate() {
            let partner = g.x_string.xor(target);
            if let Some(j) = self.grouping.group_index(&partner) {
                if i < j {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

/// Result of one search, with its cost counters.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub report: GrowthReport,
    /// Commutator evaluations between Hamiltonian terms.
    pub n_query: usize,
    /// Distinct nonzero commutator labels collected.
    pub n_candidates: usize,
    /// Candidates whose growth was evaluated.
    pub n_ranked: usize,
    pub fallback_used: bool,
}

/// A strategy for finding a low-growth member of a gradient partition.
pub trait GrowthSearch: Send + Sync {
    fn name(&self) -> &'static str;

    fn search(&self, ctx: &SearchContext<'_>, x_string: &BitString) -> Result<SearchOutcome>;
}

type Factory = fn(&SearchConfig) -> Box<dyn GrowthSearch>;

/// Growth-search strategies by name.
pub struct GrowthSearchRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

impl Default for GrowthSearchRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register("det", |cfg| Box::new(DeterministicSearch::new(cfg.clone())));
        reg.register("prob", |cfg| Box::new(ProbabilisticSearch::new(cfg.clone())));
        reg.register("exhaustive", |_| Box::new(ExhaustiveSearch));
        reg
    }
}

impl GrowthSearchRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, name: &str, cfg: &SearchConfig) -> Result<Box<dyn GrowthSearch>> {
        self.factories
            .get(name)
            .map(|f| f(cfg))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "growth search",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}

/// Growth of `p` by direct enumeration of `[H, P]`; `O(M)`.
pub fn growth_exact(h: &PauliHamiltonian, p: &PauliProduct) -> Result<GrowthReport> {
    if p.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: p.n_qubits(),
        });
    }
    if p.is_identity() {
        return Err(Error::IdentityGenerator);
    }
    let mut anticommuting = 0usize;
    let mut present = 0usize;
    for (term, _) in h.iter() {
        if term.commutes_unchecked(p) {
            continue;
        }
        anticommuting += 1;
        // distinct terms give distinct products, so no deduplication needed
        if h.contains(&term.product_label(p)) {
            present += 1;
        }
    }
    debug_assert!(present.is_multiple_of(2));
    Ok(GrowthReport {
        candidate: p.clone(),
        multiplicity: present / 2,
        anticommuting_count: anticommuting,
        growth: anticommuting - present,
    })
}

/// `|H_A|` for `p`.
pub(crate) fn anticommuting_count(h: &PauliHamiltonian, p: &PauliProduct) -> usize {
    h.iter().filter(|(t, _)| !t.commutes_unchecked(p)).count()
}

/// Candidates ranked by descending count, then ascending label.
pub(crate) fn rank_by_count(counts: &FxHashMap<PauliProduct, usize>) -> Vec<(&PauliProduct, usize)> {
    let mut ranked: Vec<_> = counts.iter().map(|(p, &m)| (p, m)).collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
}

/// Picks the lowest growth, ties going to higher count then lower label.
pub(crate) fn best_of(
    scored: impl IntoIterator<Item = (GrowthReport, usize)>,
) -> Option<(GrowthReport, usize)> {
    scored.into_iter().min_by(|a, b| {
        a.0.growth
            .cmp(&b.0.growth)
            .then_with(|| b.1.cmp(&a.1))
            .then_with(|| a.0.candidate.cmp(&b.0.candidate))
    })
}
