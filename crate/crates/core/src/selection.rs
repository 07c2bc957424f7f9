//! Generator selection.
//!
//! The top `P` gradient partitions are scored with
//! `s = a * g~ - (1 - a) * gamma~`, where `g~` and `gamma~` are the
//! gradient and minimal growth divided by their window means. Policies are
//! strategies behind [`SelectionPolicy`], created by name from a
//! [`PolicyRegistry`].

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::growth::{growth_exact, GrowthReport, GrowthSearch, SearchContext, SearchOutcome};
use crate::pauli::PauliProduct;
use crate::screen::{canonical_element, GradientPartition, PartitionTable};

pub const DEFAULT_TOP_P: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct ScoringConfig {
    /// Gradient bias `a` in `[0, 1]`.
    pub bias_a: f64,
    /// Number of partitions scored.
    pub top_p: usize,
    /// Registered policy name.
    pub policy: String,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            bias_a: 1.0,
            top_p: DEFAULT_TOP_P,
            policy: "gm".to_string(),
        }
    }
}

impl ScoringConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.bias_a) {
            return Err(Error::Config(format!("bias must lie in [0, 1], got {}", self.bias_a)));
        }
        if self.top_p == 0 {
            return Err(Error::Config("top-p must be at least 1".into()));
        }
        Ok(())
    }
}

/// Score of one partition in the window.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionScore {
    pub partition: GradientPartition,
    pub min_growth: usize,
    pub normalized_gradient: f64,
    pub normalized_growth: f64,
    pub score: f64,
    pub min_growth_element: PauliProduct,
}

/// Scores and sorts a window of partitions.
///
/// Output is ordered by descending score, then descending gradient, then
/// ascending x-string. When every growth in the window is zero the growth
/// term is dropped.
pub fn score_table(
    partitions: &[GradientPartition],
    reports: &[GrowthReport],
    bias_a: f64,
) -> Result<Vec<PartitionScore>> {
    if partitions.len() != reports.len() {
        return Err(Error::Config(format!(
            "{} partitions but {} growth reports",
            partitions.len(),
            reports.len()
        )));
    }
    if partitions.is_empty() {
        return Err(Error::EmptyPartitionTable);
    }
    let window = partitions.len() as f64;
    let g_sum: f64 = partitions.iter().map(|p| p.gradient).sum();
    let gamma_sum: usize = reports.iter().map(|r| r.growth).sum();
    let mut scores: Vec<PartitionScore> = partitions
        .iter()
        .zip(reports)
        .map(|(part, rep)| {
            let g_norm = part.gradient * window / g_sum;
            let gamma_norm = if gamma_sum == 0 {
                0.0
            } else {
                rep.growth as f64 * window / gamma_sum as f64
            };
            PartitionScore {
                partition: part.clone(),
                min_growth: rep.growth,
                normalized_gradient: g_norm,
                normalized_growth: gamma_norm,
                score: bias_a * g_norm - (1.0 - bias_a) * gamma_norm,
                min_growth_element: rep.candidate.clone(),
            }
        })
        .collect();
    scores.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.partition.gradient.total_cmp(&a.partition.gradient))
            .then_with(|| a.partition.x_string.cmp(&b.partition.x_string))
    });
    Ok(scores)
}

/// Outcome of one selection step.
#[derive(Clone, Debug)]
pub struct Selection {
    pub generator: PauliProduct,
    pub chosen: PartitionScore,
    /// Full window, sorted as by [`score_table`].
    pub window: Vec<PartitionScore>,
    /// Commutator queries spent in growth searches.
    pub n_query: usize,
    /// Partitions whose search found no commutators and used the canonical
    /// element instead.
    pub canonical_fallbacks: usize,
}

/// A rule for choosing the next generator from a screened Hamiltonian.
pub trait SelectionPolicy: Send + Sync {
    fn name(&self) -> &'static str;

    fn select(
        &self,
        ctx: &SearchContext<'_>,
        table: &PartitionTable,
        search: &dyn GrowthSearch,
    ) -> Result<Selection>;
}

/// Canonical element of the highest-gradient partition. Growth is computed
/// for reporting only.
#[derive(Clone, Debug)]
pub struct CanonicalPolicy {
    bias_a: f64,
}

impl SelectionPolicy for CanonicalPolicy {
    fn name(&self) -> &'static str {
        "canonical"
    }

    fn select(
        &self,
        ctx: &SearchContext<'_>,
        table: &PartitionTable,
        _search: &dyn GrowthSearch,
    ) -> Result<Selection> {
        let top = table.partitions().first().ok_or(Error::EmptyPartitionTable)?;
        let generator = canonical_element(&top.x_string)?;
        let report = growth_exact(ctx.hamiltonian, &generator)?;
        let window = score_table(std::slice::from_ref(top), &[report], self.bias_a)?;
        Ok(Selection {
            generator,
            chosen: window[0].clone(),
            window,
            n_query: 0,
            canonical_fallbacks: 0,
        })
    }
}

/// Growth-mitigated selection: minimal-growth element of the best-scoring
/// partition among the top `P`.
#[derive(Clone, Debug)]
pub struct GrowthMitigatedPolicy {
    bias_a: f64,
    top_p: usize,
}

impl GrowthMitigatedPolicy {
    fn search_one(
        ctx: &SearchContext<'_>,
        search: &dyn GrowthSearch,
        part: &GradientPartition,
    ) -> Result<(GrowthReport, usize, bool)> {
        match search.search(ctx, &part.x_string) {
            Ok(SearchOutcome {
                report, n_query, ..
            }) => Ok((report, n_query, false)),
            Err(Error::EmptyCommutatorSet { .. }) | Err(Error::NoValidPairs { .. }) => {
                let canonical = canonical_element(&part.x_string)?;
                Ok((growth_exact(ctx.hamiltonian, &canonical)?, 0, true))
            }
            Err(e) => Err(e),
        }
    }
}

impl SelectionPolicy for GrowthMitigatedPolicy {
    fn name(&self) -> &'static str {
        "gm"
    }

    fn select(
        &self,
        ctx: &SearchContext<'_>,
        table: &PartitionTable,
        search: &dyn GrowthSearch,
    ) -> Result<Selection> {
        let window = table.top(self.top_p);
        if window.is_empty() {
            return Err(Error::EmptyPartitionTable);
        }
        // independent searches; collect keeps window order
        let results: Vec<(GrowthReport, usize, bool)> = window
            .par_iter()
            .map(|part| Self::search_one(ctx, search, part))
            .collect::<Result<_>>()?;
        let n_query = results.iter().map(|r| r.1).sum();
        let canonical_fallbacks = results.iter().filter(|r| r.2).count();
        let reports: Vec<GrowthReport> = results.into_iter().map(|r| r.0).collect();
        let scored = score_table(window, &reports, self.bias_a)?;
        Ok(Selection {
            generator: scored[0].min_growth_element.clone(),
            chosen: scored[0].clone(),
            window: scored,
            n_query,
            canonical_fallbacks,
        })
    }
}

type Factory = fn(&ScoringConfig) -> Box<dyn SelectionPolicy>;

/// Selection policies by name.
pub struct PolicyRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

impl Default for PolicyRegistry {
    fn default() -> Self {
        let mut reg = Self {
            factories: BTreeMap::new(),
        };
        reg.register("canonical", |cfg| {
            Box::new(CanonicalPolicy {
                bias_a: cfg.bias_a,
            })
        });
        reg.register("gm", |cfg| {
            Box::new(GrowthMitigatedPolicy {
                bias_a: cfg.bias_a,
                top_p: cfg.top_p,
            })
        });
        reg
    }
}

impl PolicyRegistry {
    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn create(&self, cfg: &ScoringConfig) -> Result<Box<dyn SelectionPolicy>> {
        cfg.validate()?;
        self.factories
            .get(cfg.policy.as_str())
            .map(|f| f(cfg))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "selection policy",
                name: cfg.policy.clone(),
                known: self.names().join(", "),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    fn part(x: u64, g: f64) -> GradientPartition {
        GradientPartition {
            x_string: BitString::from_u64(4, x),
            gradient: g,
        }
    }

    fn rep(x: u64, gamma: usize) -> GrowthReport {
        let x = BitString::from_u64(4, x);
        GrowthReport {
            candidate: canonical_element(&x).unwrap(),
            multiplicity: 0,
            anticommuting_count: gamma,
            growth: gamma,
        }
    }

    #[test]
    fn worked_example_ties_break_by_gradient() {
        let parts = [part(1, 3.0), part(2, 2.0), part(3, 1.0)];
        let reps = [rep(1, 30), rep(2, 20), rep(3, 10)];
        let s = score_table(&parts, &reps, 0.5).unwrap();
        assert_eq!(s[0].partition, parts[0]);
        let by_x = |x: u64| s.iter().find(|e| e.partition.x_string.to_u64() == Some(x)).unwrap();
        for (x, v) in [(1, 1.5), (2, 1.0), (3, 0.5)] {
            assert!((by_x(x).normalized_gradient - v).abs() < 1e-15);
            assert!((by_x(x).normalized_growth - v).abs() < 1e-15);
            assert!(by_x(x).score.abs() < 1e-15);
        }
    }

    #[test]
    fn pure_gradient_bias_ignores_growth() {
        let parts = [part(1, 3.0), part(2, 2.0), part(3, 1.0)];
        let reps = [rep(1, 100), rep(2, 0), rep(3, 7)];
        let s = score_table(&parts, &reps, 1.0).unwrap();
        let order: Vec<_> = s.iter().map(|e| e.partition.gradient).collect();
        assert_eq!(order, [3.0, 2.0, 1.0]);
    }

    #[test]
    fn zero_bias_ranks_by_growth() {
        let parts = [part(1, 1.0), part(2, 1.0), part(3, 1.0)];
        let reps = [rep(1, 5), rep(2, 2), rep(3, 9)];
        let s = score_table(&parts, &reps, 0.0).unwrap();
        let order: Vec<_> = s.iter().map(|e| e.min_growth).collect();
        assert_eq!(order, [2, 5, 9]);
    }

    #[test]
    fn all_normalizer_window() {
        let parts = [part(1, 1.0), part(2, 3.0)];
        let reps = [rep(1, 0), rep(2, 0)];
        let s = score_table(&parts, &reps, 0.3).unwrap();
        assert!(s.iter().all(|e| e.normalized_growth == 0.0));
        assert_eq!(s[0].partition.gradient, 3.0);
    }

    #[test]
    fn shape_errors() {
        assert!(score_table(&[part(1, 1.0)], &[], 1.0).is_err());
        assert_eq!(score_table(&[], &[], 1.0), Err(Error::EmptyPartitionTable));
    }

    #[test]
    fn registry_validates() {
        let reg = PolicyRegistry::default();
        assert_eq!(reg.names(), ["canonical", "gm"]);
        let bad = ScoringConfig {
            bias_a: 1.5,
            ..ScoringConfig::default()
        };
        assert!(reg.create(&bad).is_err());
        let unknown = ScoringConfig {
            policy: "greedy".into(),
            ..ScoringConfig::default()
        };
        assert!(matches!(reg.create(&unknown), Err(Error::UnknownStrategy { .. })));
    }
}
