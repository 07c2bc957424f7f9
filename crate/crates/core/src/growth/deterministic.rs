use rustc_hash::FxHashMap;

use super::{
    anticommuting_count, best_of, growth_exact, rank_by_count, GrowthReport, GrowthSearch,
    SearchConfig, SearchContext, SearchOutcome,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::pauli::PauliProduct;
use crate::screen::canonical_element;

/// Exhaustive commutator multiset over x-string factorizations, followed by
/// growth evaluation of the `r` most frequent labels.
#[derive(Clone, Debug)]
pub struct DeterministicSearch {
    cfg: SearchConfig,
}

impl DeterministicSearch {
    pub fn new(cfg: SearchConfig) -> Self {
        Self { cfg }
    }
}

/// Multiplicities of nonzero commutator labels over all term pairs whose
/// x-strings sum to `x_string`, and the number of commutator evaluations.
pub fn commutator_multiset(
    ctx: &SearchContext<'_>,
    x_string: &BitString,
) -> (FxHashMap<PauliProduct, usize>, usize) {
    let groups = ctx.grouping.groups();
    let mut counts: FxHashMap<PauliProduct, usize> = FxHashMap::default();
    let mut n_query = 0usize;
    for (i, j) in ctx.valid_pairs(x_string) {
        let left: Vec<PauliProduct> = (0..groups[i].len()).map(|l| groups[i].label(l)).collect();
        let right: Vec<PauliProduct> = (0..groups[j].len()).map(|l| groups[j].label(l)).collect();
        for a in &left {
            for b in &right {
                n_query += 1;
                if !a.commutes_unchecked(b) {
                    *counts.entry(a.product_label(b)).or_insert(0) += 1;
                }
            }
        }
    }
    (counts, n_query)
}

/// Evaluates growth for the `limit` best-ranked labels using
/// `gamma = |H_A| - 2 m`.
fn rank_and_score(
    ctx: &SearchContext<'_>,
    counts: &FxHashMap<PauliProduct, usize>,
    limit: usize,
) -> (GrowthReport, usize) {
    let ranked = rank_by_count(counts);
    let take = limit.min(ranked.len());
    let scored = ranked[..take].iter().map(|&(p, m)| {
        let a = anticommuting_count(ctx.hamiltonian, p);
        debug_assert!(2 * m <= a);
        let report = GrowthReport {
            candidate: p.clone(),
            multiplicity: m,
            anticommuting_count: a,
            growth: a - 2 * m,
        };
        (report, m)
    });
    let (best, _) = best_of(scored).expect("ranked list is nonempty");
    (best, take)
}

/// True when the partition's canonical element beats `report`.
pub(super) fn loses_to_canonical(
    ctx: &SearchContext<'_>,
    x_string: &BitString,
    report: &GrowthReport,
) -> Result<bool> {
    let canonical = canonical_element(x_string)?;
    Ok(growth_exact(ctx.hamiltonian, &canonical)?.growth < report.growth)
}

impl GrowthSearch for DeterministicSearch {
    fn name(&self) -> &'static str {
        "det"
    }

    fn search(&self, ctx: &SearchContext<'_>, x_string: &BitString) -> Result<SearchOutcome> {
        let (counts, n_query) = commutator_multiset(ctx, x_string);
        if counts.is_empty() {
            return Err(Error::EmptyCommutatorSet {
                x_string: x_string.to_string(),
            });
        }
        let m_terms = ctx.hamiltonian.len();
        let (mut report, mut n_ranked) = rank_and_score(ctx, &counts, self.cfg.r.resolve(m_terms));
        let mut fallback_used = false;
        if let Some(fallback) = self.cfg.r_fallback {
            let wider = fallback.resolve(m_terms);
            if wider > n_ranked
                && n_ranked < counts.len()
                && loses_to_canonical(ctx, x_string, &report)?
            {
                (report, n_ranked) = rank_and_score(ctx, &counts, wider);
                fallback_used = true;
            }
        }
        Ok(SearchOutcome {
            report,
            n_query,
            n_candidates: counts.len(),
            n_ranked,
            fallback_used,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::RankLimit;
    use crate::hamiltonian::{PauliHamiltonian, DEFAULT_PRUNE_EPS};

    fn ham(n: usize, terms: &[(&str, f64)]) -> PauliHamiltonian {
        PauliHamiltonian::from_terms(
            n,
            0.0,
            terms.iter().map(|&(s, c)| (s.parse().unwrap(), c)),
            DEFAULT_PRUNE_EPS,
        )
        .unwrap()
    }

    #[test]
    fn two_term_normalizer() {
        let h = ham(1, &[("X", 1.0), ("Z", 1.0)]);
        let g = h.ising_grouping();
        let ctx = SearchContext::new(&h, &g);
        let out = DeterministicSearch::new(SearchConfig::default())
            .search(&ctx, &BitString::parse("1").unwrap())
            .unwrap();
        assert_eq!(out.report.candidate.to_string(), "Y");
        assert_eq!((out.report.multiplicity, out.report.growth), (1, 0));
        assert_eq!(out.n_query, 1);
    }

    #[test]
    fn empty_multiset_is_reported() {
        let h = ham(2, &[("XI", 1.0), ("ZZ", 1.0)]);
        let g = h.ising_grouping();
        let ctx = SearchContext::new(&h, &g);
        let err = DeterministicSearch::new(SearchConfig::default())
            .search(&ctx, &BitString::parse("11").unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::EmptyCommutatorSet { .. }));
    }

    #[test]
    fn fallback_widens_the_ranking() {
        // The most frequent label is not the growth minimizer, and r = 1
        // stops there while the canonical element does better.
        let h = ham(
            3,
            &[
                ("ZYY", 1.0),
                ("IIZ", 1.0),
                ("ZXZ", 1.0),
                ("XYY", 1.0),
                ("ZZZ", 1.0),
                ("XZX", 1.0),
            ],
        );
        let g = h.ising_grouping();
        let ctx = SearchContext::new(&h, &g);
        let x = BitString::parse("101").unwrap();
        let narrow = SearchConfig {
            r: RankLimit::Fixed(1),
            ..SearchConfig::default()
        };
        let first = DeterministicSearch::new(narrow.clone()).search(&ctx, &x).unwrap();
        assert_eq!(first.report.growth, 3);
        assert!(!first.fallback_used);
        let with_fallback = DeterministicSearch::new(SearchConfig {
            r_fallback: Some(RankLimit::All),
            ..narrow
        })
        .search(&ctx, &x)
        .unwrap();
        assert!(with_fallback.fallback_used);
        assert_eq!(with_fallback.report.growth, 2);
        assert_eq!(with_fallback.n_ranked, with_fallback.n_candidates);
    }
}
