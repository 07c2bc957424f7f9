use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::deterministic::loses_to_canonical;
use super::{
    best_of, growth_exact, rank_by_count, GrowthReport, GrowthSearch, SearchConfig,
    SearchContext, SearchOutcome,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::pauli::PauliProduct;

/// Uniform sampling of commutators over x-string factorizations.
///
/// Each draw picks a valid pair of groups uniformly, then one term from
/// each group uniformly, and records the commutator label if nonzero.
/// Sample counts only rank candidates; growth is recomputed directly as
/// `|[P, H] \ H|`.
#[derive(Clone, Debug)]
pub struct ProbabilisticSearch {
    cfg: SearchConfig,
}

impl ProbabilisticSearch {
    pub fn new(cfg: SearchConfig) -> Self {
        Self { cfg }
    }

    fn score(
        ctx: &SearchContext<'_>,
        counts: &FxHashMap<PauliProduct, usize>,
        limit: usize,
    ) -> Result<(GrowthReport, usize)> {
        let ranked = rank_by_count(counts);
        let take = limit.min(ranked.len());
        let mut scored = Vec::with_capacity(take);
        for &(p, hits) in &ranked[..take] {
            scored.push((growth_exact(ctx.hamiltonian, p)?, hits));
        }
        let (best, _) = best_of(scored).expect("ranked list is nonempty");
        Ok((best, take))
    }
}

impl GrowthSearch for ProbabilisticSearch {
    fn name(&self) -> &'static str {
        "prob"
    }

    fn search(&self, ctx: &SearchContext<'_>, x_string: &BitString) -> Result<SearchOutcome> {
        let pairs = ctx.valid_pairs(x_string);
        if pairs.is_empty() {
            return Err(Error::NoValidPairs {
                x_string: x_string.to_string(),
            });
        }
        let m_terms = ctx.hamiltonian.len();
        let n_samples = self.cfg.n_samples.unwrap_or(m_terms).max(1);
        let groups = ctx.grouping.groups();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.rng_seed);
        let mut counts: FxHashMap<PauliProduct, usize> = FxHashMap::default();
        for _ in 0..n_samples {
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            let a = groups[i].label(rng.gen_range(0..groups[i].len()));
            let b = groups[j].label(rng.gen_range(0..groups[j].len()));
            if !a.commutes_unchecked(&b) {
                *counts.entry(a.product_label(&b)).or_insert(0) += 1;
            }
        }
        if counts.is_empty() {
            return Err(Error::EmptyCommutatorSet {
                x_string: x_string.to_string(),
            });
        }
        let (mut report, mut n_ranked) = Self::score(ctx, &counts, self.cfg.r.resolve(m_terms))?;
        let mut fallback_used = false;
        if let Some(fallback) = self.cfg.r_fallback {
            let wider = fallback.resolve(m_terms);
            if wider > n_ranked
                && n_ranked < counts.len()
                && loses_to_canonical(ctx, x_string, &report)?
            {
                (report, n_ranked) = Self::score(ctx, &counts, wider)?;
                fallback_used = true;
            }
        }
        Ok(SearchOutcome {
            report,
            n_query: n_samples,
            n_candidates: counts.len(),
            n_ranked,
            fallback_used,
        })
    }
}
