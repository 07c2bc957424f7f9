use super::{growth_exact, partition_members, GrowthSearch, SearchContext, SearchOutcome};
use crate::bits::BitString;
use crate::error::Result;

/// Evaluates the growth of every member of the partition. Only usable at
/// small qubit counts; the member enumeration is guarded.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExhaustiveSearch;

impl GrowthSearch for ExhaustiveSearch {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn search(&self, ctx: &SearchContext<'_>, x_string: &BitString) -> Result<SearchOutcome> {
        let members = partition_members(x_string)?;
        let n = members.len();
        let mut best = None;
        for p in members {
            let report = growth_exact(ctx.hamiltonian, &p)?;
            let better = match &best {
                None => true,
                Some(b) => {
                    let b: &super::GrowthReport = b;
                    (report.growth, std::cmp::Reverse(report.multiplicity), &report.candidate)
                        < (b.growth, std::cmp::Reverse(b.multiplicity), &b.candidate)
                }
            };
            if better {
                best = Some(report);
            }
        }
        Ok(SearchOutcome {
            report: best.expect("a nonzero x-string has members"),
            n_query: 0,
            n_candidates: n,
            n_ranked: n,
            fallback_used: false,
        })
    }
}
