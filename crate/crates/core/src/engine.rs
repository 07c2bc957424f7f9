//! The iterative dressing loop.
//!
//! Each iteration screens the current Hamiltonian, selects one generator,
//! minimizes the energy along its angle in closed form, and conjugates the
//! Hamiltonian with the optimal rotation.

use std::time::Instant;

use log::{debug, info};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::growth::{growth_exact, GrowthSearchRegistry, SearchConfig, SearchContext};
use crate::hamiltonian::{PauliHamiltonian, ReferenceState, DEFAULT_PRUNE_EPS};
use crate::io::HamiltonianFile;
use crate::pauli::PauliProduct;
use crate::screen::{screen_grouping, signed_gradient, DEFAULT_GRADIENT_FLOOR};
use crate::selection::{PolicyRegistry, ScoringConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scoring: ScoringConfig,
    pub search: SearchConfig,
    /// Registered growth-search name.
    pub search_strategy: String,
    pub max_iterations: usize,
    /// Stop once the sum of partition gradients is at or below this.
    pub grad_norm_eps: f64,
    /// Stop once `|E_K - E_(K-1)|` drops below this; 0 disables.
    pub energy_tol: f64,
    pub prune_eps: f64,
    pub gradient_floor: f64,
    /// Include wall-clock times in records (breaks byte-identical output).
    pub record_timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scoring: ScoringConfig::default(),
            search: SearchConfig::default(),
            search_strategy: "det".to_string(),
            max_iterations: 20,
            grad_norm_eps: 0.0,
            energy_tol: 0.0,
            prune_eps: DEFAULT_PRUNE_EPS,
            gradient_floor: DEFAULT_GRADIENT_FLOOR,
            record_timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.scoring.validate()?;
        if self.max_iterations == 0 {
            return Err(Error::Config("max iterations must be at least 1".into()));
        }
        for (name, v) in [
            ("grad-norm-eps", self.grad_norm_eps),
            ("energy-tol", self.energy_tol),
            ("prune-eps", self.prune_eps),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be a finite non-negative number")));
            }
        }
        Ok(())
    }
}

/// Closed-form solution of the one-angle energy minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauSolution {
    pub tau: f64,
    pub energy: f64,
    /// `<H>` on the reference.
    pub a: f64,
    /// Signed derivative at zero angle.
    pub b: f64,
    /// `(<P H P> - <H>) / 2`.
    pub c: f64,
}

impl TauSolution {
    /// `E(tau) = A + C + B sin(tau) - C cos(tau)`.
    pub fn energy_at(&self, tau: f64) -> f64 {
        self.a + self.c + self.b * tau.sin() - self.c * tau.cos()
    }
}

/// Minimizes `<ref| e^{i tau P/2} H e^{-i tau P/2} |ref>` over `tau`.
pub fn minimize_tau(
    h: &PauliHamiltonian,
    reference: &ReferenceState,
    generator: &PauliProduct,
) -> Result<TauSolution> {
    let grouping = h.ising_grouping();
    minimize_tau_grouped(h, &grouping, reference, generator)
}

fn minimize_tau_grouped(
    h: &PauliHamiltonian,
    grouping: &crate::hamiltonian::IsingGrouping,
    reference: &ReferenceState,
    generator: &PauliProduct,
) -> Result<TauSolution> {
    let b = signed_gradient(grouping, reference, generator)?;
    let a = h.expectation(reference)?;
    // P H P flips the sign of anticommuting terms, so only anticommuting
    // diagonal terms move <P H P> away from <H>.
    let c = -h
        .sorted_terms()
        .into_iter()
        .filter(|(p, _)| p.is_diagonal() && !p.commutes_unchecked(generator))
        .map(|(p, coeff)| coeff * reference.z_eigenvalue(p.z_bits()))
        .sum::<f64>();
    if b == 0.0 && c == 0.0 {
        return Err(Error::FlatEnergyCurve {
            generator: generator.to_string(),
        });
    }
    let tau = (-b).atan2(c);
    let energy = a + c - b.hypot(c);
    Ok(TauSolution { tau, energy, a, b, c })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    ConvergedGradNorm,
    MaxIterations,
    ConvergedEnergy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    #[serde(serialize_with = "serialize_display")]
    pub generator: PauliProduct,
    pub gradient: f64,
    /// Exact growth of the generator on the pre-step Hamiltonian.
    pub growth_bound: usize,
    pub tau_opt: f64,
    pub energy: f64,
    /// Terms after dressing.
    pub term_count: usize,
    /// Sum of all partition gradients before the step.
    pub grad_norm: f64,
    pub n_query: usize,
    pub partition_score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

fn serialize_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub policy: String,
    pub bias: f64,
    pub top_p: usize,
    pub search: String,
    pub r: String,
    pub r_fallback: Option<String>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub max_iter: usize,
    pub grad_norm_eps: f64,
    pub energy_tol: f64,
    pub prune_eps: f64,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(cfg: &RunConfig) -> Self {
        Self {
            policy: cfg.scoring.policy.clone(),
            bias: cfg.scoring.bias_a,
            top_p: cfg.scoring.top_p,
            search: cfg.search_strategy.clone(),
            r: cfg.search.r.to_string(),
            r_fallback: cfg.search.r_fallback.map(|r| r.to_string()),
            samples: cfg.search.n_samples,
            seed: cfg.search.rng_seed,
            max_iter: cfg.max_iterations,
            grad_norm_eps: cfg.grad_norm_eps,
            energy_tol: cfg.energy_tol,
            prune_eps: cfg.prune_eps,
        }
    }
}

/// Serializable record of a full run.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub config: ConfigEcho,
    pub n_qubits: usize,
    pub reference: String,
    pub initial_energy: f64,
    pub initial_term_count: usize,
    pub iterations: Vec<IterationRecord>,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_hamiltonian: Option<Box<RawValue>>,
}

impl Trajectory {
    pub fn final_energy(&self) -> f64 {
        self.iterations
            .last()
            .map_or(self.initial_energy, |r| r.energy)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trajectory serializes");
        s.push('\n');
        s
    }

    /// Embeds `h` in interchange form under `final_hamiltonian`.
    pub fn attach_final_hamiltonian(&mut self, h: &PauliHamiltonian, reference: &ReferenceState) {
        let text = HamiltonianFile::new(h.clone(), reference.clone()).to_json_string();
        self.final_hamiltonian =
            Some(RawValue::from_string(text).expect("interchange writer emits valid JSON"));
    }
}

pub struct RunResult {
    pub trajectory: Trajectory,
    pub final_hamiltonian: PauliHamiltonian,
}

/// Resolves strategies by name and drives the loop.
#[derive(Default)]
pub struct Engine {
    pub policies: PolicyRegistry,
    pub searches: GrowthSearchRegistry,
}

impl Engine {
    pub fn run(
        &self,
        h0: &PauliHamiltonian,
        reference: &ReferenceState,
        cfg: &RunConfig,
    ) -> Result<RunResult> {
        cfg.validate()?;
        if reference.n_qubits() != h0.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: h0.n_qubits(),
                found: reference.n_qubits(),
            });
        }
        let policy = self.policies.create(&cfg.scoring)?;
        let search = self.searches.create(&cfg.search_strategy, &cfg.search)?;

        let mut h = h0.clone();
        h.set_prune_eps(cfg.prune_eps);
        let initial_energy = h.expectation(reference)?;
        let mut trajectory = Trajectory {
            config: cfg.into(),
            n_qubits: h.n_qubits(),
            reference: reference.bits().to_string(),
            initial_energy,
            initial_term_count: h.len(),
            iterations: Vec::new(),
            status: RunStatus::MaxIterations,
            final_hamiltonian: None,
        };
        let mut previous_energy = initial_energy;

        for iteration in 1..=cfg.max_iterations {
            let started = Instant::now();
            let grouping = h.ising_grouping();
            let table = screen_grouping(&grouping, reference, cfg.gradient_floor)?;
            let grad_norm = table.grad_norm();
            if table.is_empty() || grad_norm <= cfg.grad_norm_eps {
                trajectory.status = RunStatus::ConvergedGradNorm;
                break;
            }
            let ctx = SearchContext::new(&h, &grouping);
            let selection = policy.select(&ctx, &table, search.as_ref())?;
            let generator = selection.generator;
            let growth_bound = growth_exact(&h, &generator)?.growth;
            let solution = minimize_tau_grouped(&h, &grouping, reference, &generator)?;
            let dressed = h.dress(&generator, solution.tau)?;
            debug_assert!(dressed.len() <= h.len() + growth_bound);

            let record = IterationRecord {
                iteration,
                generator,
                gradient: selection.chosen.partition.gradient,
                growth_bound,
                tau_opt: solution.tau,
                energy: solution.energy,
                term_count: dressed.len(),
                grad_norm,
                n_query: selection.n_query,
                partition_score: selection.chosen.score,
                wall_time_s: cfg
                    .record_timings
                    .then(|| started.elapsed().as_secs_f64()),
            };
            info!(
                "K={} gen={} g={:.3e} gamma={} tau={:.6} E={:.10} M={}",
                record.iteration,
                record.generator,
                record.gradient,
                record.growth_bound,
                record.tau_opt,
                record.energy,
                record.term_count
            );
            if selection.canonical_fallbacks > 0 {
                debug!(
                    "K={iteration}: {} partitions fell back to canonical elements",
                    selection.canonical_fallbacks
                );
            }
            let delta = (record.energy - previous_energy).abs();
            previous_energy = record.energy;
            trajectory.iterations.push(record);
            h = dressed;
            if cfg.energy_tol > 0.0 && delta < cfg.energy_tol {
                trajectory.status = RunStatus::ConvergedEnergy;
                break;
            }
        }
        Ok(RunResult {
            trajectory,
            final_hamiltonian: h,
        })
    }
}

/// Runs with the default registries.
pub fn run(h0: &PauliHamiltonian, reference: &ReferenceState, cfg: &RunConfig) -> Result<RunResult> {
    Engine::default().run(h0, reference, cfg)
}

/// Applies `(generator, tau)` steps in order.
pub fn replay<'a, I>(h0: &PauliHamiltonian, steps: I) -> Result<PauliHamiltonian>
where
    I: IntoIterator<Item = (&'a PauliProduct, f64)>,
{
    let mut h = h0.clone();
    for (generator, tau) in steps {
        h = h.dress(generator, tau)?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(s: &str) -> PauliProduct {
        s.parse().unwrap()
    }

    fn ham(n: usize, terms: &[(&str, f64)]) -> PauliHamiltonian {
        PauliHamiltonian::from_terms(n, 0.0, terms.iter().map(|&(s, c)| (p(s), c)), DEFAULT_PRUNE_EPS)
            .unwrap()
    }

    #[test]
    fn x_ground_state_in_one_step() {
        let r = ReferenceState::parse("0").unwrap();
        let sol = minimize_tau(&ham(1, &[("X", 1.0)]), &r, &p("Y")).unwrap();
        assert!((sol.tau + FRAC_PI_2).abs() < 1e-15);
        assert!((sol.energy + 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_curve_is_an_error() {
        let r = ReferenceState::parse("0").unwrap();
        assert!(matches!(
            minimize_tau(&ham(1, &[("Z", 1.0)]), &r, &p("Z")),
            Err(Error::FlatEnergyCurve { .. })
        ));
    }

    #[test]
    fn diagonal_hamiltonian_converges_immediately() {
        let h = ham(2, &[("ZI", 1.0), ("IZ", 0.5), ("ZZ", 0.2)]);
        let r = ReferenceState::parse("11").unwrap();
        let out = run(&h, &r, &RunConfig::default()).unwrap();
        assert!(out.trajectory.iterations.is_empty());
        assert_eq!(out.trajectory.status, RunStatus::ConvergedGradNorm);
    }

    #[test]
    fn energy_tolerance_stops_the_loop() {
        let h = ham(1, &[("X", 1.0), ("Z", 0.3)]);
        let r = ReferenceState::parse("0").unwrap();
        let cfg = RunConfig {
            energy_tol: 1e-6,
            max_iterations: 50,
            ..RunConfig::default()
        };
        let out = run(&h, &r, &cfg).unwrap();
        // a single qubit is solved exactly by one rotation
        let exact = -(1.0f64 + 0.09).sqrt();
        assert!((out.trajectory.iterations[0].energy - exact).abs() < 1e-12);
        assert!(out.trajectory.iterations.len() <= 2);
        assert_ne!(out.trajectory.status, RunStatus::MaxIterations);
    }

    #[test]
    fn invalid_config_rejected() {
        let h = ham(1, &[("X", 1.0)]);
        let r = ReferenceState::parse("0").unwrap();
        let cfg = RunConfig {
            max_iterations: 0,
            ..RunConfig::default()
        };
        assert!(run(&h, &r, &cfg).is_err());
        let cfg = RunConfig {
            search_strategy: "nope".into(),
            ..RunConfig::default()
        };
        assert!(matches!(run(&h, &r, &cfg), Err(Error::UnknownStrategy { .. })));
    }
}
