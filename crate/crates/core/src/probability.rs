//! Local transition probabilities on branching cells and the measures they
//! induce.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cells::{CellAnalysis, CellHost, Covering, CoveringStep};
use crate::error::{Error, Result};
use crate::eventset::EventSet;

/// Equality tolerance for probabilities.
pub const TOLERANCE: f64 = 1e-9;

/// `q_c`: weights over the maximal configurations of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellDistribution {
    pub cell: EventSet,
    /// One entry per element of `Ω_c`, in canonical order.
    pub weights: Vec<(EventSet, f64)>,
}

impl CellDistribution {
    pub fn uniform(cell: EventSet, omega: &[EventSet]) -> Self {
        let w = 1.0 / omega.len() as f64;
        CellDistribution {
            cell,
            weights: omega.iter().map(|&o| (o, w)).collect(),
        }
    }

    pub fn weight(&self, choice: EventSet) -> Option<f64> {
        self.weights.iter().find(|(o, _)| *o == choice).map(|&(_, w)| w)
    }
}

/// A table of `(cell, [(configuration, weight)])` rows as read from input.
pub type DistributionTable = Vec<(EventSet, Vec<(EventSet, f64)>)>;

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSource {
    Uniform,
    Table(DistributionTable),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOrder {
    /// Resolve the canonically smallest enabled cell first.
    First,
    /// Resolve the canonically largest enabled cell first.
    Last,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRun {
    pub outcome: EventSet,
    pub trace: Vec<CoveringStep>,
}

pub struct LocallyRandomized<H: CellHost> {
    analysis: CellAnalysis<H>,
    dists: HashMap<EventSet, CellDistribution>,
}

impl<H: CellHost> LocallyRandomized<H> {
    pub fn attach(host: H, source: &DistributionSource) -> Result<Self> {
        let analysis = CellAnalysis::new(host);
        let lf = analysis.check_locally_finite();
        if !lf.holds {
            return Err(Error::Precondition(format!(
                "not locally finite: {} lie in no stopping prefix",
                analysis.host().show(lf.uncovered)
            )));
        }
        let mut omegas: HashMap<EventSet, Vec<EventSet>> = HashMap::new();
        for c in analysis.all_cells() {
            if let Some(prev) = omegas.get(&c.events) {
                if *prev != c.maximal_configs {
                    return Err(Error::Distribution(format!(
                        "cell {} has different maximal configurations depending on where it is enabled",
                        analysis.host().show(c.events)
                    )));
                }
            }
            omegas.insert(c.events, c.maximal_configs);
        }
        let show = |s: EventSet| analysis.host().show(s);

        let mut dists = HashMap::new();
        match source {
            DistributionSource::Uniform => {
                for (&cell, omega) in &omegas {
                    dists.insert(cell, CellDistribution::uniform(cell, omega));
                }
            }
            DistributionSource::Table(rows) => {
                for (cell, entries) in rows {
                    let omega = omegas
                        .get(cell)
                        .ok_or_else(|| Error::Distribution(format!("{} is not a branching cell", show(*cell))))?;
                    if dists.contains_key(cell) {
                        return Err(Error::Distribution(format!("cell {} listed twice", show(*cell))));
                    }
                    let mut weights: Vec<(EventSet, f64)> = omega.iter().map(|&o| (o, 0.0)).collect();
                    for &(config, w) in entries {
                        if !w.is_finite() || w < 0.0 {
                            return Err(Error::Distribution(format!(
                                "weight {w} for {} in cell {} is not a probability",
                                show(config),
                                show(*cell)
                            )));
                        }
                        let slot = weights.iter_mut().find(|(o, _)| *o == config).ok_or_else(|| {
                            Error::Distribution(format!(
                                "{} is not a maximal configuration of cell {}",
                                show(config),
                                show(*cell)
                            ))
                        })?;
                        slot.1 += w;
                    }
                    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
                    if (sum - 1.0).abs() > TOLERANCE {
                        return Err(Error::Distribution(format!(
                            "weights of cell {} sum to {sum}",
                            show(*cell)
                        )));
                    }
                    dists.insert(*cell, CellDistribution { cell: *cell, weights });
                }
                let mut missing: Vec<EventSet> = omegas.keys().filter(|c| !dists.contains_key(c)).copied().collect();
                missing.sort();
                if let Some(&c) = missing.first() {
                    return Err(Error::Distribution(format!("no distribution for cell {}", show(c))));
                }
            }
        }
        Ok(LocallyRandomized { analysis, dists })
    }

    pub fn analysis(&self) -> &CellAnalysis<H> {
        &self.analysis
    }

    pub fn host(&self) -> &H {
        self.analysis.host()
    }

    /// Distributions in canonical cell order.
    pub fn distributions(&self) -> Vec<&CellDistribution> {
        let mut d: Vec<&CellDistribution> = self.dists.values().collect();
        d.sort_by_key(|a| a.cell);
        d
    }

    fn q(&self, cell: EventSet, choice: EventSet) -> Result<f64> {
        let show = |s| self.host().show(s);
        let d = self
            .dists
            .get(&cell)
            .ok_or_else(|| Error::Distribution(format!("no distribution for cell {}", show(cell))))?;
        d.weight(choice).ok_or_else(|| {
            Error::Distribution(format!(
                "{} is not a maximal configuration of cell {}",
                show(choice),
                show(cell)
            ))
        })
    }

    fn product(&self, cov: &Covering) -> Result<f64> {
        cov.steps
            .iter()
            .try_fold(1.0, |acc, s| Ok(acc * self.q(s.cell, s.choice)?))
    }

    /// `p(v)`: the product of `q_c(v ∩ c)` over the covering of `v`.
    pub fn likelihood(&self, v: EventSet) -> Result<f64> {
        self.host().check_configuration(v)?;
        let cov = self.analysis.covering(v)?;
        self.product(&cov)
    }

    /// `ℙ` on the maximal configurations, in canonical order.
    pub fn global_measure(&self) -> Result<Vec<(EventSet, f64)>> {
        let mut out = Vec::new();
        for omega in self.host().maximal_configurations() {
            let cov = self.analysis.valid_decomposition(omega).ok_or_else(|| {
                Error::Measure(format!(
                    "maximal configuration {} is not R-stopped",
                    self.host().show(omega)
                ))
            })?;
            out.push((omega, self.product(&cov)?));
        }
        let total: f64 = out.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::Measure(format!("total mass {total}")));
        }
        Ok(out)
    }

    /// `ℙ(S(v))`: the mass of the maximal configurations extending `v`.
    pub fn shadow_probability(&self, v: EventSet) -> Result<f64> {
        self.host().check_configuration(v)?;
        Ok(self
            .global_measure()?
            .into_iter()
            .filter(|(omega, _)| v.is_subset(*omega))
            .map(|(_, p)| p)
            .sum())
    }

    /// The future at `u`, carrying the same cell distributions.
    pub fn future(&self, u: EventSet) -> Result<LocallyRandomized<H>> {
        self.host().check_configuration(u)?;
        Ok(LocallyRandomized {
            analysis: CellAnalysis::new(self.host().future_at(u)),
            dists: self.dists.clone(),
        })
    }

    pub fn sample_run_with(&self, rng: &mut impl Rng, order: CellOrder) -> Result<SampleRun> {
        let mut u = EventSet::EMPTY;
        let mut trace = Vec::new();
        loop {
            let cells = self.analysis.cells_at(u);
            let cell = match order {
                CellOrder::First => cells.first(),
                CellOrder::Last => cells.last(),
            };
            let Some(cell) = cell else { break };
            let dist = self.dists.get(&cell.events).ok_or_else(|| {
                Error::Distribution(format!("no distribution for cell {}", self.host().show(cell.events)))
            })?;
            let x: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = None;
            for &(omega, w) in dist.weights.iter().filter(|(_, w)| *w > 0.0) {
                acc += w;
                pick = Some(omega);
                if x < acc {
                    break;
                }
            }
            let choice =
                pick.ok_or_else(|| Error::Distribution(format!("cell {} has no mass", self.host().show(cell.events))))?;
            trace.push(CoveringStep {
                cell: cell.events,
                enabled_at: u,
                choice,
            });
            u = u | choice;
        }
        Ok(SampleRun { outcome: u, trace })
    }

    /// One run from a generator seeded with `seed`.
    pub fn sample_run(&self, seed: u64, order: CellOrder) -> Result<SampleRun> {
        self.sample_run_with(&mut ChaCha8Rng::seed_from_u64(seed), order)
    }

    /// Outcome counts over `runs` runs sharing one seeded generator, in
    /// canonical order.
    pub fn sample_frequencies(&self, runs: usize, seed: u64, order: CellOrder) -> Result<Vec<(EventSet, usize)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: HashMap<EventSet, usize> = HashMap::new();
        for _ in 0..runs {
            *counts
                .entry(self.sample_run_with(&mut rng, order)?.outcome)
                .or_default() += 1;
        }
        let mut out: Vec<(EventSet, usize)> = counts.into_iter().collect();
        out.sort();
        Ok(out)
    }
}
