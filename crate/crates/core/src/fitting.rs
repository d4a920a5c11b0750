//! Genetic-algorithm fitting of the six model parameters to summary curves,
//! and the Monte Carlo noise floor used to judge a fit.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attention::{theta, FixationConfig};
use crate::error::{Error, Result};
use crate::experiment::{
    choice_prob_by_bias, group_mean, rt_by_clarity, run_batch, switches_by_clarity, GroupedCurve, Observation,
    SummaryCurves, TrialBatch, ALL_CHOICES,
};
use crate::params::ModelParams;
use crate::seed::{derive_seed, stream, tag};

pub const GENE_NAMES: [&str; 6] = ["d", "m", "n", "r", "b_start", "sigma"];

/// Box bounds `[lower, upper]` for each free parameter. A gene with
/// `lower == upper` is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSpace {
    pub d: [f64; 2],
    pub m: [f64; 2],
    pub n: [f64; 2],
    pub r: [f64; 2],
    pub b_start: [f64; 2],
    pub sigma: [f64; 2],
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            d: [1e-4, 1e-2],
            m: [0.0, 1.0],
            n: [1.0, 3.0],
            r: [0.0, 1.0],
            b_start: [0.5, 5.0],
            sigma: [1e-3, 0.1],
        }
    }
}

impl SearchSpace {
    /// The space containing only `p`.
    pub fn point(p: &ModelParams) -> Self {
        let g = genes(p);
        Self {
            d: [g[0]; 2],
            m: [g[1]; 2],
            n: [g[2]; 2],
            r: [g[3]; 2],
            b_start: [g[4]; 2],
            sigma: [g[5]; 2],
        }
    }

    pub fn bounds(&self) -> [[f64; 2]; 6] {
        [self.d, self.m, self.n, self.r, self.b_start, self.sigma]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in GENE_NAMES.iter().zip(self.bounds()) {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidSpace(format!("{name}: [{lo}, {hi}]")));
            }
            if lo < 0.0 {
                return Err(Error::InvalidSpace(format!("{name}: lower bound {lo} < 0")));
            }
        }
        if self.n[0] < 1.0 {
            return Err(Error::InvalidSpace(format!("n: lower bound {} < 1", self.n[0])));
        }
        if self.b_start[0] <= 0.0 {
            return Err(Error::InvalidSpace("b_start: lower bound must be > 0".into()));
        }
        Ok(())
    }

    pub fn contains(&self, p: &ModelParams) -> bool {
        genes(p)
            .iter()
            .zip(self.bounds())
            .all(|(&g, [lo, hi])| g >= lo && g <= hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament_k: usize,
    pub crossover_rate: f64,
    /// Mutation sd as a fraction of each gene's range.
    pub mutation_sd_fraction: f64,
    pub elitism: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 64,
            generations: 100,
            tournament_k: 3,
            crossover_rate: 0.7,
            mutation_sd_fraction: 0.1,
            elitism: 2,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpace(format!("ga: {m}")));
        if self.population < self.elitism + 2 {
            return bad("population must be >= elitism + 2");
        }
        if self.tournament_k < 2 {
            return bad("tournament_k must be >= 2");
        }
        if self.generations == 0 {
            return bad("generations must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover_rate must be in [0, 1]");
        }
        if !(self.mutation_sd_fraction > 0.0) {
            return bad("mutation_sd_fraction must be > 0");
        }
        Ok(())
    }
}

/// Weights of the per-curve MSE terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObjectiveWeights {
    pub choice: f64,
    pub rt: f64,
    pub switches: f64,
    /// Squared difference of timeout rates.
    pub timeout: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            choice: 1.0,
            rt: 1.0,
            switches: 1.0,
            timeout: 1.0,
        }
    }
}

impl ObjectiveWeights {
    pub fn choice_only() -> Self {
        Self {
            choice: 1.0,
            rt: 0.0,
            switches: 0.0,
            timeout: 0.0,
        }
    }
}

/// The three curves an objective compares, averaged over groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCurves {
    pub choice: BTreeMap<i32, f64>,
    pub rt: BTreeMap<i32, f64>,
    pub switches: BTreeMap<i32, f64>,
    pub timeout_rate: f64,
}

impl TargetCurves {
    pub fn from_summary(s: &SummaryCurves) -> Result<Self> {
        let all = |c: &BTreeMap<String, GroupedCurve>, name: &str| {
            c.get(ALL_CHOICES)
                .map(group_mean)
                .ok_or_else(|| Error::schema(0, format!("{name} has no `{ALL_CHOICES}` curve")))
        };
        Ok(Self {
            choice: group_mean(&s.choice_prob_by_bias),
            rt: all(&s.rt_by_clarity, "rt_by_clarity")?,
            switches: all(&s.switches_by_clarity, "switches_by_clarity")?,
            timeout_rate: s.timeout_rate,
        })
    }

    pub fn from_trials<O: Observation>(obs: &[O]) -> Result<Self> {
        let decided = obs.iter().filter(|o| o.choice().is_decided()).count();
        Ok(Self {
            choice: group_mean(&choice_prob_by_bias(obs)?),
            rt: group_mean(&rt_by_clarity(obs, false)?[ALL_CHOICES]),
            switches: group_mean(&switches_by_clarity(obs, false)?[ALL_CHOICES]),
            timeout_rate: 1.0 - decided as f64 / obs.len() as f64,
        })
    }
}

pub fn genes(p: &ModelParams) -> [f64; 6] {
    [p.d, p.m, p.n, p.r, p.b_start, p.sigma]
}

pub fn with_genes(template: &ModelParams, g: &[f64; 6]) -> ModelParams {
    ModelParams {
        d: g[0],
        m: g[1],
        n: g[2],
        r: g[3],
        b_start: g[4],
        sigma: g[5],
        ..*template
    }
}

/// MSE over the target's keys after dividing both curves by `scale`. A key
/// the simulation does not produce costs 1.
fn curve_error(sim: &BTreeMap<i32, f64>, target: &BTreeMap<i32, f64>, scale: f64) -> f64 {
    if target.is_empty() {
        return 0.0;
    }
    let sum: f64 = target
        .iter()
        .map(|(k, &t)| match sim.get(k) {
            Some(&s) => ((s - t) / scale).powi(2),
            None => 1.0,
        })
        .sum();
    sum / target.len() as f64
}

fn target_scale(curve: &BTreeMap<i32, f64>) -> f64 {
    let s = curve.values().map(|v| v.abs()).sum::<f64>() / curve.len().max(1) as f64;
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Weighted discrepancy between the batch simulated at `params` and `targets`.
///
/// RT and switch curves are divided by the mean absolute target value before
/// squaring so that all terms are on comparable scales.
pub fn objective(
    params: &ModelParams,
    targets: &TargetCurves,
    batch: &TrialBatch,
    fix_config: &FixationConfig,
    eval_seed: u64,
    weights: &ObjectiveWeights,
) -> Result<f64> {
    let sim = run_batch(batch, params, fix_config, eval_seed)?;
    let decided = sim.iter().filter(|t| t.outcome.choice.is_decided()).count();
    let timeout_rate = 1.0 - decided as f64 / sim.len() as f64;
    let timeout_term = weights.timeout * (timeout_rate - targets.timeout_rate).powi(2);
    if decided == 0 {
        return Ok(weights.choice + weights.rt + weights.switches + timeout_term);
    }
    let s = TargetCurves::from_trials(&sim)?;
    Ok(weights.choice * curve_error(&s.choice, &targets.choice, 1.0)
        + weights.rt * curve_error(&s.rt, &targets.rt, target_scale(&targets.rt))
        + weights.switches * curve_error(&s.switches, &targets.switches, target_scale(&targets.switches))
        + timeout_term)
}

/// Everything `fit_ga` needs besides the search space and GA settings.
#[derive(Debug, Clone)]
pub struct FitProblem {
    pub targets: TargetCurves,
    pub batch: TrialBatch,
    pub fix_config: FixationConfig,
    /// Supplies `dt`, `t_max` and the sign convention.
    pub template: ModelParams,
    pub weights: ObjectiveWeights,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub best_params: ModelParams,
    /// Objective of `best_params` at the evaluation seed.
    pub objective: f64,
    /// Best objective so far after each generation (generation 0 is the
    /// initial population).
    pub history: Vec<f64>,
    /// Induced attention modulation at each clarity level of the scenario.
    pub theta_by_clarity: BTreeMap<i32, f64>,
    pub eval_seed: u64,
    /// `best_params` re-evaluated on fresh seeds.
    pub fresh_objectives: Vec<f64>,
    pub fresh_objective_mean: f64,
    pub evaluations: usize,
}

pub const FRESH_SEEDS: u64 = 5;

fn tournament<R: Rng + ?Sized>(fitness: &[f64], k: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..k {
        let c = rng.random_range(0..fitness.len());
        if fitness[c] < fitness[best] {
            best = c;
        }
    }
    best
}

fn evaluate(pop: &[[f64; 6]], problem: &FitProblem, eval_seed: u64) -> Result<Vec<f64>> {
    pop.par_iter()
        .map(|g| {
            objective(
                &with_genes(&problem.template, g),
                &problem.targets,
                &problem.batch,
                &problem.fix_config,
                eval_seed,
                &problem.weights,
            )
        })
        .collect()
}

/// Tournament selection, uniform crossover, Gaussian mutation clamped to the
/// box, and elitism. All objective evaluations share one evaluation seed
/// derived from `ga.seed` (common random numbers), so the landscape is
/// deterministic and the run is reproducible for any thread count.
pub fn fit_ga(problem: &FitProblem, space: &SearchSpace, ga: &GaConfig) -> Result<FitResult> {
    space.validate()?;
    ga.validate()?;
    problem.template.validate()?;
    let bounds = space.bounds();
    let mut rng = stream(ga.seed, 0, tag::GA);
    let eval_seed = derive_seed(ga.seed, 0, tag::EVAL);

    let mut pop: Vec<[f64; 6]> = (0..ga.population)
        .map(|_| {
            let mut g = [0.0; 6];
            for (gene, [lo, hi]) in g.iter_mut().zip(bounds) {
                *gene = if hi > lo { rng.random_range(lo..=hi) } else { lo };
            }
            g
        })
        .collect();
    let mut fitness = evaluate(&pop, problem, eval_seed)?;
    let mut evaluations = pop.len();

    let argmin = |f: &[f64]| {
        f.iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("population is non-empty")
    };
    let mut best_i = argmin(&fitness);
    let mut best = (pop[best_i], fitness[best_i]);
    let mut history = vec![best.1];

    for _ in 1..ga.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
        let mut next: Vec<[f64; 6]> = order[..ga.elitism].iter().map(|&i| pop[i]).collect();
        let mut next_fit: Vec<f64> = order[..ga.elitism].iter().map(|&i| fitness[i]).collect();

        let mut children = Vec::with_capacity(ga.population - ga.elitism);
        while children.len() < ga.population - ga.elitism {
            let a = pop[tournament(&fitness, ga.tournament_k, &mut rng)];
            let b = pop[tournament(&fitness, ga.tournament_k, &mut rng)];
            let mut child = a;
            if rng.random::<f64>() < ga.crossover_rate {
                for (c, &bg) in child.iter_mut().zip(&b) {
                    if rng.random::<bool>() {
                        *c = bg;
                    }
                }
            }
            for (c, [lo, hi]) in child.iter_mut().zip(bounds) {
                let z: f64 = rng.sample(StandardNormal);
                *c = (*c + z * ga.mutation_sd_fraction * (hi - lo)).clamp(lo, hi);
            }
            children.push(child);
        }
        let child_fit = evaluate(&children, problem, eval_seed)?;
        evaluations += children.len();
        next.extend(children);
        next_fit.extend(child_fit);
        pop = next;
        fitness = next_fit;

        best_i = argmin(&fitness);
        if fitness[best_i] < best.1 {
            best = (pop[best_i], fitness[best_i]);
        }
        history.push(best.1);
    }

    let best_params = with_genes(&problem.template, &best.0);
    let fresh_objectives = (0..FRESH_SEEDS)
        .map(|i| {
            objective(
                &best_params,
                &problem.targets,
                &problem.batch,
                &problem.fix_config,
                derive_seed(ga.seed, i + 1, tag::EVAL),
                &problem.weights,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let fresh_objective_mean = fresh_objectives.iter().sum::<f64>() / fresh_objectives.len() as f64;
    Ok(FitResult {
        theta_by_clarity: theta_by_clarity(&best_params, problem.batch.scenario)?,
        best_params,
        objective: best.1,
        history,
        eval_seed,
        fresh_objectives,
        fresh_objective_mean,
        evaluations,
    })
}

pub fn theta_by_clarity(p: &ModelParams, scenario: crate::scenario::ScenarioKind) -> Result<BTreeMap<i32, f64>> {
    let clarities: std::collections::BTreeSet<i32> = scenario.conditions().iter().map(|c| c.clarity()).collect();
    clarities
        .into_iter()
        .map(|c| theta(c, p.m, p.n).map(|t| (c, t)))
        .collect()
}

/// Spread of the objective between independent simulations of the same
/// parameters: how small an objective sampling noise alone allows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseFloor {
    pub samples: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    /// Largest sampled value; fits are judged against this.
    pub threshold: f64,
}

/// Simulate `params` once to build targets, then score `params` against them
/// on `n_samples` fresh seeds.
pub fn noise_floor(
    params: &ModelParams,
    batch: &TrialBatch,
    fix_config: &FixationConfig,
    weights: &ObjectiveWeights,
    n_samples: u64,
    seed: u64,
) -> Result<NoiseFloor> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { need: 2, got: n_samples as usize });
    }
    let reference = run_batch(batch, params, fix_config, derive_seed(seed, u64::MAX, tag::EVAL))?;
    let targets = TargetCurves::from_trials(&reference)?;
    let samples = (0..n_samples)
        .into_par_iter()
        .map(|i| objective(params, &targets, batch, fix_config, derive_seed(seed, i, tag::EVAL), weights))
        .collect::<Result<Vec<_>>>()?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let threshold = samples.iter().copied().fold(0.0, f64::max);
    Ok(NoiseFloor {
        samples,
        mean,
        sd,
        threshold,
    })
}
