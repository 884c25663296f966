//! JSON scenario runner: parses a scenario file, dispatches to the right
//! experiment, and writes deterministic report files. Given the same
//! scenario and seed the outputs are byte-identical.

use crate::coding::{
    self, bits_from_ascii, bits_from_bytes, CompressionVerdict, FamilyMember, FamilyResult,
    Hypothesis,
};
use crate::confirmation::{
    compare_measures, confirmation_census, confirmation_census_float, CensusReport,
    FloatCensusReport, MeasureComparison, WeightTheory,
};
use crate::evolution::{
    exact_many_worlds, mind_ratio, one_world_ensemble, EvolutionConfig, OneWorldSummary,
    WorldDistribution,
};
use crate::exact::{self, rat_to_f64, rat_to_string, Rat};
use crate::multiverse::{
    ensemble_measure, evolve_bounded, BranchEnsemble, MeasureKind, MultiverseError,
    MultiverseSpec, SplitSchedule, validate_spec, DEFAULT_CLASS_CAPACITY,
};
use crate::strategy::{
    find_violation, run_election, successor_caring_weights, timescale_decisions, Axiom,
    CaringScheme, ElectionReport, Electorate, HistoryTree, Prospect, RankKey, SearchConfig,
    Strategy, StrategyKind, TimescaleParams, WeightMode,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown experiment kind {0:?}")]
    UnknownKind(String),
}

impl ScenarioError {
    /// CLI contract: 2 for parse/validation trouble, 3 when an exact
    /// computation refuses to exceed its capacity bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Capacity(_) => 3,
            _ => 2,
        }
    }
}

fn from_multiverse(e: MultiverseError) -> ScenarioError {
    match e {
        MultiverseError::Capacity { .. } => ScenarioError::Capacity(e.to_string()),
        other => ScenarioError::Validation(other.to_string()),
    }
}

/// A named experiment with its parameter block and output paths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Outputs::is_empty")]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

impl Outputs {
    fn is_empty(&self) -> bool {
        self.json.is_none() && self.csv.is_none()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "params", rename_all = "snake_case")]
pub enum Experiment {
    Evolve(EvolveParams),
    Census(CensusParams),
    CompareMeasures(CompareParams),
    StrategyRank(StrategyRankParams),
    Stv(StvParams),
    AxiomSearch(AxiomSearchParams),
    Timescale(TimescaleScenarioParams),
    CompressionTest(CompressionParams),
    FamilySearch(FamilyParams),
    Evolution(EvolutionParams),
    CaringWeights(CaringParams),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Evolve(_) => "evolve",
            Experiment::Census(_) => "census",
            Experiment::CompareMeasures(_) => "compare_measures",
            Experiment::StrategyRank(_) => "strategy_rank",
            Experiment::Stv(_) => "stv",
            Experiment::AxiomSearch(_) => "axiom_search",
            Experiment::Timescale(_) => "timescale",
            Experiment::CompressionTest(_) => "compression_test",
            Experiment::FamilySearch(_) => "family_search",
            Experiment::Evolution(_) => "evolution",
            Experiment::CaringWeights(_) => "caring_weights",
        }
    }
}

pub const EXPERIMENT_KINDS: &[&str] = &[
    "evolve",
    "census",
    "compare_measures",
    "strategy_rank",
    "stv",
    "axiom_search",
    "timescale",
    "compression_test",
    "family_search",
    "evolution",
    "caring_weights",
];

// ---------------------------------------------------------------------------
// parameter blocks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveParams {
    pub spec: MultiverseSpec,
    pub steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<usize>,
    /// Per-press overrides of the split variant's weight shares.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub split_overrides: Vec<SplitOverride>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<MeasureKind>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitOverride {
    pub press: u64,
    #[serde(with = "exact::serde_rat_vec_vec")]
    pub q_split: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusParams {
    pub spec: MultiverseSpec,
    pub steps: u64,
    pub measure: MeasureKind,
    #[serde(with = "exact::serde_rat")]
    pub tolerance: Rat,
    /// "exact" (default) or "float"; float is a reporting-only path for
    /// press counts beyond exact-arithmetic reach.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareParams {
    pub spec: MultiverseSpec,
    pub steps: u64,
    pub reference: WeightTheory,
    #[serde(with = "exact::serde_rat")]
    pub tolerance: Rat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyRankParams {
    pub strategies: Vec<Strategy>,
    pub prospects: Vec<Prospect>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StvParams {
    pub prospects: Vec<Prospect>,
    #[serde(default)]
    pub weight_mode: WeightMode,
    #[serde(default)]
    pub electorate: Electorate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomSearchParams {
    pub pairs: Vec<AxiomPair>,
    #[serde(default)]
    pub config: SearchConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomPair {
    pub strategy: Strategy,
    pub axiom: Axiom,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimescaleScenarioParams {
    #[serde(with = "exact::serde_rat")]
    pub percentile: Rat,
    #[serde(with = "exact::serde_rat")]
    pub pay_per_step: Rat,
    #[serde(with = "exact::serde_rat")]
    pub lethality: Rat,
    pub horizon: u64,
    pub granularities: Vec<u64>,
    #[serde(
        default = "crate::strategy::timescale_default_death_utility",
        with = "exact::serde_rat"
    )]
    pub death_utility: Rat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataSource {
    /// ASCII 0/1 characters inline.
    InlineBits { bits: String },
    /// File of ASCII 0/1 text (whitespace ignored).
    TextFile { path: String },
    /// Raw bytes, most significant bit first.
    RawFile { path: String },
    /// `zeroes` zero bits followed by ones, `length` bits total.
    ZeroesThenOnes { length: u64, zeroes: u64 },
    /// Seeded uniform pseudorandom bits.
    SeededRandom { length: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompressionParams {
    pub data: DataSource,
    #[serde(flatten)]
    pub hypothesis: Hypothesis,
    pub slack: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyParams {
    pub data: DataSource,
    /// Zero-rate grid p = j/p_denominator for j = 0..=p_denominator,
    /// crossed with the k values, in that order.
    pub p_denominator: u64,
    #[serde(default = "default_k_values")]
    pub k_values: Vec<u64>,
}

fn default_k_values() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub first: EvolutionConfig,
    pub second: EvolutionConfig,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaringParams {
    pub tree: HistoryTree,
    #[serde(default = "default_caring_scheme")]
    pub scheme: CaringScheme,
}

fn default_caring_scheme() -> CaringScheme {
    CaringScheme::MemoryBranchCounting
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub scenario: String,
    pub experiment: &'static str,
    pub report: T,
}

#[derive(Debug, Serialize)]
pub struct EvolveReport {
    pub ensemble: BranchEnsemble,
    pub total_multiplicity: String,
    pub measures: Vec<MeasureTable>,
}

#[derive(Debug, Serialize)]
pub struct MeasureTable {
    pub kind: MeasureKind,
    pub masses: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CensusScenarioReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<CensusReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float: Option<FloatCensusReport>,
}

#[derive(Debug, Serialize)]
pub struct CompareScenarioReport {
    #[serde(flatten)]
    pub comparison: MeasureComparison,
    pub counting_mass_approx: f64,
    pub caring_mass_approx: f64,
}

#[derive(Debug, Serialize)]
pub struct StrategyRankReport {
    pub rankings: Vec<StrategyRanking>,
}

#[derive(Debug, Serialize)]
pub struct StrategyRanking {
    pub strategy: Strategy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keyed: Option<Vec<RankedProspect>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub election: Option<ElectionReport>,
}

#[derive(Debug, Serialize)]
pub struct RankedProspect {
    pub prospect: usize,
    /// 0 is best; equal ranks mean indifference.
    pub rank: usize,
    pub key: RankKey,
}

#[derive(Debug, Serialize)]
pub struct AxiomSearchReport {
    pub config: SearchConfig,
    pub results: Vec<AxiomSearchResult>,
}

#[derive(Debug, Serialize)]
pub struct AxiomSearchResult {
    pub strategy: Strategy,
    pub axiom: Axiom,
    pub candidates_checked: u64,
    pub witness_found: bool,
    /// Always re-checked by direct preference evaluation when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<crate::strategy::Witness>,
}

#[derive(Debug, Serialize)]
pub struct TimescaleReport {
    pub runs: Vec<TimescaleRun>,
}

#[derive(Debug, Serialize)]
pub struct TimescaleRun {
    pub granularity: u64,
    pub epochs: u64,
    pub survival_mass: String,
    pub death_mass: String,
    pub accept: bool,
}

#[derive(Debug, Serialize)]
pub struct CompressionReport {
    pub data: DataSummary,
    pub verdict: CompressionVerdict,
}

#[derive(Debug, Serialize)]
pub struct DataSummary {
    pub bits: u64,
    pub zeroes: u64,
    pub source: DataSource,
}

#[derive(Debug, Serialize)]
pub struct FamilyReport {
    pub data: DataSummary,
    pub result: FamilyResult,
}

#[derive(Debug, Serialize)]
pub struct EvolutionReport {
    pub first: SpeciesReport,
    pub second: SpeciesReport,
    pub mind_ratio: String,
    pub mind_ratio_approx: f64,
}

#[derive(Debug, Serialize)]
pub struct SpeciesReport {
    pub config: EvolutionConfig,
    pub many_worlds: WorldDistribution,
    pub expected_population: String,
    pub one_world: OneWorldSummary,
}

#[derive(Debug, Serialize)]
pub struct CaringReport {
    pub tree: HistoryTree,
    pub weights: Vec<String>,
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides every seed in the scenario (Monte Carlo and generated
    /// data).
    pub seed: Option<u64>,
    /// Directory output paths are resolved against.
    pub out_dir: Option<PathBuf>,
    /// Switch census evaluation to the floating-point reporting path.
    pub float_report: bool,
}

#[derive(Debug)]
pub struct RunOutput {
    pub scenario_name: String,
    pub experiment: &'static str,
    /// The report document, pretty-printed.
    pub report_json: String,
    /// Files written, in write order.
    pub files: Vec<PathBuf>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// Loads, runs, and writes the scenario's outputs.
pub fn run_scenario_file(path: &Path, options: &RunOptions) -> Result<RunOutput, ScenarioError> {
    let scenario = load_scenario(path)?;
    run_scenario(&scenario, options)
}

pub fn run_scenario(
    scenario: &Scenario,
    options: &RunOptions,
) -> Result<RunOutput, ScenarioError> {
    let mut csv: Option<String> = None;
    let report_json = match &scenario.experiment {
        Experiment::Evolve(p) => to_report(scenario, run_evolve(p)?)?,
        Experiment::Census(p) => {
            let report = run_census(p, options)?;
            csv = census_csv(&report);
            to_report(scenario, report)?
        }
        Experiment::CompareMeasures(p) => to_report(scenario, run_compare(p)?)?,
        Experiment::StrategyRank(p) => to_report(scenario, run_strategy_rank(p)?)?,
        Experiment::Stv(p) => to_report(scenario, run_stv(p)?)?,
        Experiment::AxiomSearch(p) => to_report(scenario, run_axiom_search(p)?)?,
        Experiment::Timescale(p) => to_report(scenario, run_timescale(p)?)?,
        Experiment::CompressionTest(p) => to_report(scenario, run_compression(p, options)?)?,
        Experiment::FamilySearch(p) => to_report(scenario, run_family(p, options)?)?,
        Experiment::Evolution(p) => to_report(scenario, run_evolution(p, options)?)?,
        Experiment::CaringWeights(p) => to_report(scenario, run_caring(p)?)?,
    };
    let mut files = Vec::new();
    if let Some(json_path) = &scenario.outputs.json {
        files.push(write_output(options, json_path, &report_json)?);
    }
    if let (Some(csv_path), Some(csv_text)) = (&scenario.outputs.csv, &csv) {
        files.push(write_output(options, csv_path, csv_text)?);
    }
    Ok(RunOutput {
        scenario_name: scenario.name.clone(),
        experiment: scenario.experiment.kind(),
        report_json,
        files,
    })
}

fn to_report<T: Serialize>(scenario: &Scenario, report: T) -> Result<String, ScenarioError> {
    let doc = RunReport {
        scenario: scenario.name.clone(),
        experiment: scenario.experiment.kind(),
        report,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn write_output(
    options: &RunOptions,
    rel: &str,
    content: &str,
) -> Result<PathBuf, ScenarioError> {
    let path = match &options.out_dir {
        Some(dir) => dir.join(rel),
        None => PathBuf::from(rel),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| ScenarioError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    std::fs::write(&path, content).map_err(|source| ScenarioError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn run_evolve(p: &EvolveParams) -> Result<EvolveReport, ScenarioError> {
    let spec = validate_spec(p.spec.clone()).map_err(from_multiverse)?;
    let mut schedule = SplitSchedule::new();
    for over in &p.split_overrides {
        schedule.insert(over.press, over.q_split.clone());
    }
    let ensemble = evolve_bounded(
        &spec,
        p.steps,
        p.capacity.unwrap_or(DEFAULT_CLASS_CAPACITY),
        &schedule,
    )
    .map_err(from_multiverse)?;
    let measures = p
        .measures
        .iter()
        .map(|&kind| {
            ensemble_measure(&ensemble, kind)
                .map(|masses| MeasureTable {
                    kind,
                    masses: masses.iter().map(rat_to_string).collect(),
                })
                .map_err(from_multiverse)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EvolveReport {
        total_multiplicity: ensemble.total_multiplicity().to_string(),
        ensemble,
        measures,
    })
}

fn run_census(
    p: &CensusParams,
    options: &RunOptions,
) -> Result<CensusScenarioReport, ScenarioError> {
    let spec = validate_spec(p.spec.clone()).map_err(from_multiverse)?;
    let wants_float = options.float_report
        || p.evaluation.as_deref() == Some("float");
    if let Some(other) = &p.evaluation {
        if other != "exact" && other != "float" {
            return Err(ScenarioError::Validation(format!(
                "unknown census evaluation mode {other:?}"
            )));
        }
    }
    if wants_float {
        let float = confirmation_census_float(
            &spec,
            p.steps,
            p.measure,
            rat_to_f64(&p.tolerance),
        )
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        Ok(CensusScenarioReport {
            exact: None,
            float: Some(float),
        })
    } else {
        let exact_report = confirmation_census(&spec, p.steps, p.measure, &p.tolerance)
            .map_err(|e| match e {
                crate::confirmation::ConfirmationError::Multiverse(m) => from_multiverse(m),
                other => ScenarioError::Validation(other.to_string()),
            })?;
        Ok(CensusScenarioReport {
            exact: Some(exact_report),
            float: None,
        })
    }
}

fn census_csv(report: &CensusScenarioReport) -> Option<String> {
    let exact_report = report.exact.as_ref()?;
    let mut out = String::from(
        "counts,multiplicity,inferred_theory,self_confirmation_mass,measure_mass\n",
    );
    for row in &exact_report.rows {
        let counts = row
            .counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let theory = row
            .inferred_theory
            .0
            .iter()
            .map(rat_to_string)
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            counts,
            row.multiplicity,
            theory,
            rat_to_string(&row.self_confirmation_mass),
            rat_to_string(&row.measure_mass),
        ));
    }
    Some(out)
}

fn run_compare(p: &CompareParams) -> Result<CompareScenarioReport, ScenarioError> {
    let spec = validate_spec(p.spec.clone()).map_err(from_multiverse)?;
    let comparison = compare_measures(&spec, p.steps, &p.reference, &p.tolerance)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(CompareScenarioReport {
        counting_mass_approx: rat_to_f64(&comparison.counting_mass),
        caring_mass_approx: rat_to_f64(&comparison.caring_mass),
        comparison,
    })
}

fn run_strategy_rank(p: &StrategyRankParams) -> Result<StrategyRankReport, ScenarioError> {
    for prospect in &p.prospects {
        prospect
            .validate()
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    }
    if p.prospects.is_empty() {
        return Err(ScenarioError::Validation("no prospects to rank".into()));
    }
    let rankings = p
        .strategies
        .iter()
        .map(|strategy| {
            if matches!(strategy.kind, StrategyKind::FutureSelfDemocrat { .. }) {
                let electorate = match strategy.kind {
                    StrategyKind::FutureSelfDemocrat {
                        grid_points: Some(points),
                    } => Electorate::Grid { points },
                    _ => Electorate::IntervalExact,
                };
                let election = run_election(&p.prospects, strategy.weight_mode, electorate)
                    .map_err(|e| ScenarioError::Validation(e.to_string()))?;
                Ok(StrategyRanking {
                    strategy: strategy.clone(),
                    keyed: None,
                    election: Some(election),
                })
            } else {
                let mut keyed: Vec<(usize, RankKey)> = p
                    .prospects
                    .iter()
                    .enumerate()
                    .map(|(i, prospect)| {
                        (i, strategy.rank_key(prospect).expect("key-based strategy"))
                    })
                    .collect();
                keyed.sort_by(|(ia, ka), (ib, kb)| kb.cmp(ka).then(ia.cmp(ib)));
                let mut entries = Vec::with_capacity(keyed.len());
                let mut rank = 0usize;
                for (pos, (prospect, key)) in keyed.iter().enumerate() {
                    if pos > 0 && keyed[pos - 1].1 != *key {
                        rank = pos;
                    }
                    entries.push(RankedProspect {
                        prospect: *prospect,
                        rank,
                        key: key.clone(),
                    });
                }
                Ok(StrategyRanking {
                    strategy: strategy.clone(),
                    keyed: Some(entries),
                    election: None,
                })
            }
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok(StrategyRankReport { rankings })
}

fn run_stv(p: &StvParams) -> Result<ElectionReport, ScenarioError> {
    for prospect in &p.prospects {
        prospect
            .validate()
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    }
    run_election(&p.prospects, p.weight_mode, p.electorate)
        .map_err(|e| ScenarioError::Validation(e.to_string()))
}

fn run_axiom_search(p: &AxiomSearchParams) -> Result<AxiomSearchReport, ScenarioError> {
    let results = p
        .pairs
        .iter()
        .map(|pair| {
            let outcome = find_violation(&pair.strategy, pair.axiom, &p.config);
            let verified = outcome.witness.as_ref().map(|w| w.verify(&pair.strategy));
            AxiomSearchResult {
                strategy: pair.strategy.clone(),
                axiom: pair.axiom,
                candidates_checked: outcome.candidates_checked,
                witness_found: outcome.witness.is_some(),
                verified,
                witness: outcome.witness,
            }
        })
        .collect();
    Ok(AxiomSearchReport {
        config: p.config.clone(),
        results,
    })
}

fn run_timescale(p: &TimescaleScenarioParams) -> Result<TimescaleReport, ScenarioError> {
    let runs = p
        .granularities
        .iter()
        .map(|&granularity| {
            let params = TimescaleParams {
                percentile: p.percentile.clone(),
                pay_per_step: p.pay_per_step.clone(),
                lethality: p.lethality.clone(),
                horizon: p.horizon,
                granularity,
                death_utility: p.death_utility.clone(),
            };
            let decisions = timescale_decisions(&params)
                .map_err(|e| ScenarioError::Validation(e.to_string()))?;
            let first = decisions.first().expect("at least one epoch");
            Ok(TimescaleRun {
                granularity,
                epochs: decisions.len() as u64,
                survival_mass: rat_to_string(&first.survival_mass),
                death_mass: rat_to_string(&first.death_mass),
                accept: first.accept,
            })
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok(TimescaleReport { runs })
}

fn materialize_data(
    source: &DataSource,
    options: &RunOptions,
) -> Result<(Vec<bool>, DataSource), ScenarioError> {
    let effective = match (source, options.seed) {
        (DataSource::SeededRandom { length, .. }, Some(seed)) => DataSource::SeededRandom {
            length: *length,
            seed,
        },
        _ => source.clone(),
    };
    let bits = match &effective {
        DataSource::InlineBits { bits } => {
            bits_from_ascii(bits).map_err(ScenarioError::Validation)?
        }
        DataSource::TextFile { path } => {
            let text =
                std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
                    path: PathBuf::from(path),
                    source,
                })?;
            bits_from_ascii(&text).map_err(ScenarioError::Validation)?
        }
        DataSource::RawFile { path } => {
            let bytes = std::fs::read(path).map_err(|source| ScenarioError::Io {
                path: PathBuf::from(path),
                source,
            })?;
            bits_from_bytes(&bytes)
        }
        DataSource::ZeroesThenOnes { length, zeroes } => {
            if zeroes > length {
                return Err(ScenarioError::Validation(format!(
                    "{zeroes} zeroes cannot fit in {length} bits"
                )));
            }
            (0..*length).map(|i| i >= *zeroes).collect()
        }
        DataSource::SeededRandom { length, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*length).map(|_| rng.gen::<bool>()).collect()
        }
    };
    if bits.is_empty() {
        return Err(ScenarioError::Validation("data is empty".into()));
    }
    Ok((bits, effective))
}

fn run_compression(
    p: &CompressionParams,
    options: &RunOptions,
) -> Result<CompressionReport, ScenarioError> {
    let (bits, source) = materialize_data(&p.data, options)?;
    let verdict = coding::compression_test(&bits, &p.hypothesis, p.slack);
    Ok(CompressionReport {
        data: DataSummary {
            bits: bits.len() as u64,
            zeroes: bits.iter().filter(|&&b| !b).count() as u64,
            source,
        },
        verdict,
    })
}

fn run_family(p: &FamilyParams, options: &RunOptions) -> Result<FamilyReport, ScenarioError> {
    let (bits, source) = materialize_data(&p.data, options)?;
    if p.p_denominator == 0 {
        return Err(ScenarioError::Validation(
            "p_denominator must be positive".into(),
        ));
    }
    let mut family = Vec::new();
    for &k in &p.k_values {
        for j in 0..=p.p_denominator {
            family.push(FamilyMember {
                p: Rat::new((j as i64).into(), (p.p_denominator as i64).into()),
                k,
            });
        }
    }
    let result = coding::enumerate_family(&family, &bits)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(FamilyReport {
        data: DataSummary {
            bits: bits.len() as u64,
            zeroes: bits.iter().filter(|&&b| !b).count() as u64,
            source,
        },
        result,
    })
}

fn run_evolution(
    p: &EvolutionParams,
    options: &RunOptions,
) -> Result<EvolutionReport, ScenarioError> {
    let seed = options.seed.unwrap_or(p.seed);
    let species = |config: &EvolutionConfig, seed: u64| -> Result<SpeciesReport, ScenarioError> {
        let many_worlds =
            exact_many_worlds(config).map_err(|e| ScenarioError::Validation(e.to_string()))?;
        let one_world = one_world_ensemble(config, p.trials, seed)
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        Ok(SpeciesReport {
            config: config.clone(),
            expected_population: rat_to_string(&many_worlds.expected_population()),
            many_worlds,
            one_world,
        })
    };
    let first = species(&p.first, seed)?;
    let second = species(&p.second, seed.wrapping_add(1))?;
    let ratio = mind_ratio(&p.first, &p.second)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(EvolutionReport {
        first,
        second,
        mind_ratio: rat_to_string(&ratio),
        mind_ratio_approx: rat_to_f64(&ratio),
    })
}

fn run_caring(p: &CaringParams) -> Result<CaringReport, ScenarioError> {
    let weights = successor_caring_weights(&p.tree, p.scheme)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(CaringReport {
        tree: p.tree.clone(),
        weights: weights.iter().map(rat_to_string).collect(),
    })
}

// ---------------------------------------------------------------------------
// bundled scenarios
// ---------------------------------------------------------------------------

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

/// Scenario files shipped with the crate, also present under `scenarios/`.
pub const BUNDLED_SCENARIOS: &[(&str, &str)] = bundled![
    "weightless_census_n100",
    "decorated_census_n100",
    "replicating_identity_n100",
    "qualia_divergence_n100",
    "axiom_witnesses",
    "timescale_radiation",
    "fair_coin_refutation",
    "pseudorandom_retention",
    "entropy_envelope_n10000",
    "family_search_biased_coin",
    "evolution_model_n20",
    "successor_caring_weights",
    "stv_condorcet_cycle",
    "strategy_catalog_rank",
    "replicating_evolve_small",
];

#[derive(Debug, Clone, Serialize)]
pub struct BundledSummary {
    pub name: String,
    pub experiment: &'static str,
    pub description: Option<String>,
}

/// Names and kinds of every bundled scenario.
pub fn list_scenarios() -> Vec<BundledSummary> {
    BUNDLED_SCENARIOS
        .iter()
        .map(|(name, text)| {
            let scenario = parse_scenario(text)
                .unwrap_or_else(|e| panic!("bundled scenario {name} is malformed: {e}"));
            BundledSummary {
                name: scenario.name,
                experiment: scenario.experiment.kind(),
                description: scenario.description,
            }
        })
        .collect()
}

/// Parameter-schema text for one experiment kind.
pub fn describe(kind: &str) -> Result<&'static str, ScenarioError> {
    let text = match kind {
        "evolve" => {
            "evolve: press the machine repeatedly and report the aggregated ensemble.\n\
             params: spec {variant, outcome_count, weights?, replication?, qualia?, q_split?},\n\
             steps (int), capacity? (class bound, default 10^7),\n\
             split_overrides? [{press, q_split}], measures? [counting|weight|qualia]"
        }
        "census" => {
            "census: per-class inferred weights and self-assessed confirmation mass.\n\
             params: spec, steps, measure (counting|weight|qualia), tolerance (rational string),\n\
             evaluation? (exact|float)"
        }
        "compare_measures" => {
            "compare_measures: confirmation mass of a reference theory under the counting\n\
             measure and under the spec's caring measure (weights or qualia), side by side.\n\
             params: spec (replicating or qualia-enhanced), steps, reference [rationals], tolerance"
        }
        "strategy_rank" => {
            "strategy_rank: rank a list of bets under each strategy.\n\
             params: strategies [{kind, ...kind fields, weight_mode?}], prospects [{entries: [{weight, utility, outcome?, good?}]}]"
        }
        "stv" => {
            "stv: single-transferable-vote election among percentile future selves.\n\
             params: prospects, weight_mode? (weight_sensitive|weight_indifferent),\n\
             electorate? (interval_exact | {grid: {points}})"
        }
        "axiom_search" => {
            "axiom_search: bounded grid search for rationality-axiom violations.\n\
             params: pairs [{strategy, axiom (p1a_transitivity|p2_surething|p3_dominance|p6_continuity)}],\n\
             config? {utilities, weight_denominator, max_outcomes, continuity_probes, continuity_epsilons}"
        }
        "timescale" => {
            "timescale: accept/decline a pay-per-exposure offer at several decision granularities.\n\
             params: percentile, pay_per_step, lethality, horizon, granularities [ints], death_utility?"
        }
        "compression_test" => {
            "compression_test: two-part-code description length against a hypothesis bound.\n\
             params: data {source: inline_bits|text_file|raw_file|zeroes_then_ones|seeded_random, ...},\n\
             hypothesis (incompressible_fair | bounded_composition {p, k}), slack (bits)"
        }
        "family_search" => {
            "family_search: best bounded-composition theory for the data by total description length.\n\
             params: data, p_denominator (grid step), k_values? [ints]"
        }
        "evolution" => {
            "evolution: exact many-worlds species accounting, mind ratio, and one-world Monte Carlo.\n\
             params: first {initial_population, years, extinction_probability?, growth_factor?, policy},\n\
             second (same shape), trials, seed"
        }
        "caring_weights" => {
            "caring_weights: per-successor caring weights from a remembered experiment tree.\n\
             params: tree (nested arrays; [] is a successor), scheme? (memory_branch_counting)"
        }
        other => return Err(ScenarioError::UnknownKind(other.to_string())),
    };
    Ok(text)
}
