//! Run configuration: parsing, validation and resolution to concrete parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use xxz_core::model::{DrawSpec, ModelParams};
use xxz_core::solver::ED_MAX_SITES;

use crate::failure::Failure;

/// Verification and pipeline suites. Declaration order is execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Suite {
    Hamiltonian,
    Identities,
    Intertwining,
    GaugeStructure,
    Commutation,
    TransferDecomposition,
    Actions,
    Spectrum,
    Solve,
    Certify,
    ScalarProducts,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Hamiltonian,
        Suite::Identities,
        Suite::Intertwining,
        Suite::GaugeStructure,
        Suite::Commutation,
        Suite::TransferDecomposition,
        Suite::Actions,
        Suite::Spectrum,
        Suite::Solve,
        Suite::Certify,
        Suite::ScalarProducts,
    ];

    /// Suites that only check identities, without solving anything.
    pub const VERIFY: [Suite; 7] = [
        Suite::Hamiltonian,
        Suite::Identities,
        Suite::Intertwining,
        Suite::GaugeStructure,
        Suite::Commutation,
        Suite::TransferDecomposition,
        Suite::Actions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hamiltonian => "hamiltonian",
            Suite::Identities => "identities",
            Suite::Intertwining => "intertwining",
            Suite::GaugeStructure => "gauge_structure",
            Suite::Commutation => "commutation",
            Suite::TransferDecomposition => "transfer_decomposition",
            Suite::Actions => "actions",
            Suite::Spectrum => "spectrum",
            Suite::Solve => "solve",
            Suite::Certify => "certify",
            Suite::ScalarProducts => "scalar_products",
        }
    }

    /// Largest chain length the suite is validated for.
    pub fn max_sites(self) -> usize {
        use xxz_core::bethe::ACTION_SUITE_MAX_SITES;
        use xxz_core::functional::IDENTITY_SUITE_MAX_SITES;
        use xxz_core::solver::SOLVE_MAX_SITES;
        match self {
            Suite::Identities => IDENTITY_SUITE_MAX_SITES,
            Suite::Actions | Suite::ScalarProducts => ACTION_SUITE_MAX_SITES,
            Suite::Solve | Suite::Certify => SOLVE_MAX_SITES,
            _ => ED_MAX_SITES,
        }
    }

    /// Whether the suite relies on distinct inhomogeneities.
    fn needs_generic_inhomogeneities(self) -> bool {
        matches!(
            self,
            Suite::Identities | Suite::Actions | Suite::Solve | Suite::Certify | Suite::ScalarProducts
        )
    }

    fn prerequisites(self) -> &'static [Suite] {
        match self {
            Suite::Solve => &[Suite::Spectrum],
            Suite::Certify | Suite::ScalarProducts => &[Suite::Spectrum, Suite::Solve],
            _ => &[],
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Suite::Hamiltonian => 1e-8,
            Suite::Identities => 1e-9,
            Suite::Intertwining => 1e-12,
            Suite::GaugeStructure | Suite::Commutation | Suite::TransferDecomposition => 1e-10,
            Suite::Actions => 1e-9,
            Suite::Spectrum | Suite::Solve | Suite::Certify | Suite::ScalarProducts => 1e-8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tolerances keyed by residual-name prefix rather than by suite.
const PREFIX_TOLERANCES: [(&str, f64); 5] = [
    ("asymptotics", 1e-6),
    ("structure[kplus_offdiagonal]", 1e-12),
    ("structure[kminus_21]", 1e-12),
    ("roundtrip", 1e-7),
    ("completeness", 0.0),
];

/// Random-draw section of the config. Unset ranges fall back to the
/// library defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrawConfig {
    pub n_sites: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_re: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_im: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_spread: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneity_spread: Option<f64>,
    #[serde(default)]
    pub homogeneous: bool,
}

impl DrawConfig {
    fn spec(&self, seed: u64) -> DrawSpec {
        let d = DrawSpec::new(self.n_sites, seed);
        DrawSpec {
            eta_re: self.eta_re.unwrap_or(d.eta_re),
            eta_im: self.eta_im.unwrap_or(d.eta_im),
            boundary_center: self.boundary_center.unwrap_or(d.boundary_center),
            boundary_spread: self.boundary_spread.unwrap_or(d.boundary_spread),
            inhomogeneity_spread: self.inhomogeneity_spread.unwrap_or(d.inhomogeneity_spread),
            homogeneous: self.homogeneous,
            ..d
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Params(ModelParams),
    Draw(DrawConfig),
}

impl ModelSpec {
    pub fn n_sites(&self) -> usize {
        match self {
            ModelSpec::Params(p) => p.n_sites,
            ModelSpec::Draw(d) => d.n_sites,
        }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("xxz-out")
}

fn default_probe_count() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    /// Seed for random probes, and for the draw when the draw sets none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default = "default_output")]
    pub output_path: PathBuf,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelSpec::Draw(DrawConfig {
                n_sites: 2,
                seed: Some(0),
                eta_re: None,
                eta_im: None,
                boundary_center: None,
                boundary_spread: None,
                inhomogeneity_spread: None,
                homogeneous: false,
            }),
            seed: None,
            tolerances: BTreeMap::new(),
            suites: Vec::new(),
            output_path: default_output(),
            probe_count: default_probe_count(),
        }
    }
}

pub const MAX_PROBES: usize = 64;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub suites: Vec<Suite>,
}

/// Fully determined run: concrete parameters, seed, suites and tolerances.
#[derive(Clone, Debug, Serialize)]
pub struct Resolved {
    pub seed: u64,
    pub parameters: ModelParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draw_rejections: Option<usize>,
    pub suites: Vec<Suite>,
    pub tolerances: BTreeMap<String, f64>,
    pub probe_count: usize,
    #[serde(skip)]
    pub output_path: PathBuf,
}

impl Resolved {
    /// Tolerance for a residual of `suite`: the longest configured key that
    /// prefixes the residual name, else the suite's own entry.
    pub fn tolerance(&self, suite: Suite, residual: &str) -> f64 {
        self.tolerances
            .iter()
            .filter(|(k, _)| residual.starts_with(k.as_str()))
            .max_by_key(|(k, _)| k.len())
            .map(|(_, &v)| v)
            .unwrap_or(self.tolerances[suite.name()])
    }
}

/// Adds prerequisites and sorts into execution order.
pub fn close_suites(requested: &[Suite]) -> Vec<Suite> {
    let mut out: Vec<Suite> = requested.to_vec();
    for s in requested {
        out.extend_from_slice(s.prerequisites());
    }
    out.sort();
    out.dedup();
    out
}

pub fn resolve(config: &RunConfig, over: &Overrides, default_suites: &[Suite]) -> Result<Resolved, Failure> {
    let n = config.model.n_sites();
    if n == 0 {
        return Err(Failure::Config("n_sites must be positive".into()));
    }
    if n > ED_MAX_SITES {
        return Err(Failure::Config(format!(
            "N exceeds certified limit: N = {n}, limit {ED_MAX_SITES}"
        )));
    }
    if config.probe_count == 0 || config.probe_count > MAX_PROBES {
        return Err(Failure::Config(format!("probe_count must lie in 1..={MAX_PROBES}")));
    }

    let requested = if !over.suites.is_empty() {
        over.suites.clone()
    } else if !config.suites.is_empty() {
        config.suites.clone()
    } else {
        default_suites.to_vec()
    };
    let suites = close_suites(&requested);
    for s in &suites {
        if n > s.max_sites() {
            return Err(Failure::Config(format!(
                "N exceeds certified limit: suite {s} is certified for N <= {}, got N = {n}",
                s.max_sites()
            )));
        }
    }

    let mut tolerances: BTreeMap<String, f64> = Suite::ALL
        .iter()
        .map(|s| (s.name().to_string(), s.default_tolerance()))
        .chain(PREFIX_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)))
        .collect();
    for (k, &v) in &config.tolerances {
        if !v.is_finite() || v < 0.0 {
            return Err(Failure::Config(format!("tolerance {k} must be finite and non-negative")));
        }
        if !tolerances.contains_key(k) {
            log::warn!("tolerance key {k} is not a suite name or a known prefix; used as a residual-name prefix");
        }
        tolerances.insert(k.clone(), v);
    }

    let (seed, parameters, draw_rejections) = match &config.model {
        ModelSpec::Params(p) => {
            p.validate().map_err(Failure::from_validation)?;
            (over.seed.or(config.seed).unwrap_or(0), p.clone(), None)
        }
        ModelSpec::Draw(d) => {
            let seed = over.seed.or(d.seed).or(config.seed).ok_or_else(|| {
                Failure::Config("a random draw needs a seed (model.draw.seed, seed, or --seed)".into())
            })?;
            let (p, rejected) = d.spec(seed).draw().map_err(Failure::from)?;
            log::info!("parameter draw with seed {seed}: {rejected} candidates rejected");
            (seed, p, Some(rejected))
        }
    };

    if suites.iter().any(|s| s.needs_generic_inhomogeneities()) {
        parameters.check_genericity().map_err(Failure::from_validation)?;
    }

    Ok(Resolved {
        seed,
        parameters,
        draw_rejections,
        suites,
        tolerances,
        probe_count: config.probe_count,
        output_path: over.out.clone().unwrap_or_else(|| config.output_path.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw_config(n: usize, seed: Option<u64>) -> RunConfig {
        let mut c = RunConfig::default();
        if let ModelSpec::Draw(d) = &mut c.model {
            d.n_sites = n;
            d.seed = seed;
        }
        c
    }

    #[test]
    fn prerequisites_are_added_in_order() {
        assert_eq!(
            close_suites(&[Suite::Certify, Suite::Hamiltonian]),
            vec![Suite::Hamiltonian, Suite::Spectrum, Suite::Solve, Suite::Certify]
        );
    }

    #[test]
    fn longest_prefix_wins() {
        let r = resolve(&draw_config(2, Some(1)), &Overrides::default(), &Suite::ALL).unwrap();
        assert_eq!(r.tolerance(Suite::Identities, "asymptotics[+]"), 1e-6);
        assert_eq!(r.tolerance(Suite::Identities, "fusion[1]"), 1e-9);
        assert_eq!(r.tolerance(Suite::GaugeStructure, "structure[kminus_21]"), 1e-12);
        assert_eq!(r.tolerance(Suite::GaugeStructure, "structure[kminus_11]"), 1e-10);
    }

    #[test]
    fn draw_without_seed_is_rejected() {
        let err = resolve(&draw_config(2, None), &Overrides::default(), &Suite::ALL).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let over = Overrides {
            seed: Some(3),
            ..Overrides::default()
        };
        assert_eq!(resolve(&draw_config(2, None), &over, &Suite::ALL).unwrap().seed, 3);
    }

    #[test]
    fn size_limits() {
        let e = resolve(&draw_config(9, Some(1)), &Overrides::default(), &[Suite::Spectrum]).unwrap_err();
        assert!(e.to_string().contains("N exceeds certified limit"));
        let e = resolve(&draw_config(4, Some(1)), &Overrides::default(), &[Suite::Actions]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(resolve(&draw_config(4, Some(1)), &Overrides::default(), &[Suite::Solve]).is_ok());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.name()));
            assert_eq!(Suite::from_str(s.name(), false).unwrap(), s);
        }
        assert!(serde_json::from_str::<Suite>("\"bogus\"").is_err());
    }
}
