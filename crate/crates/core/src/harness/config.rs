//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::TableFormat;
use crate::adaboost::BoostParams;
use crate::c45::C45Params;
use crate::dataset::{SplitSpec, SynthSpec};
use crate::error::{Error, Result};
use crate::svm::{SmoParams, SvmLearner, DEFAULT_COST, DEFAULT_GAMMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeProfile {
    /// Unlimited depth.
    Strong,
    /// Depth ≤ 2.
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Svm,
    AdaboostSvm,
    C45(TreeProfile),
    AdaboostC45(TreeProfile),
}

impl Method {
    pub const BENCHMARK: [Method; 4] = [
        Method::Svm,
        Method::AdaboostSvm,
        Method::C45(TreeProfile::Strong),
        Method::AdaboostC45(TreeProfile::Strong),
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Svm => "SVM",
            Method::AdaboostSvm => "AdaboostSVM",
            Method::C45(TreeProfile::Strong) => "C4.5",
            Method::C45(TreeProfile::Weak) => "C4.5-weak",
            Method::AdaboostC45(TreeProfile::Strong) => "AdaboostC4.5",
            Method::AdaboostC45(TreeProfile::Weak) => "AdaboostC4.5-weak",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "SVM" => Method::Svm,
            "AdaboostSVM" => Method::AdaboostSvm,
            "C4.5" => Method::C45(TreeProfile::Strong),
            "C4.5-weak" => Method::C45(TreeProfile::Weak),
            "AdaboostC4.5" => Method::AdaboostC45(TreeProfile::Strong),
            "AdaboostC4.5-weak" => Method::AdaboostC45(TreeProfile::Weak),
            other => {
                return Err(Error::Config(format!(
                    "unknown method {other:?} (expected SVM, AdaboostSVM, C4.5, AdaboostC4.5, C4.5-weak, AdaboostC4.5-weak)"
                )))
            }
        })
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSource {
    Csv {
        path: PathBuf,
        #[serde(default = "yes")]
        has_header: bool,
    },
    Synthetic(SynthSpec),
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub source: DatasetSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmConfig {
    pub gamma: f64,
    pub cost: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        let smo = SmoParams::default();
        SvmConfig {
            gamma: DEFAULT_GAMMA,
            cost: DEFAULT_COST,
            tol: smo.tolerance,
            max_passes: smo.max_passes,
            seed: 0,
        }
    }
}

impl SvmConfig {
    pub fn smo_params(&self) -> SmoParams {
        SmoParams {
            cost: self.cost,
            tolerance: self.tol,
            max_passes: self.max_passes,
            seed: self.seed,
            ..SmoParams::default()
        }
    }

    pub fn learner(&self) -> Result<SvmLearner> {
        SvmLearner::new(self.gamma, self.smo_params())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TreeConfig {
    pub strong: C45Params,
    pub weak: C45Params,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            strong: C45Params::strong(),
            weak: C45Params::weak(),
        }
    }
}

impl TreeConfig {
    pub fn params(&self, profile: TreeProfile) -> &C45Params {
        match profile {
            TreeProfile::Strong => &self.strong,
            TreeProfile::Weak => &self.weak,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: TableFormat,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetEntry>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub split: SplitSpec,
    #[serde(default)]
    pub svm: SvmConfig,
    #[serde(default)]
    pub tree: TreeConfig,
    #[serde(default)]
    pub boost: BoostParams,
    /// z-score features using training-split statistics.
    #[serde(default)]
    pub standardize: bool,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            datasets: Vec::new(),
            methods: Method::BENCHMARK.to_vec(),
            split: SplitSpec::default(),
            svm: SvmConfig::default(),
            tree: TreeConfig::default(),
            boost: BoostParams::default(),
            standardize: false,
            output: OutputConfig::default(),
        }
    }
}

/// The seven phoneme groups with a synthetic stand-in for each:
/// (name, classes, overlap).
pub const PHONEME_GROUPS: [(&str, usize, f64); 7] = [
    ("Vowel", 6, 0.55),
    ("Semi-Vowel", 4, 0.40),
    ("Stops", 6, 0.55),
    ("Others", 3, 0.30),
    ("Nasal", 3, 0.50),
    ("Fricative", 5, 0.42),
    ("Affricate", 2, 0.45),
];

impl ExperimentConfig {
    /// Seven synthetic phoneme-group datasets (39 features, 40 samples per
    /// class) evaluated with all four methods plus the weak-tree pair.
    pub fn phoneme_suite(seed: u64) -> Self {
        let datasets = PHONEME_GROUPS
            .iter()
            .enumerate()
            .map(|(i, &(name, classes, overlap))| DatasetEntry {
                name: name.to_string(),
                source: DatasetSource::Synthetic(SynthSpec {
                    classes,
                    per_class: 40,
                    dimension: 39,
                    overlap,
                    seed: seed.wrapping_mul(1000).wrapping_add(i as u64),
                }),
            })
            .collect();
        let mut methods = Method::BENCHMARK.to_vec();
        methods.push(Method::C45(TreeProfile::Weak));
        methods.push(Method::AdaboostC45(TreeProfile::Weak));
        ExperimentConfig {
            datasets,
            methods,
            split: SplitSpec {
                train_fraction: 0.7,
                seed,
                stratified: false,
            },
            boost: BoostParams {
                seed,
                ..BoostParams::default()
            },
            ..ExperimentConfig::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.datasets.is_empty() {
            return bad("at least one dataset is required".into());
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        for (i, d) in self.datasets.iter().enumerate() {
            if d.name.trim().is_empty() {
                return bad(format!("dataset {i} has an empty name"));
            }
            if self.datasets[..i].iter().any(|o| o.name == d.name) {
                return bad(format!("duplicate dataset name {:?}", d.name));
            }
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return bad(format!("method {m} listed twice"));
            }
        }
        let f = self.split.train_fraction;
        if !(f > 0.0 && f < 1.0) {
            return bad(format!("split.train_fraction {f} not in (0,1)"));
        }
        if !(self.svm.gamma > 0.0) || !self.svm.gamma.is_finite() {
            return bad(format!("svm.gamma must be positive, got {}", self.svm.gamma));
        }
        self.svm
            .smo_params()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for p in [&self.tree.strong, &self.tree.weak] {
            if !(p.min_weight_leaf > 0.0) || !(p.min_gain >= 0.0) {
                return bad("tree min_weight_leaf must be > 0 and min_gain ≥ 0".into());
            }
        }
        if self.boost.rounds == 0 {
            return bad("boost.rounds must be ≥ 1".into());
        }
        if self.boost.resample_size == Some(0) {
            return bad("boost.resample_size must be ≥ 1".into());
        }
        Ok(())
    }

    /// Same experiment with every seed shifted by `offset`.
    pub fn with_seed_offset(&self, offset: u64) -> Self {
        let mut cfg = self.clone();
        cfg.split.seed = cfg.split.seed.wrapping_add(offset);
        cfg.boost.seed = cfg.boost.seed.wrapping_add(offset);
        cfg.svm.seed = cfg.svm.seed.wrapping_add(offset);
        for d in &mut cfg.datasets {
            if let DatasetSource::Synthetic(s) = &mut d.source {
                s.seed = s.seed.wrapping_add(offset);
            }
        }
        cfg
    }
}
