//! Pipeline configuration.
//!
//! The configuration file is plain text, one `key = value` per line, with
//! `#` starting a comment. List values (`inputs`) are comma separated.
//!
//! ```text
//! # run.conf
//! inputs = corpus/part1.conllu.gz, corpus/part2.conllu.gz
//! workdir = runs/desk
//! metaphor_annotator = lexicon:resources/metaphor.tsv
//! concreteness = norms/lfp.tsv
//! seed = 42
//! ```

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::{ComparisonConfig, SelectionCriteria, SummaryConfig, Thresholds, Weighting};
use crate::corpus::{ErrorPolicy, InputFormat, LengthBins};
use crate::error::{Error, Result};
use crate::stats::{PermutationConfig, PermutationMode, Sidedness};

/// Environment variable overriding the master seed.
pub const SEED_ENV: &str = "METAVERIFY_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    /// Forced input format; detected from each file name when absent.
    pub input_format: Option<InputFormat>,
    pub error_policy: ErrorPolicy,
    pub workdir: PathBuf,

    /// Annotator shorthand, `lexicon:<path>` or `external:<command>`.
    pub metaphor_annotator: Option<String>,
    pub sentiment_annotator: Option<String>,
    pub annotator_timeout: f64,
    pub batch_size: usize,
    pub annotator_workers: usize,

    pub concreteness: Option<PathBuf>,
    pub imageability: Option<PathBuf>,
    pub complexity: Option<PathBuf>,

    pub hi: f64,
    pub lo: f64,
    pub transitive_frac: f64,
    pub min_pairs: u64,

    pub per_group_n: usize,
    pub bin_width: usize,
    pub length_cap: usize,

    pub replicates: u64,
    pub permutation_mode: PermutationMode,
    pub bootstrap_replicates: u64,
    pub ci_level: f64,
    pub alpha: f64,
    pub sidedness: Sidedness,
    pub weighting: Weighting,
    pub top_k: usize,

    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inputs: Vec::new(),
            input_format: None,
            error_policy: ErrorPolicy::Skip,
            workdir: PathBuf::from("metaverify-run"),
            metaphor_annotator: None,
            sentiment_annotator: None,
            annotator_timeout: crate::annotate::DEFAULT_TIMEOUT_SECS,
            batch_size: crate::annotate::DEFAULT_BATCH_SIZE,
            annotator_workers: 1,
            concreteness: None,
            imageability: None,
            complexity: None,
            hi: 0.70,
            lo: 0.30,
            transitive_frac: 0.70,
            min_pairs: 10,
            per_group_n: 20_000,
            bin_width: crate::corpus::sample::DEFAULT_BIN_WIDTH,
            length_cap: crate::corpus::sample::DEFAULT_LENGTH_CAP,
            replicates: 100_000,
            permutation_mode: PermutationMode::Auto,
            bootstrap_replicates: crate::stats::DEFAULT_BOOTSTRAP_REPLICATES,
            ci_level: 0.95,
            alpha: 0.01,
            sidedness: Sidedness::TwoSided,
            weighting: Weighting::Type,
            top_k: 3,
            seed: 0,
            workers: 0,
        }
    }
}

/// Seeds handed to each stochastic stage, derived from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub sampling: u64,
    pub permutation: u64,
    pub bootstrap: u64,
}

impl Seeds {
    pub fn from_master(master: u64) -> Self {
        Seeds {
            master,
            sampling: master,
            permutation: master.wrapping_add(1),
            bootstrap: master.wrapping_add(2),
        }
    }
}

fn enum_value<T: DeserializeOwned>(key: &str, value: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(value.to_string()))
        .map_err(|_| Error::Config(format!("{key}: unsupported value {value:?}")))
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got {value:?}")))
}

fn optional(value: &str) -> Option<String> {
    (!value.is_empty()).then(|| value.to_string())
}

impl PipelineConfig {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = PipelineConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", idx + 1)))?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", idx + 1, e.to_string().trim_start_matches("configuration: "))))?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.to_string().trim_start_matches("configuration: "))))
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "inputs" => {
                self.inputs = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect()
            }
            "input_format" => self.input_format = optional(value).map(|v| enum_value(key, &v)).transpose()?,
            "error_policy" => self.error_policy = enum_value(key, value)?,
            "workdir" => self.workdir = PathBuf::from(value),
            "metaphor_annotator" => self.metaphor_annotator = optional(value),
            "sentiment_annotator" => self.sentiment_annotator = optional(value),
            "annotator_timeout" => self.annotator_timeout = number(key, value)?,
            "batch_size" => self.batch_size = number(key, value)?,
            "annotator_workers" => self.annotator_workers = number(key, value)?,
            "concreteness" => self.concreteness = optional(value).map(PathBuf::from),
            "imageability" => self.imageability = optional(value).map(PathBuf::from),
            "complexity" => self.complexity = optional(value).map(PathBuf::from),
            "hi" => self.hi = number(key, value)?,
            "lo" => self.lo = number(key, value)?,
            "transitive_frac" => self.transitive_frac = number(key, value)?,
            "min_pairs" => self.min_pairs = number(key, value)?,
            "per_group_n" => self.per_group_n = number(key, value)?,
            "bin_width" => self.bin_width = number(key, value)?,
            "length_cap" => self.length_cap = number(key, value)?,
            "replicates" => self.replicates = number(key, value)?,
            "permutation_mode" => self.permutation_mode = enum_value(key, value)?,
            "bootstrap_replicates" => self.bootstrap_replicates = number(key, value)?,
            "ci_level" => self.ci_level = number(key, value)?,
            "alpha" => self.alpha = number(key, value)?,
            "sidedness" => self.sidedness = enum_value(key, value)?,
            "weighting" => self.weighting = enum_value(key, value)?,
            "top_k" => self.top_k = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "workers" => self.workers = number(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `METAVERIFY_SEED` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(value) = std::env::var(SEED_ENV) {
            self.seed = number(SEED_ENV, value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        self.thresholds().validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.transitive_frac) {
            return fail(format!("transitive_frac {} outside [0, 1]", self.transitive_frac));
        }
        if self.per_group_n == 0 || self.bin_width == 0 || self.length_cap == 0 {
            return fail("per_group_n, bin_width and length_cap must be at least 1".into());
        }
        if self.replicates == 0 || self.bootstrap_replicates == 0 {
            return fail("replicate counts must be at least 1".into());
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return fail(format!("ci_level {} outside (0, 1)", self.ci_level));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if !(self.annotator_timeout > 0.0 && self.annotator_timeout.is_finite()) {
            return fail("annotator_timeout must be positive".into());
        }
        if self.batch_size == 0 || self.annotator_workers == 0 {
            return fail("batch_size and annotator_workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn seeds(&self) -> Seeds {
        Seeds::from_master(self.seed)
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds { hi: self.hi, lo: self.lo }
    }

    pub fn selection(&self) -> SelectionCriteria {
        SelectionCriteria {
            transitive_frac: self.transitive_frac,
            min_pairs: self.min_pairs,
        }
    }

    pub fn bins(&self) -> LengthBins {
        LengthBins {
            width: self.bin_width,
            cap: self.length_cap,
        }
    }

    pub fn summary(&self) -> SummaryConfig {
        SummaryConfig {
            level: self.ci_level,
            replicates: self.bootstrap_replicates,
            seed: self.seeds().bootstrap,
            top_k: self.top_k,
            weighting: self.weighting,
        }
    }

    pub fn comparison(&self) -> ComparisonConfig {
        ComparisonConfig {
            permutation: PermutationConfig {
                replicates: self.replicates,
                seed: self.seeds().permutation,
                sidedness: self.sidedness,
                mode: self.permutation_mode,
            },
            alpha: self.alpha,
        }
    }

    /// The configuration as file text, readable by [`PipelineConfig::parse`].
    pub fn to_config_string(&self) -> String {
        fn name<T: Serialize>(v: &T) -> String {
            match serde_json::to_value(v) {
                Ok(serde_json::Value::String(s)) => s,
                _ => String::new(),
            }
        }
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let inputs: Vec<String> = self.inputs.iter().map(|p| p.display().to_string()).collect();
        let lines = [
            ("inputs", inputs.join(", ")),
            ("input_format", self.input_format.map(|f| name(&f)).unwrap_or_default()),
            ("error_policy", name(&self.error_policy)),
            ("workdir", self.workdir.display().to_string()),
            ("metaphor_annotator", self.metaphor_annotator.clone().unwrap_or_default()),
            ("sentiment_annotator", self.sentiment_annotator.clone().unwrap_or_default()),
            ("annotator_timeout", self.annotator_timeout.to_string()),
            ("batch_size", self.batch_size.to_string()),
            ("annotator_workers", self.annotator_workers.to_string()),
            ("concreteness", path(&self.concreteness)),
            ("imageability", path(&self.imageability)),
            ("complexity", path(&self.complexity)),
            ("hi", self.hi.to_string()),
            ("lo", self.lo.to_string()),
            ("transitive_frac", self.transitive_frac.to_string()),
            ("min_pairs", self.min_pairs.to_string()),
            ("per_group_n", self.per_group_n.to_string()),
            ("bin_width", self.bin_width.to_string()),
            ("length_cap", self.length_cap.to_string()),
            ("replicates", self.replicates.to_string()),
            ("permutation_mode", name(&self.permutation_mode)),
            ("bootstrap_replicates", self.bootstrap_replicates.to_string()),
            ("ci_level", self.ci_level.to_string()),
            ("alpha", self.alpha.to_string()),
            ("sidedness", name(&self.sidedness)),
            ("weighting", name(&self.weighting)),
            ("top_k", self.top_k.to_string()),
            ("seed", self.seed.to_string()),
            ("workers", self.workers.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_published_parameters() {
        let c = PipelineConfig::default();
        assert_eq!((c.hi, c.lo), (0.70, 0.30));
        assert_eq!(c.transitive_frac, 0.70);
        assert_eq!(c.min_pairs, 10);
        assert_eq!(c.per_group_n, 20_000);
        assert_eq!(c.replicates, 100_000);
        assert_eq!(c.alpha, 0.01);
        assert_eq!(c.sidedness, Sidedness::TwoSided);
        assert_eq!(c.bin_width, 5);
        assert_eq!(c.length_cap, 100);
        assert_eq!(c.ci_level, 0.95);
        assert_eq!(c.weighting, Weighting::Type);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn parse_with_comments() {
        let c = PipelineConfig::parse(
            "# desk run\ninputs = a.conllu, b.txt\nseed = 42  # fixed\nhi = 0.8\nsidedness = greater\npermutation_mode = monte-carlo\n",
        )
        .unwrap();
        assert_eq!(c.inputs, [PathBuf::from("a.conllu"), PathBuf::from("b.txt")]);
        assert_eq!(c.seed, 42);
        assert_eq!(c.hi, 0.8);
        assert_eq!(c.sidedness, Sidedness::Greater);
        assert_eq!(c.permutation_mode, PermutationMode::MonteCarlo);
        assert_eq!(c.seeds(), Seeds { master: 42, sampling: 42, permutation: 43, bootstrap: 44 });
    }

    #[test]
    fn bad_files_are_config_errors() {
        for text in ["nonsense", "colour = blue", "hi = high", "hi = 0.2\nlo = 0.5", "sidedness = both", "alpha = 0"] {
            let err = PipelineConfig::parse(text).unwrap_err();
            assert_eq!(err.kind(), crate::error::ErrorKind::Validation, "{text}");
        }
    }

    #[test]
    fn text_round_trip() {
        let c = PipelineConfig {
            inputs: vec![PathBuf::from("x.conllu")],
            concreteness: Some(PathBuf::from("lfp.tsv")),
            metaphor_annotator: Some("external:python3 bridge.py --mode echo".into()),
            seed: 7,
            input_format: Some(InputFormat::Conllu),
            ..Default::default()
        };
        assert_eq!(PipelineConfig::parse(&c.to_config_string()).unwrap(), c);
        assert_eq!(PipelineConfig::parse(&PipelineConfig::default().to_config_string()).unwrap(), PipelineConfig::default());
    }
}
