//! Plain `key = value` pipeline configuration.
//!
//! Keys prefixed `synth.` are forwarded to the synthetic corpus spec, e.g.
//! `synth.groups = 500`. Command-line flags are applied afterwards with
//! [`PipelineConfig::set`] and therefore win. The synthetic corpus always has
//! one bitext per entry of `pivot_langs`.

use std::fmt;
use std::path::Path;

use crate::annotation::EditFilter;
use crate::error::{Error, Result};
use crate::eval::SyntheticSpec;
use crate::io::parse_list;
use crate::phrase::Lang;
use crate::scoring::SchemeId;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub target_lang: Lang,
    pub pivot_langs: Vec<Lang>,
    pub scheme: SchemeId,
    pub min_support: usize,
    pub short_cutoff: usize,
    pub base_threshold: f64,
    pub short_threshold: f64,
    pub thresholds: Vec<f64>,
    pub seed: u64,
    pub ks: Vec<usize>,
    pub synth: SyntheticSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let synth = SyntheticSpec::default();
        PipelineConfig {
            target_lang: Lang::new("en").expect("valid"),
            pivot_langs: synth.pivot_langs(),
            scheme: SchemeId::SumPmi,
            min_support: 1,
            short_cutoff: 24,
            base_threshold: 0.4,
            short_threshold: 0.6,
            thresholds: vec![0.95, 0.90, 0.75],
            seed: synth.seed,
            ks: vec![10, 50, 100],
            synth,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidArgument(format!("{key}: cannot parse {v:?}")))
}

impl PipelineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "target_lang" => self.target_lang = Lang::new(v)?,
            "pivot_langs" => {
                self.pivot_langs = parse_list(v, Lang::new)?;
                self.synth.n_pivot_langs = self.pivot_langs.len().max(1);
            }
            "scheme" => self.scheme = v.parse()?,
            "min_support" => self.min_support = num(key, v)?,
            "short_cutoff" => self.short_cutoff = num(key, v)?,
            "base_threshold" => self.base_threshold = num(key, v)?,
            "short_threshold" => self.short_threshold = num(key, v)?,
            "thresholds" => self.thresholds = parse_list(v, |s| num(key, s))?,
            "seed" => {
                self.seed = num(key, v)?;
                self.synth.seed = self.seed;
            }
            "ks" | "k" => self.ks = parse_list(v, |s| num(key, s))?,
            k => match k.strip_prefix("synth.") {
                Some("pivots") => {
                    return Err(Error::InvalidArgument(
                        "synth.pivots is derived from pivot_langs".into(),
                    ))
                }
                Some(sk) => {
                    self.synth.set(sk, v)?;
                    if sk == "seed" {
                        self.seed = self.synth.seed;
                    }
                }
                None => return Err(Error::InvalidArgument(format!("unknown config key {k:?}"))),
            },
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<PipelineConfig> {
        let mut c = PipelineConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("config line {}: expected key = value", i + 1))
            })?;
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        PipelineConfig::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.pivot_langs.is_empty() {
            return bad("pivot_langs is empty".into());
        }
        if let Some(t) = self.thresholds.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
            return bad(format!("threshold {t} outside (0, 1]"));
        }
        for (name, t) in [
            ("base_threshold", self.base_threshold),
            ("short_threshold", self.short_threshold),
        ] {
            if !(t.is_finite() && t >= 0.0) {
                return bad(format!("{name} must be a non-negative number"));
            }
        }
        if self.min_support == 0 {
            return bad("min_support must be at least 1".into());
        }
        if self.ks.contains(&0) {
            return bad("k values must be positive".into());
        }
        self.synth.validate()
    }

    pub fn edit_filter(&self) -> EditFilter {
        EditFilter {
            short_cutoff: self.short_cutoff,
            base_threshold: self.base_threshold,
            short_threshold: self.short_threshold,
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Writes every key, so the output parses back to an equal config.
impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target_lang = {}", self.target_lang)?;
        writeln!(f, "pivot_langs = {}", join(&self.pivot_langs))?;
        writeln!(f, "scheme = {}", self.scheme)?;
        writeln!(f, "min_support = {}", self.min_support)?;
        writeln!(f, "short_cutoff = {}", self.short_cutoff)?;
        writeln!(f, "base_threshold = {}", self.base_threshold)?;
        writeln!(f, "short_threshold = {}", self.short_threshold)?;
        writeln!(f, "thresholds = {}", join(&self.thresholds))?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "ks = {}", join(&self.ks))?;
        for line in self.synth.to_string().lines() {
            if let Some((k, v)) = line.split_once('=') {
                if !matches!(k.trim(), "seed" | "pivots") {
                    writeln!(f, "synth.{} = {}", k.trim(), v.trim())?;
                }
            }
        }
        Ok(())
    }
}
