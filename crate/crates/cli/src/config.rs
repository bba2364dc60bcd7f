//! Run configuration: defaults, optional key=value config file, command
//! line overrides (in that order of precedence).

use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};
use triqr::{Epsilons, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => bail!("unknown format `{other}` (expected json | csv)"),
        }
    }
}

/// Assembled configuration for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spectrum: Option<Vec<f64>>,
    pub strategy: String,
    pub seed: u64,
    pub max_steps: usize,
    /// Relative deflation threshold (scaled by ‖T0‖ at use site).
    pub deflate_tol_rel: f64,
    /// Overrides of the gap-scaled neighborhood radii.
    pub eps_tub: Option<f64>,
    pub eps_inv: Option<f64>,
    pub eps_ap: Option<f64>,
    pub mixed_eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spectrum: None,
            strategy: "wilkinson".into(),
            seed: 42,
            max_steps: 200,
            deflate_tol_rel: 1e-13,
            eps_tub: None,
            eps_inv: None,
            eps_ap: None,
            mixed_eps: None,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            self.apply_pair(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    fn apply_pair(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "spectrum" => {
                let vals: Result<Vec<f64>, _> =
                    value.split(',').map(|v| v.trim().parse()).collect();
                self.spectrum = Some(vals.context("parsing spectrum")?);
            }
            "strategy" => self.strategy = value.to_string(),
            "seed" => self.seed = value.parse().context("parsing seed")?,
            "max-steps" => self.max_steps = value.parse().context("parsing max-steps")?,
            "deflate-tol" => {
                self.deflate_tol_rel = value.parse().context("parsing deflate-tol")?
            }
            "eps-tub" => self.eps_tub = Some(value.parse().context("parsing eps-tub")?),
            "eps-inv" => self.eps_inv = Some(value.parse().context("parsing eps-inv")?),
            "eps-ap" => self.eps_ap = Some(value.parse().context("parsing eps-ap")?),
            "mixed-eps" => self.mixed_eps = Some(value.parse().context("parsing mixed-eps")?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            other => bail!("unknown config key `{other}`"),
        }
        Ok(())
    }

    /// Validated spectrum from the configuration; the error message is part
    /// of the interface contract.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let vals = self
            .spectrum
            .clone()
            .context("missing --spectrum (comma-separated, strictly increasing)")?;
        Spectrum::new(vals).map_err(|e| match e {
            triqr::Error::NotIncreasing => anyhow::anyhow!("spectrum must be strictly increasing"),
            other => anyhow::anyhow!(other),
        })
    }

    /// Neighborhood radii: gap-scaled defaults with per-key overrides,
    /// statically validated.
    pub fn epsilons(&self, spec: &Spectrum) -> Result<Epsilons> {
        let mut eps = Epsilons::defaults(spec);
        if let Some(v) = self.eps_tub {
            eps.eps_tub = v;
        }
        if let Some(v) = self.eps_inv {
            eps.eps_inv = v;
        }
        if let Some(v) = self.eps_ap {
            eps.eps_ap = v;
        }
        if let Some(v) = self.mixed_eps {
            eps.mixed_eps = v;
        }
        eps.validate(spec)?;
        Ok(eps)
    }
}
