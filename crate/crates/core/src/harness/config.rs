//! `key=value` simulation configuration.
//!
//! Blank lines and `#` comments are ignored. Every key can also be set
//! with [`SimConfig::set`], which is what CLI overrides go through.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::channel::FadingModel;
use crate::design::DesignBudget;
use crate::error::{Error, Result};
use crate::mpa::DEFAULT_MPA_ITERS;
use crate::polar::{Crc, DecoderKind};
use crate::schemes::Scheme;

/// How the BIPCM interleaver is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterleaverMode {
    /// Fresh permutation per frame and user.
    PerFrame,
    /// One permutation per user for the whole run.
    Fixed,
}

impl InterleaverMode {
    pub fn name(&self) -> &'static str {
        match self {
            InterleaverMode::PerFrame => "per_frame",
            InterleaverMode::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub decoder: DecoderKind,
    pub crc_len: usize,
    /// Counts CRC bits inside `rate · n_code` instead of on top of it.
    pub crc_in_rate: bool,
    pub n_code: usize,
    pub rate: f64,
    /// `None` selects the bundled K=6, N=4, M=4 codebook.
    pub codebook: Option<PathBuf>,
    /// One file for BIPCM, one per level for MLPC.
    pub frozen_sets: Vec<PathBuf>,
    pub design_snr_db: Option<f64>,
    pub design_budget: DesignBudget,
    pub design_seed: u64,
    pub fading: FadingModel,
    pub mpa_iters: usize,
    pub snr_db: Vec<f64>,
    pub seed: u64,
    pub min_errors: u64,
    pub max_frames: u64,
    pub interleaver: InterleaverMode,
    pub out: Option<PathBuf>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scheme: Scheme::Bipcm,
            decoder: DecoderKind::Scl { list_size: 32 },
            crc_len: 16,
            crc_in_rate: false,
            n_code: 2048,
            rate: 2.0 / 3.0,
            codebook: None,
            frozen_sets: Vec::new(),
            design_snr_db: None,
            design_budget: DesignBudget::default(),
            design_seed: 1,
            fading: FadingModel::Fast,
            mpa_iters: DEFAULT_MPA_ITERS,
            snr_db: Vec::new(),
            seed: 0,
            min_errors: 100,
            max_frames: 1_000_000,
            interleaver: InterleaverMode::PerFrame,
            out: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(format!("`{key}`: expected true or false, got `{value}`"))),
    }
}

/// `0.5` or `2/3`.
fn parse_rate(value: &str) -> Result<f64> {
    let r = match value.split_once('/') {
        Some((a, b)) => parse_num::<f64>("rate", a.trim())? / parse_num::<f64>("rate", b.trim())?,
        None => parse_num("rate", value)?,
    };
    Ok(r)
}

/// Comma-separated values or `start:step:stop` (inclusive).
fn parse_snr_grid(value: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let start: f64 = parse_num("snr", parts[0])?;
        let step: f64 = parse_num("snr", parts[1])?;
        let stop: f64 = parse_num("snr", parts[2])?;
        if step <= 0.0 {
            return Err(Error::config("snr range step must be positive"));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            return Err(Error::config("snr range is empty"));
        }
        return Ok((0..=count as usize).map(|i| start + step * i as f64).collect());
    }
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num("snr", s))
        .collect()
}

impl SimConfig {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::format(source_name, i + 1, "expected key=value"))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::Config(msg) => Error::format(source_name, i + 1, msg),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Set one key. Keys use `snake_case`; `-` is accepted in their place.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "scheme" => self.scheme = Scheme::parse(value).map_err(|e| Error::config(e.to_string()))?,
            "decoder" => {
                let list = self.decoder.list_size();
                self.decoder = match value {
                    "sc" => DecoderKind::Sc,
                    "scl" => DecoderKind::Scl {
                        list_size: if list > 1 { list } else { 32 },
                    },
                    other => return Err(Error::config(format!("unknown decoder `{other}`"))),
                }
            }
            "list_size" | "list" => {
                let l: usize = parse_num(&key, value)?;
                if l == 0 {
                    return Err(Error::config("list_size must be at least 1"));
                }
                if let DecoderKind::Scl { list_size } = &mut self.decoder {
                    *list_size = l;
                } else if l > 1 {
                    self.decoder = DecoderKind::Scl { list_size: l };
                }
            }
            "crc_len" => self.crc_len = parse_num(&key, value)?,
            "crc_in_rate" => self.crc_in_rate = parse_bool(&key, value)?,
            "n_code" => self.n_code = parse_num(&key, value)?,
            "rate" => self.rate = parse_rate(value)?,
            "codebook" => {
                self.codebook = match value {
                    "" | "default" => None,
                    path => Some(PathBuf::from(path)),
                }
            }
            "frozen_set" | "frozen_sets" => {
                self.frozen_sets = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect()
            }
            "design_snr_db" | "design_snr" => {
                self.design_snr_db = match value {
                    "" | "none" => None,
                    v => Some(parse_num(&key, v)?),
                }
            }
            "design_frames" => self.design_budget.max_frames = parse_num(&key, value)?,
            "design_batch" => self.design_budget.batch_frames = parse_num(&key, value)?,
            "design_seed" => self.design_seed = parse_num(&key, value)?,
            "channel" => self.fading = FadingModel::parse(value).map_err(|e| Error::config(e.to_string()))?,
            "block_len" => {
                let len: usize = parse_num(&key, value)?;
                if len == 0 {
                    return Err(Error::config("block_len must be positive"));
                }
                self.fading = FadingModel::Block { len };
            }
            "mpa_iters" => self.mpa_iters = parse_num(&key, value)?,
            "snr" | "snr_db" => self.snr_db = parse_snr_grid(value)?,
            "seed" | "master_seed" => self.seed = parse_num(&key, value)?,
            "min_errors" => self.min_errors = parse_num(&key, value)?,
            "max_frames" => self.max_frames = parse_num(&key, value)?,
            "interleaver" => {
                self.interleaver = match value {
                    "per_frame" | "per-frame" => InterleaverMode::PerFrame,
                    "fixed" => InterleaverMode::Fixed,
                    other => return Err(Error::config(format!("unknown interleaver mode `{other}`"))),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn crc(&self) -> Result<Crc> {
        Crc::for_len(self.crc_len).map_err(|e| Error::config(e.to_string()))
    }

    /// `floor(rate · n_code)`, tolerant of rounding in the rate.
    pub fn rate_bits(&self) -> usize {
        (self.rate * self.n_code as f64 + 1e-9).floor() as usize
    }

    /// Checks that do not need the codebook or frozen-set files.
    pub fn validate(&self) -> Result<()> {
        if !self.n_code.is_power_of_two() || self.n_code < 2 {
            return Err(Error::config(format!("n_code {} is not a power of two ≥ 2", self.n_code)));
        }
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(Error::config(format!("rate {} outside (0, 1]", self.rate)));
        }
        self.crc()?;
        if self.crc_in_rate && self.rate_bits() <= self.crc_len {
            return Err(Error::config("rate leaves no room for payload next to the CRC"));
        }
        if self.rate_bits() == 0 {
            return Err(Error::config("rate · n_code rounds down to zero payload bits"));
        }
        if self.mpa_iters == 0 {
            return Err(Error::config("mpa_iters must be at least 1"));
        }
        if self.snr_db.is_empty() {
            return Err(Error::config("snr grid is empty"));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) || self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("snr grid must be finite and strictly ascending"));
        }
        if self.min_errors == 0 || self.max_frames == 0 {
            return Err(Error::config("min_errors and max_frames must be positive"));
        }
        if self.frozen_sets.is_empty() && self.design_snr_db.is_none() {
            return Err(Error::config("neither frozen_set nor design_snr_db is given"));
        }
        Ok(())
    }

    /// Canonical `key=value` text that [`SimConfig::parse`] reads back.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[PathBuf]| {
            v.iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(s, "scheme={}", self.scheme.name());
        let _ = writeln!(s, "decoder={}", self.decoder.name());
        let _ = writeln!(s, "list_size={}", self.decoder.list_size());
        let _ = writeln!(s, "crc_len={}", self.crc_len);
        let _ = writeln!(s, "crc_in_rate={}", self.crc_in_rate);
        let _ = writeln!(s, "n_code={}", self.n_code);
        let _ = writeln!(s, "rate={}", self.rate);
        match &self.codebook {
            Some(p) => {
                let _ = writeln!(s, "codebook={}", p.display());
            }
            None => s.push_str("codebook=default\n"),
        }
        if !self.frozen_sets.is_empty() {
            let _ = writeln!(s, "frozen_set={}", join(&self.frozen_sets));
        }
        if let Some(d) = self.design_snr_db {
            let _ = writeln!(s, "design_snr_db={d}");
        }
        let _ = writeln!(s, "design_frames={}", self.design_budget.max_frames);
        let _ = writeln!(s, "design_batch={}", self.design_budget.batch_frames);
        let _ = writeln!(s, "design_seed={}", self.design_seed);
        match self.fading {
            FadingModel::Block { len } => {
                let _ = writeln!(s, "block_len={len}");
            }
            other => {
                let _ = writeln!(s, "channel={}", other.name());
            }
        }
        let _ = writeln!(s, "mpa_iters={}", self.mpa_iters);
        let grid: Vec<String> = self.snr_db.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "snr={}", grid.join(","));
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "min_errors={}", self.min_errors);
        let _ = writeln!(s, "max_frames={}", self.max_frames);
        let _ = writeln!(s, "interleaver={}", self.interleaver.name());
        if let Some(p) = &self.out {
            let _ = writeln!(s, "out={}", p.display());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let cfg = SimConfig::parse(
            "# paper setup\nscheme = mlpc\ndecoder=sc\nrate=1/2\nn_code=256\nsnr=2:0.5:3 # grid\nchannel=block\n",
            "t",
        )
        .unwrap();
        assert_eq!(cfg.scheme, Scheme::Mlpc);
        assert_eq!(cfg.decoder, DecoderKind::Sc);
        assert_eq!(cfg.rate, 0.5);
        assert_eq!(cfg.snr_db, vec![2.0, 2.5, 3.0]);
        assert_eq!(cfg.fading, FadingModel::Block { len: 18 });
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = SimConfig::default();
        cfg.set("snr", "1,2.5,4").unwrap();
        cfg.set("list-size", "8").unwrap();
        cfg.set("frozen_set", "a.frz,b.frz").unwrap();
        cfg.set("block_len", "7").unwrap();
        cfg.set("out", "x.csv").unwrap();
        assert_eq!(SimConfig::parse(&cfg.to_text(), "t").unwrap(), cfg);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match SimConfig::parse("scheme=bipcm\nbogus=1\n", "cfg") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(SimConfig::parse("list_size=0", "cfg").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = SimConfig::default();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.set("snr", "3,2").unwrap();
        cfg.set("design_snr_db", "4").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("snr", "2,3").unwrap();
        cfg.validate().unwrap();
        cfg.set("n_code", "100").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rate_bits_uses_floor() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.rate_bits(), 1365);
        let mut half = cfg.clone();
        half.set("rate", "0.5").unwrap();
        half.set("n_code", "256").unwrap();
        assert_eq!(half.rate_bits(), 128);
    }
}
