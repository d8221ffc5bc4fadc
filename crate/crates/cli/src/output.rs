//! The run context: configuration, family, output directory and file headers.

use std::fs;
use std::path::PathBuf;

use hecke_core::family::{load_cache, write_cache, FamilyOptions, HeckeFamily};
use hecke_core::{Error, Result};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of a subcommand that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
    ResourceCap,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
            Outcome::ResourceCap => 3,
        }
    }

    /// The worse of two outcomes.
    pub fn and(self, other: Outcome) -> Outcome {
        if self.code() >= other.code() {
            self
        } else {
            other
        }
    }
}

/// Exit code for an error that stopped a run.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Configuration(_) | Error::Domain(_) => 2,
        Error::ResourceCap(_) => 3,
        _ => 1,
    }
}

pub struct Context {
    pub cfg: RunConfig,
    pub family: HeckeFamily,
    pub hash: String,
    pub out: PathBuf,
    cache: Option<PathBuf>,
    /// Files written so far, in order.
    pub written: Vec<PathBuf>,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Result<Context> {
        cfg.validate()?;
        let mut opts = FamilyOptions::new(cfg.field_id()?);
        opts.modulus = cfg.modulus_ideal()?;
        let family = HeckeFamily::build(&opts)?;
        let cache = cfg.resolved_cache_dir().map(|d| {
            let tag: String = format!("{}-{}-{}", family.field_id(), family.modulus().gen(), family.choices_seed())
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
                .collect();
            d.join(format!("family-{tag}.csv"))
        });
        if let Some(path) = &cache {
            load_cache(&family, path)?;
        }
        Ok(Context { hash: cfg.hash(), out: cfg.output_dir.clone(), cfg, family, cache, written: Vec::new() })
    }

    /// `# hecke <version> config=<sha256> field=<F> c=<modulus>`.
    pub fn header(&self) -> String {
        format!("# hecke {VERSION} config={} field={} c={}\n", self.hash, self.family.field_id(), self.family.modulus())
    }

    /// Writes `header + body` to `name` in the output directory.
    pub fn write(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).map_err(|e| Error::Configuration(format!("{}: {e}", self.out.display())))?;
        let path = self.out.join(name);
        let mut text = self.header();
        text.push_str(body);
        fs::write(&path, text).map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Saves the value memo when a cache directory is configured.
    pub fn save_cache(&self) -> Result<()> {
        if let Some(path) = &self.cache {
            write_cache(&self.family, path)?;
        }
        Ok(())
    }

    pub fn cache_path(&self) -> Option<&PathBuf> {
        self.cache.as_ref()
    }
}
