//! Run configuration, stored as TOML.

use std::path::{Path, PathBuf};

use hecke_core::analytic::{ContourConfig, KernelMethod};
use hecke_core::ring::{FieldId, Gaussian, Ideal};
use hecke_core::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `Q` or `Qi`.
    pub field: String,
    /// Generator of a modulus replacing the minimal one.
    pub modulus: Option<String>,
    pub output_dir: PathBuf,
    /// Family value cache; falls back to `HECKE_CACHE_DIR`.
    pub cache_dir: Option<PathBuf>,
    /// Worker threads, 0 for the default.
    pub threads: usize,
    pub bounds: Bounds,
    pub contour: ContourSettings,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    pub family_bound: u64,
    pub test_function: String,
    pub poisson_x: Vec<f64>,
    pub char_x: Vec<f64>,
    pub coprime_x: Vec<f64>,
    pub coprime_m: String,
    pub kernel_t_min: f64,
    pub kernel_t_max: f64,
    pub kernel_points: usize,
    pub sieve_sizes: Vec<f64>,
    pub k_fraction: f64,
    pub epsilon: f64,
    pub max_dimension: usize,
    pub square_points: Vec<[f64; 2]>,
    pub bracket_m: f64,
    pub bracket_n: f64,
    pub bracket_k: f64,
    pub bracket_g: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourSettings {
    pub sigma: f64,
    pub kappa: Option<f64>,
    pub t_max: Option<f64>,
    pub order: usize,
    pub tolerance: f64,
    /// `closed-form` or `contour`.
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub poisson: f64,
    pub character: f64,
    pub kernel: f64,
    pub parseval: f64,
    pub bracket: f64,
    pub slope: f64,
    pub square_lo: f64,
    pub square_hi: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: "Q".into(),
            modulus: None,
            output_dir: PathBuf::from("hecke-out"),
            cache_dir: None,
            threads: 0,
            bounds: Bounds::default(),
            contour: ContourSettings::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            family_bound: 200,
            test_function: "bump".into(),
            poisson_x: vec![1.0, 10.0, 100.0],
            char_x: vec![5.0, 10.0, 20.0],
            coprime_x: vec![20.0],
            coprime_m: "3".into(),
            kernel_t_min: 1e-2,
            kernel_t_max: 1e2,
            kernel_points: 50,
            sieve_sizes: vec![8.0, 16.0, 32.0, 64.0, 128.0],
            k_fraction: 0.5,
            epsilon: 0.1,
            max_dimension: 20_000,
            square_points: vec![[32.0, 16.0], [64.0, 16.0], [64.0, 64.0]],
            bracket_m: 64.0,
            bracket_n: 32.0,
            bracket_k: 8.0,
            bracket_g: vec!["1".into(), "3".into()],
        }
    }
}

impl Default for ContourSettings {
    fn default() -> Self {
        let cc = ContourConfig::default();
        ContourSettings {
            sigma: cc.sigma,
            kappa: cc.kappa,
            t_max: cc.t_max,
            order: cc.order,
            tolerance: cc.tolerance,
            method: "closed-form".into(),
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            poisson: 1e-6,
            character: 1e-5,
            kernel: 1e-8,
            parseval: 1e-6,
            bracket: 1e-9,
            slope: 1.2,
            square_lo: 0.05,
            square_hi: 20.0,
        }
    }
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Configuration(e.to_string())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(parse_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
        RunConfig::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.field_id()?;
        self.modulus_ideal()?;
        self.contour_config()?;
        Ok(())
    }

    pub fn field_id(&self) -> Result<FieldId> {
        self.field.parse()
    }

    pub fn modulus_ideal(&self) -> Result<Option<Ideal>> {
        match &self.modulus {
            None => Ok(None),
            Some(s) => Ok(Some(parse_ideal(self.field_id()?, s)?)),
        }
    }

    pub fn contour_config(&self) -> Result<ContourConfig> {
        let c = &self.contour;
        let method = match c.method.as_str() {
            "closed-form" => KernelMethod::ClosedForm,
            "contour" => KernelMethod::Contour,
            m => return Err(Error::Configuration(format!("unknown kernel method {m:?}"))),
        };
        Ok(ContourConfig { sigma: c.sigma, kappa: c.kappa, t_max: c.t_max, order: c.order, tolerance: c.tolerance, method })
    }

    /// SHA-256 of the settings that affect results; paths and the thread count are left out.
    pub fn hash(&self) -> String {
        let mut view = self.clone();
        view.output_dir = PathBuf::new();
        view.cache_dir = None;
        view.threads = 0;
        let digest = Sha256::digest(view.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The configured cache directory, else `HECKE_CACHE_DIR`.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir.clone().or_else(|| std::env::var_os("HECKE_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from))
    }
}

pub fn parse_ideal(field: FieldId, s: &str) -> Result<Ideal> {
    let z: Gaussian = s.trim().trim_start_matches('(').trim_end_matches(')').parse()?;
    Ideal::new(field, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let mut cfg = RunConfig::default();
        cfg.field = "Qi".into();
        cfg.modulus = Some("4+4i".into());
        cfg.cache_dir = Some("/tmp/x".into());
        cfg.contour.kappa = Some(0.25);
        cfg.bounds.poisson_x = vec![0.1, 1.0 / 3.0, 1e-7];
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn hash_ignores_paths_and_threads() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.threads = 7;
        b.output_dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.bounds.family_bound = 100;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_toml("field = \"R\"").is_err());
        assert!(RunConfig::from_toml("colour = 1").is_err());
        assert!(RunConfig::from_toml("[contour]\nmethod = \"guess\"").is_err());
        assert_eq!(parse_ideal(FieldId::Qi, "(1+i)").unwrap().norm(), 2);
    }
}
