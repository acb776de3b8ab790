//! Run configuration. Defaults reproduce the acceptance settings; a JSON
//! file may override any subset, and CLI flags override the file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabConfig {
    pub seed: u64,
    pub slicing: SlicingParams,
    pub domination: DominationParams,
    pub scan: ScanParams,
    pub reconstruct: ReconstructParams,
    pub sqfn: SqfnParams,
    pub partition: PartitionParams,
    pub kernel: KernelParams,
    pub exponents: ExponentGridParams,
    pub oracle: OracleParams,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            seed: 20240611,
            slicing: Default::default(),
            domination: Default::default(),
            scan: Default::default(),
            reconstruct: Default::default(),
            sqfn: Default::default(),
            partition: Default::default(),
            kernel: Default::default(),
            exponents: Default::default(),
            oracle: Default::default(),
        }
    }
}

impl LabConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlicingParams {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub order: usize,
    pub random_pairs: usize,
    pub analytic_pairs: usize,
    /// Largest `|k|_∞` of the band-limited corpus, in units of `1/L`.
    pub max_mode: i64,
    pub terms: usize,
    pub points_per_pair: usize,
    pub radii: Vec<f64>,
    pub tolerance: f64,
    pub time_limit_s: f64,
}

impl Default for SlicingParams {
    fn default() -> Self {
        Self {
            d: 2,
            n: 64,
            box_length: 16.0,
            order: 12,
            random_pairs: 20,
            analytic_pairs: 5,
            max_mode: 3,
            terms: 6,
            points_per_pair: 4,
            radii: vec![0.5, 1.0],
            tolerance: 1e-6,
            time_limit_s: 60.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DominationParams {
    pub d: usize,
    pub pairs: usize,
    pub n: usize,
    pub box_length: f64,
    pub order: usize,
    pub k_min: i32,
    pub k_max: i32,
    pub n_local: usize,
    /// Blob radii are drawn from `[support_radius/2, support_radius]`.
    pub support_radius: f64,
    pub tolerance: f64,
    pub time_limit_s: f64,
}

impl Default for DominationParams {
    fn default() -> Self {
        Self {
            d: 2,
            pairs: 50,
            n: 32,
            box_length: 8.0,
            order: 8,
            k_min: -3,
            k_max: 0,
            n_local: 8,
            support_radius: 1.2,
            tolerance: 1e-12,
            time_limit_s: 120.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Knapp,
    Annulus,
    Scaling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    LocalProbe,
    NormQuotient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanParams {
    pub family: FamilyKind,
    pub d: usize,
    /// `δ` for the probe families, `R` for scaling.
    pub params: Option<Vec<f64>>,
    pub operator: Option<OperatorKind>,
    /// Grid override for the probe families.
    pub n: Option<usize>,
    pub box_length: Option<f64>,
    pub eps: f64,
    pub p: String,
    pub q: String,
    pub r: String,
    /// Half-width of the accepted slope interval for the probe families.
    pub knapp_slope_tol: f64,
    pub annulus_slope_tol: f64,
    pub holder_rel_tol: f64,
    pub slope_tol: f64,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            family: FamilyKind::Knapp,
            d: 2,
            params: None,
            operator: None,
            n: None,
            box_length: None,
            eps: bisph_core::counterexamples::DEFAULT_ANNULUS_EPS,
            p: "2".into(),
            q: "2".into(),
            r: "1".into(),
            knapp_slope_tol: 0.2,
            annulus_slope_tol: 0.15,
            holder_rel_tol: 1e-10,
            slope_tol: 1e-6,
        }
    }
}

impl ScanParams {
    pub fn default_params(&self) -> Vec<f64> {
        match self.family {
            FamilyKind::Knapp | FamilyKind::Annulus => dyadic(3, 6),
            FamilyKind::Scaling => vec![1.0, 2.0, 4.0, 8.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructParams {
    pub alphas: Vec<f64>,
    pub truncation: u32,
    /// Residual allowed as a multiple of `2^{-Jα}`.
    pub factor: f64,
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub lambda: f64,
}

impl Default for ReconstructParams {
    fn default() -> Self {
        Self { alphas: vec![0.5, 1.0, 2.0], truncation: 10, factor: 2.0, d: 2, n: 32, box_length: 16.0, lambda: 1.3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SqfnParams {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub functions: usize,
    pub deltas: Vec<f64>,
    pub mixed_n: usize,
    pub mixed_box_length: f64,
    pub mixed_deltas: Vec<f64>,
    pub mixed_terms: usize,
    pub mixed_max_mode: i64,
    pub k_min: i32,
    pub k_max: i32,
    pub slope_floor: f64,
}

impl Default for SqfnParams {
    fn default() -> Self {
        Self {
            d: 2,
            n: 32,
            box_length: 16.0,
            functions: 20,
            deltas: dyadic(2, 7),
            mixed_n: 16,
            mixed_box_length: 8.0,
            mixed_deltas: dyadic(3, 7),
            mixed_terms: 12,
            mixed_max_mode: 6,
            k_min: -2,
            k_max: 3,
            slope_floor: -0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionParams {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub delta: f64,
    pub eps: f64,
    pub lambda: f64,
    /// `α` of the dyadic piece `ψ` entering the check.
    pub alpha: f64,
}

impl Default for PartitionParams {
    fn default() -> Self {
        Self { d: 2, n: 32, box_length: 32.0, delta: 0.125, eps: 0.25, lambda: 2.0, alpha: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelParams {
    pub d: usize,
    pub n: Option<usize>,
    pub box_length: Option<f64>,
    pub deltas: Vec<f64>,
    /// `ρ = rho_factor·δ`.
    pub rho_factor: f64,
    pub max_ratio: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self { d: 2, n: None, box_length: None, deltas: dyadic(3, 6), rho_factor: 2.0, max_ratio: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExponentGridParams {
    pub dims: Vec<usize>,
    /// Reciprocal exponents run over `k/denominator`.
    pub denominator: i64,
    pub max_alpha_star_dim: usize,
}

impl Default for ExponentGridParams {
    fn default() -> Self {
        Self { dims: vec![2, 3, 4], denominator: 6, max_alpha_star_dim: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleParams {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    pub points: usize,
    pub tolerance: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self { d: 2, n: 32, box_length: 8.0, alpha: 1.0, lambdas: vec![0.5, 0.8, 1.3], points: 8, tolerance: 1e-9 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: LabConfig = serde_json::from_str(r#"{"seed": 3, "kernel": {"max_ratio": 5.0}}"#).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.kernel.max_ratio, 5.0);
        assert_eq!(c.kernel.deltas, KernelParams::default().deltas);
        assert_eq!(c.slicing, SlicingParams::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<LabConfig>(r#"{"sede": 3}"#).is_err());
    }

    #[test]
    fn roundtrip() {
        let c = LabConfig::default();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<LabConfig>(&s).unwrap(), c);
    }
}
