//! The resolved description of one invocation.

use std::collections::BTreeMap;

use apnforge_core::{FieldElement, FieldSpec, UPoly};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FieldInfo,
    PhiBuild,
    PhiFactor,
    Factor,
    ApnSpectrum,
    ApnScan,
    Classify,
    Verify,
}

/// A univariate polynomial as a degree -> hex coefficient map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub coeffs: BTreeMap<String, FieldElement>,
}

impl PolyInput {
    /// The polynomial over `field`, which must agree with any field given inline.
    pub fn resolve(&self, field: FieldSpec) -> Result<UPoly, String> {
        if let Some(inline) = self.field {
            if inline != field {
                return Err(format!(
                    "the polynomial's field {} differs from --field {}",
                    inline.to_json(),
                    field.to_json()
                ));
            }
        }
        UPoly::from_json_parts(field, &self.coeffs).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ext: Option<u32>,
    /// Largest extension field, as a power of two, an extension scan visits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_bits: Option<u32>,
    /// Time budget for verify, in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_secs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Seed as a hex string.
    pub seed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub timings: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    /// Bivariate or homogeneous trivariate polynomial text for `factor`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mpoly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    /// Extension degree for `factor`: factor over F_{q^ext} only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<u32>,
    /// Name prefix selecting verify checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(default)]
    pub list: bool,
}

impl Options {
    pub fn seed_value(&self) -> Result<u64, String> {
        parse_seed(&self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<PolyInput>,
    pub options: Options,
}

/// Decimal or 0x-prefixed hex.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| format!("invalid seed {s:?}"))
}

pub fn format_seed(seed: u64) -> String {
    format!("{seed:#x}")
}
