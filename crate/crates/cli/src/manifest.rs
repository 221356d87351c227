use mdinf_core::mdinf::Window;
use mdinf_core::DerivedParams;
use serde::{Deserialize, Serialize};

/// Everything needed to rerun a command: the parsed inputs verbatim and the
/// inversion parameters derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub subcommand: String,
    pub version: String,
    pub timestamp: Option<String>,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_adjacent_t: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clamped_t: Option<Vec<f64>>,
}

impl Manifest {
    pub fn new(subcommand: &str, timestamp: Option<&str>, parameters: Parameters) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp.map(str::to_string),
            parameters,
            derived: None,
            atom_adjacent_t: None,
            clamped_t: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub lambda: f64,
    pub service: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_exponent: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_range: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_bounds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recursion: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub omega: f64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "L")]
    pub lower: f64,
    #[serde(rename = "U")]
    pub upper: f64,
}

impl Derived {
    pub fn new(derived: &DerivedParams, window: &Window) -> Self {
        Self {
            k: derived.k,
            d: derived.d,
            omega: derived.omega,
            n: derived.n_terms,
            lower: window.lower,
            upper: window.upper,
        }
    }
}
