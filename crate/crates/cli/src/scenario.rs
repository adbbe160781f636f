//! Scenario schema. Unknown keys are errors at every level.

use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Output directory, relative to the scenario file.
    #[serde(default = "default_output")]
    pub output: String,
    pub domain: Domain,
    #[serde(default)]
    pub ladder: LadderSpec,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectDef>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

fn default_output() -> String {
    "out".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub dim: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSpec {
    /// `ε_k = 2^{-k}` for `k_min ≤ k ≤ k_max`.
    pub k_min: u32,
    pub k_max: u32,
}

impl Default for LadderSpec {
    fn default() -> Self {
        Self { k_min: 2, k_max: 18 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub q_max: Option<f64>,
    pub n_max: Option<f64>,
    pub residual_gate: Option<f64>,
    pub tau_regular: Option<f64>,
    pub tau_wavefront: Option<f64>,
    pub stability_tolerance: Option<f64>,
    pub spectral_floor: Option<f64>,
    pub xi_slope_gate: Option<f64>,
    pub gate_octaves: Option<usize>,
    pub l_grid: Option<Vec<f64>>,
    pub m_grid: Option<Vec<f64>>,
    pub slow_scale_powers: Option<Vec<f64>>,
    pub xi_reach: Option<f64>,
    pub samples_per_octave: Option<usize>,
    pub max_order: Option<usize>,
}

/// Exactly one of the definition keys must be present.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDef {
    /// Closed-form net in `x`, `y`, `eps`.
    pub net: Option<String>,
    /// Distribution (functional syntax, ε-free) embedded by the standard mollifier.
    pub embed: Option<String>,
    /// Basic functional in constructor syntax.
    pub functional: Option<String>,
    /// Symbol in `x`, `y`, `xi`, `xi2`, `eps`.
    pub symbol: Option<String>,
    /// Symbol order `m`.
    pub order: Option<f64>,
    /// Symbol type `(ρ, δ)`.
    pub rho: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    /// `"full"`, `"+"`, `"-"` or `"planar"`.
    pub kind: String,
    pub angle: Option<f64>,
    pub half_angle: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Classify {
        id: String,
        object: String,
        region: Option<Vec<Vec<f64>>>,
    },
    Wavefront {
        id: String,
        object: String,
        name: Option<String>,
        cells: Option<usize>,
    },
    Singsupp {
        id: String,
        object: String,
        #[serde(default = "default_mode")]
        mode: String,
        cells: Option<usize>,
    },
    Regularize {
        id: String,
        object: String,
        q: Vec<u32>,
        probes: Vec<String>,
    },
    PsidoApply {
        id: String,
        symbol: String,
        object: String,
        region: Option<Vec<Vec<f64>>>,
    },
    CertifySymbol {
        id: String,
        symbol: String,
        check: String,
        region: Option<Vec<Vec<f64>>>,
        cone: Option<ConeSpec>,
        l: Option<f64>,
        cells: Option<usize>,
    },
    TheoremCheck {
        id: String,
        case: String,
        symbol: Option<String>,
        parametrix: Option<String>,
        object: Option<String>,
        region: Option<Vec<Vec<f64>>>,
        cells: Option<usize>,
    },
}

fn default_mode() -> String {
    "both".into()
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Classify { .. } => "classify",
            Task::Wavefront { .. } => "wavefront",
            Task::Singsupp { .. } => "singsupp",
            Task::Regularize { .. } => "regularize",
            Task::PsidoApply { .. } => "psido-apply",
            Task::CertifySymbol { .. } => "certify-symbol",
            Task::TheoremCheck { .. } => "theorem-check",
        }
    }

    pub fn id(&self) -> &str {
        match self {
            Task::Classify { id, .. }
            | Task::Wavefront { id, .. }
            | Task::Singsupp { id, .. }
            | Task::Regularize { id, .. }
            | Task::PsidoApply { id, .. }
            | Task::CertifySymbol { id, .. }
            | Task::TheoremCheck { id, .. } => id,
        }
    }
}

/// Parse failure with a 1-based position.
#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse(src: &str) -> Result<Scenario, ParseError> {
    toml::from_str(src).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => line_col(src, span.start),
            None => (1, 1),
        };
        ParseError { line, column, message: e.message().to_string() }
    })
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn load(path: &Path) -> Result<Scenario, ParseError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| ParseError { line: 0, column: 0, message: format!("cannot read {}: {e}", path.display()) })?;
    parse(&src)
}
