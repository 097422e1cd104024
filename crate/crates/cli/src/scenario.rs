//! Scenario files: a JSON object `{"scenarios": [...]}` whose entries name a
//! family, a protocol and the family's parameters. Unknown fields are
//! rejected so that typos surface instead of silently falling back to
//! defaults.

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::emit::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ghz,
    Graph,
    Lattice,
    Parametric,
    Example4,
    Oneway,
    Bounds,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Graph => "graph",
            Family::Lattice => "lattice",
            Family::Parametric => "parametric",
            Family::Example4 => "example4",
            Family::Oneway => "oneway",
            Family::Bounds => "bounds",
        }
    }

    pub fn default_protocol(self) -> Protocol {
        match self {
            Family::Ghz => Protocol::Partitioned,
            Family::Graph => Protocol::Decode,
            Family::Lattice => Protocol::PartialTeleport,
            Family::Parametric => Protocol::Computational,
            Family::Example4 => Protocol::Locce,
            Family::Oneway => Protocol::Search,
            Family::Bounds => Protocol::SepChain,
        }
    }

    pub fn protocols(self) -> &'static [Protocol] {
        use Protocol::*;
        match self {
            Family::Ghz => &[Partitioned, AppendixA, Computational],
            Family::Graph => &[Decode],
            Family::Lattice => &[PartialTeleport, Computational],
            Family::Parametric => &[Computational, Teleport],
            Family::Example4 => &[Locce, Computational],
            Family::Oneway => &[Search, Certificate],
            Family::Bounds => &[SepChain, Mes, Vidal, Entropy],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// GHZ resource, fan-out inside each party, Bell chain across parties.
    Partitioned,
    /// Bell chain with one qubit per party.
    AppendixA,
    /// Every party measures in the computational basis; no resource.
    Computational,
    /// Graph-state resource, Bell measurements, table lookup.
    Decode,
    /// Teleport `m` of the `n` pairs over Bell resources.
    PartialTeleport,
    /// Teleport Alice's share to Bob over a maximally entangled pair.
    Teleport,
    /// Example 4 protocol with the Bell pair on B and C.
    Locce,
    /// Multi-start residual minimization.
    Search,
    /// Residual of the explicit teleportation certificate.
    Certificate,
    /// Computational protocol against the minimum separable bound.
    SepChain,
    /// Computational protocol against the maximally entangled bound.
    Mes,
    /// Vidal conversion followed by teleportation, else fallback.
    Vidal,
    /// Resource entanglement against mean member entanglement.
    Entropy,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Partitioned => "partitioned",
            Protocol::AppendixA => "appendix-a",
            Protocol::Computational => "computational",
            Protocol::Decode => "decode",
            Protocol::PartialTeleport => "partial-teleport",
            Protocol::Teleport => "teleport",
            Protocol::Locce => "locce",
            Protocol::Search => "search",
            Protocol::Certificate => "certificate",
            Protocol::SepChain => "sep-chain",
            Protocol::Mes => "mes",
            Protocol::Vidal => "vidal",
            Protocol::Entropy => "entropy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Empty,
    Path,
    Cycle,
    Complete,
    Star,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Protocol>,
    /// Qubit count (ghz), vertex count (graph) or pair count (lattice).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Teleported pairs (lattice).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub party_sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    /// Resource spectrum (oneway) or squared Schmidt coefficients (vidal).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Overrides the built-in expected value of fidelity-valued rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

impl Scenario {
    pub fn new(family: Family) -> Self {
        Self {
            id: None,
            family,
            protocol: None,
            n: None,
            m: None,
            party_sizes: None,
            alpha: None,
            gamma: None,
            edges: None,
            shape: None,
            lambdas: None,
            outcomes: None,
            restarts: None,
            seed: None,
            expected: None,
        }
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol.unwrap_or_else(|| self.family.default_protocol())
    }

    /// Row label: the explicit id, else family and position in the file.
    pub fn label(&self, index: usize) -> String {
        self.id.clone().unwrap_or_else(|| format!("{}-{}", self.family.name(), index + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    pub scenarios: Vec<Scenario>,
}

/// Parses a scenario file; errors name the JSON path of the offending field.
pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}
