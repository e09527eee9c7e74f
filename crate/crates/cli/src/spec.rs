//! Channel specifications: JSON objects with a `kind` tag.
//!
//! ```json
//! {"kind": "pauli", "q_i": 0.5, "q_x": 0.25, "q_y": 0.25}
//! {"kind": "displacement_z", "theta": "$tz"}
//! {"kind": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}
//! ```
//!
//! Scalar parameters may be `"$name"` placeholders bound by sweep grids.

use std::collections::BTreeMap;
use std::path::Path;

use chandist::channels::{
    bit_flip, depolarizing, displacement_x, displacement_z, pauli_channel, phase_flip, Channel, KrausChannel,
    PauliWeights,
};
use chandist::linalg::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A literal value or a `"$name"` grid variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Value(f64),
    Var(String),
}

impl Default for Param {
    fn default() -> Self {
        Param::Value(0.0)
    }
}

pub type Bindings = BTreeMap<String, f64>;

impl Param {
    fn resolve(&self, field: &str, vars: &Bindings) -> Result<f64, CliError> {
        match self {
            Param::Value(v) => Ok(*v),
            Param::Var(s) => {
                let name = s.strip_prefix('$').ok_or_else(|| {
                    CliError::Spec(format!("field `{field}`: expected a number or \"$name\", got \"{s}\""))
                })?;
                vars.get(name)
                    .copied()
                    .ok_or_else(|| CliError::Spec(format!("field `{field}`: grid variable `{name}` is not bound")))
            }
        }
    }

    fn var(&self) -> Option<&str> {
        match self {
            Param::Var(s) => s.strip_prefix('$'),
            Param::Value(_) => None,
        }
    }
}

/// A complex number written as `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Pauli {
        #[serde(default)]
        q_i: Param,
        #[serde(default)]
        q_x: Param,
        #[serde(default)]
        q_y: Param,
        #[serde(default)]
        q_z: Param,
    },
    BitFlip {
        c: Param,
    },
    PhaseFlip {
        c: Param,
    },
    Depolarizing {
        p: Param,
    },
    DisplacementX {
        theta: Param,
    },
    DisplacementZ {
        theta: Param,
    },
    Kraus {
        /// Each operator is a list of two rows of two `[re, im]` entries.
        operators: Vec<[[ComplexPair; 2]; 2]>,
    },
}

impl ChannelSpec {
    /// Parses inline JSON (anything starting with `{`) or the contents of a file.
    pub fn load(arg: &str) -> Result<Self, CliError> {
        if arg.trim_start().starts_with('{') {
            Self::parse(arg, "<inline>")
        } else {
            let text = std::fs::read_to_string(Path::new(arg))
                .map_err(|e| CliError::Spec(format!("{arg}: cannot read spec file: {e}")))?;
            Self::parse(&text, arg)
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Spec(format!("{origin}: line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs always serialize")
    }

    /// Names of the grid variables this spec refers to.
    pub fn variables(&self) -> Vec<&str> {
        let params: Vec<&Param> = match self {
            ChannelSpec::Pauli { q_i, q_x, q_y, q_z } => vec![q_i, q_x, q_y, q_z],
            ChannelSpec::BitFlip { c } | ChannelSpec::PhaseFlip { c } => vec![c],
            ChannelSpec::Depolarizing { p } => vec![p],
            ChannelSpec::DisplacementX { theta } | ChannelSpec::DisplacementZ { theta } => vec![theta],
            ChannelSpec::Kraus { .. } => vec![],
        };
        params.into_iter().filter_map(Param::var).collect()
    }

    /// Pauli weights when the spec is a Pauli-diagonal channel.
    pub fn pauli_weights(&self, vars: &Bindings) -> Result<Option<PauliWeights>, CliError> {
        Ok(self.build(vars)?.pauli_weights().copied())
    }

    pub fn build(&self, vars: &Bindings) -> Result<Channel, CliError> {
        let channel = match self {
            ChannelSpec::Pauli { q_i, q_x, q_y, q_z } => pauli_channel(PauliWeights::new(
                q_i.resolve("q_i", vars)?,
                q_x.resolve("q_x", vars)?,
                q_y.resolve("q_y", vars)?,
                q_z.resolve("q_z", vars)?,
            )?),
            ChannelSpec::BitFlip { c } => bit_flip(c.resolve("c", vars)?)?,
            ChannelSpec::PhaseFlip { c } => phase_flip(c.resolve("c", vars)?)?,
            ChannelSpec::Depolarizing { p } => depolarizing(p.resolve("p", vars)?)?,
            ChannelSpec::DisplacementX { theta } => displacement_x(theta.resolve("theta", vars)?)?,
            ChannelSpec::DisplacementZ { theta } => displacement_z(theta.resolve("theta", vars)?)?,
            ChannelSpec::Kraus { operators } => {
                let ops = operators
                    .iter()
                    .map(|rows| ComplexMatrix::from_rows(&rows.map(|row| row.map(|[re, im]| Complex64::new(re, im)))))
                    .collect();
                Channel::from_kraus("kraus", KrausChannel::new(ops)?)?
            }
        };
        Ok(channel)
    }
}
