//! Generator configuration documents (TOML).
//!
//! ```toml
//! nodes = 2000
//! layers = 3
//! types_per_layer = 1          # or [["a", "b"], ["a"], ["c"]]
//! m = "normal 2,1"             # or 2, or [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
//! alpha = 1.0
//! beta = 0.0
//! seed = 7
//! layer_choice = "uniform"     # or [0.5, 0.25, 0.25]
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::{GenError, GenParams, LayerChoice, MSpec, TypeChoice};
use crate::graph::DEFAULT_TYPE_NAME;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TypesSpec {
    /// The same `k` types in every layer: the default type when `k = 1`,
    /// otherwise `t1..tk`.
    Count(usize),
    PerLayer(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MValue {
    Const(u32),
    Spec(String),
    Matrix(Vec<Vec<u32>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChoiceValue {
    Named(String),
    Weights(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TypeChoiceValue {
    Named(String),
    Weights(Vec<Vec<f64>>),
}

fn default_layers() -> usize {
    1
}
fn default_types() -> TypesSpec {
    TypesSpec::Count(1)
}
fn default_m() -> MValue {
    MValue::Spec("normal 2,1".into())
}
fn default_alpha() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub nodes: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default = "default_types")]
    pub types_per_layer: TypesSpec,
    #[serde(default = "default_m")]
    pub m: MValue,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub layer_choice: Option<ChoiceValue>,
    #[serde(default)]
    pub type_choice: Option<TypeChoiceValue>,
    #[serde(default)]
    pub uniform_attachment: bool,
}

impl GenConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn m_spec(&self) -> Result<MSpec, ConfigError> {
        Ok(match &self.m {
            MValue::Const(k) => MSpec::Const(*k),
            MValue::Spec(s) => s.parse()?,
            MValue::Matrix(rows) => MSpec::Matrix(rows.clone()),
        })
    }

    /// Resolves the m spec (normal specs draw from the run's seed) and
    /// validates the result.
    pub fn to_params(&self) -> Result<GenParams, ConfigError> {
        let types_per_layer = match &self.types_per_layer {
            TypesSpec::Count(0) => return Err(ConfigError::Invalid("types_per_layer must be at least 1".into())),
            TypesSpec::Count(1) => vec![vec![DEFAULT_TYPE_NAME.to_string()]; self.layers],
            TypesSpec::Count(k) => vec![(1..=*k).map(|i| format!("t{i}")).collect(); self.layers],
            TypesSpec::PerLayer(rows) => rows.clone(),
        };
        let layer_choice = match &self.layer_choice {
            None => LayerChoice::Uniform,
            Some(ChoiceValue::Named(s)) if s == "uniform" => LayerChoice::Uniform,
            Some(ChoiceValue::Named(s)) => {
                return Err(ConfigError::Invalid(format!("unknown layer_choice {s:?}")))
            }
            Some(ChoiceValue::Weights(w)) => LayerChoice::Weighted(w.clone()),
        };
        let type_choice = match &self.type_choice {
            None => TypeChoice::Uniform,
            Some(TypeChoiceValue::Named(s)) if s == "uniform" => TypeChoice::Uniform,
            Some(TypeChoiceValue::Named(s)) => {
                return Err(ConfigError::Invalid(format!("unknown type_choice {s:?}")))
            }
            Some(TypeChoiceValue::Weights(w)) => TypeChoice::Weighted(w.clone()),
        };
        if self.layers == 0 {
            return Err(GenError::NoLayers.into());
        }
        let params = GenParams {
            nodes: self.nodes,
            layers: self.layers,
            types_per_layer,
            m: self.m_spec()?.resolve(self.layers, self.seed)?,
            alpha: self.alpha,
            beta: self.beta,
            uniform_attachment: self.uniform_attachment,
            layer_choice,
            type_choice,
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_uses_defaults() {
        let c = GenConfig::parse("nodes = 10\n").unwrap();
        assert_eq!(c.layers, 1);
        assert_eq!(c.alpha, 1.0);
        assert_eq!(c.beta, 0.0);
        let p = c.to_params().unwrap();
        assert_eq!(p.types_per_layer, vec![vec![DEFAULT_TYPE_NAME.to_string()]]);
        assert!(p.m[0][0] >= 1);
        assert_eq!(p.layer_choice, LayerChoice::Uniform);
    }

    #[test]
    fn three_m_forms() {
        let p = GenConfig::parse("nodes = 5\nlayers = 2\nm = 3\n").unwrap().to_params().unwrap();
        assert_eq!(p.m, vec![vec![3, 3], vec![3, 3]]);
        let p = GenConfig::parse("nodes = 5\nlayers = 2\nm = [[2, 1], [0, 4]]\n")
            .unwrap()
            .to_params()
            .unwrap();
        assert_eq!(p.m, vec![vec![2, 1], vec![0, 4]]);
        let a = GenConfig::parse("nodes = 5\nlayers = 3\nm = \"normal 3,1\"\nseed = 9\n").unwrap();
        assert_eq!(a.to_params().unwrap().m, a.to_params().unwrap().m);
        assert!(a.to_params().unwrap().m.iter().flatten().all(|&x| x >= 1));
    }

    #[test]
    fn types_and_choices() {
        let text = r#"
nodes = 20
layers = 2
types_per_layer = [["user", "bot"], ["user"]]
layer_choice = [3.0, 1.0]
type_choice = [[1.0, 1.0], [1.0]]
m = 1
"#;
        let p = GenConfig::parse(text).unwrap().to_params().unwrap();
        assert_eq!(p.type_registry(), vec!["user", "bot"]);
        assert_eq!(p.layer_choice, LayerChoice::Weighted(vec![3.0, 1.0]));
        let p = GenConfig::parse("nodes = 3\ntypes_per_layer = 2\nm = 1\n").unwrap().to_params().unwrap();
        assert_eq!(p.types_per_layer, vec![vec!["t1".to_string(), "t2".to_string()]]);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(GenConfig::parse("layers = 2\n"), Err(ConfigError::Toml(_))));
        assert!(matches!(GenConfig::parse("nodes = 2\nbogus = 1\n"), Err(ConfigError::Toml(_))));
        let c = GenConfig::parse("nodes = 2\nlayers = 2\nm = [[1]]\n").unwrap();
        assert!(matches!(c.to_params(), Err(ConfigError::Gen(GenError::MatrixShape { .. }))));
        let c = GenConfig::parse("nodes = 2\nlayer_choice = \"skewed\"\n").unwrap();
        assert!(matches!(c.to_params(), Err(ConfigError::Invalid(_))));
        let c = GenConfig::parse("nodes = 2\nalpha = 0.0\n").unwrap();
        assert!(matches!(c.to_params(), Err(ConfigError::Gen(GenError::ZeroAttachment))));
    }
}
