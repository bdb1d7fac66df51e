//! Datum descriptions read from TOML documents or command-line flags.

use adlv_core::sigma_structures::CoxeterDatum;
use adlv_core::{DynkinType, Error, Result, RootDatum};
use serde::{Deserialize, Serialize};

pub const PRESETS: [&str; 3] = ["example-3.1", "example-3.2", "example-1.3"];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_letter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub removed_node: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

impl DatumConfig {
    pub fn parse(text: &str) -> Result<DatumConfig> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    /// Replaces a preset by the explicit data it stands for.
    pub fn expand(&self) -> Result<DatumConfig> {
        let Some(name) = &self.preset else {
            return Ok(self.clone());
        };
        if self.type_letter.is_some()
            || self.sigma.is_some()
            || self.mu.is_some()
            || self.removed_node.is_some()
        {
            return Err(Error::InvalidArgument(format!(
                "preset {name} only accepts a rank override"
            )));
        }
        let (letter, rank) = match name.as_str() {
            "example-3.1" => ("A", self.rank.unwrap_or(8)),
            "example-1.3" => {
                if self.rank.is_some_and(|r| r != 3) {
                    return Err(Error::InvalidArgument("example-1.3 has rank 3".into()));
                }
                ("A", 3)
            }
            "example-3.2" => ("B", self.rank.unwrap_or(6)),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown preset {other}; known presets: {}",
                    PRESETS.join(", ")
                )))
            }
        };
        let mut mu = vec![0; rank];
        if rank > 0 {
            mu[0] = 1;
        }
        let (sigma, removed) = if letter == "A" {
            let n = rank + 1;
            ((0..n).map(|i| (n - i) % n).collect(), 0)
        } else {
            let mut s: Vec<usize> = (0..=rank).collect();
            s.swap(0, 1);
            (s, rank)
        };
        Ok(DatumConfig {
            type_letter: Some(letter.into()),
            rank: Some(rank),
            sigma: Some(sigma),
            mu: Some(mu),
            removed_node: Some(removed),
            preset: None,
        })
    }

    pub fn root_datum(&self) -> Result<RootDatum> {
        let c = self.expand()?;
        let letter = c
            .type_letter
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("config needs a type or a preset".into()))?;
        let rank = c
            .rank
            .ok_or_else(|| Error::InvalidArgument("config needs a rank".into()))?;
        RootDatum::new(DynkinType::parse(letter)?, rank)
    }

    pub fn mu(&self) -> Result<Vec<i64>> {
        let c = self.expand()?;
        let rank = self.root_datum()?.rank();
        Ok(c.mu.unwrap_or_else(|| vec![0; rank]))
    }

    pub fn coxeter_datum(&self) -> Result<CoxeterDatum> {
        let c = self.expand()?;
        let rd = self.root_datum()?;
        let nodes = rd.rank() + 1;
        let sigma = c.sigma.unwrap_or_else(|| (0..nodes).collect());
        let mu = self.mu()?;
        CoxeterDatum::new(rd, sigma, mu, c.removed_node.unwrap_or(0))
    }
}
