//! Inline channel specifications.
//!
//! ```text
//! {"type": "minimal", "n": 1}
//! {"type": "pair", "K": [1, 2]}
//! {"type": "mix", "channels": [...], "weights": [0.5, 0.5]}
//! {"type": "identity"}
//! {"type": "Q1"}    every minimal channel
//! {"type": "Q2"}    every pair channel
//! ```

use serde::{Deserialize, Serialize};

use cstar_core::analysis::ChannelId;
use cstar_core::quantum::{minimal_channel, mix, pair_channel, PhaseDampingChannel, QuantumError};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelSpec {
    Identity,
    Minimal {
        n: usize,
    },
    Pair {
        #[serde(rename = "K")]
        k: [usize; 2],
    },
    Mix {
        channels: Vec<ChannelSpec>,
        weights: Vec<f64>,
    },
    #[serde(rename = "Q1")]
    AllMinimal,
    #[serde(rename = "Q2")]
    AllPairs,
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|source| CliError::Parse {
            what: "channel spec",
            source,
        })
    }

    /// Channels on `ℂᵐ ⊗ ℂˡ` named by this spec, in a fixed order.
    pub fn expand(&self, m: usize, l: usize) -> Result<Vec<(ChannelId, PhaseDampingChannel)>, QuantumError> {
        Ok(match self {
            ChannelSpec::AllMinimal => (1..=m)
                .map(|n| Ok((ChannelId::Minimal { n }, minimal_channel(m, l, n)?)))
                .collect::<Result<_, QuantumError>>()?,
            ChannelSpec::AllPairs => {
                let mut out = Vec::new();
                for i in 1..=m {
                    for j in i + 1..=m {
                        out.push((ChannelId::Pair { k: [i, j] }, pair_channel(m, l, [i, j])?));
                    }
                }
                out
            }
            single => vec![single.build(m, l)?],
        })
    }

    fn build(&self, m: usize, l: usize) -> Result<(ChannelId, PhaseDampingChannel), QuantumError> {
        Ok(match self {
            ChannelSpec::Identity => (ChannelId::Identity, PhaseDampingChannel::identity(m * l)),
            ChannelSpec::Minimal { n } => (ChannelId::Minimal { n: *n }, minimal_channel(m, l, *n)?),
            ChannelSpec::Pair { k } => (ChannelId::Pair { k: *k }, pair_channel(m, l, *k)?),
            ChannelSpec::Mix { channels, weights } => {
                let parts = channels
                    .iter()
                    .map(|c| c.build(m, l).map(|p| p.1))
                    .collect::<Result<Vec<_>, _>>()?;
                (ChannelId::Mixed, mix(&parts, weights)?)
            }
            ChannelSpec::AllMinimal | ChannelSpec::AllPairs => {
                let all = self.expand(m, l)?;
                let w = vec![1.0 / all.len().max(1) as f64; all.len()];
                let parts: Vec<_> = all.into_iter().map(|p| p.1).collect();
                (ChannelId::Mixed, mix(&parts, &w)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        assert_eq!(ChannelSpec::parse(r#"{"type":"minimal","n":2}"#).unwrap(), ChannelSpec::Minimal { n: 2 });
        assert_eq!(ChannelSpec::parse(r#"{"type":"pair","K":[1,3]}"#).unwrap(), ChannelSpec::Pair { k: [1, 3] });
        assert_eq!(ChannelSpec::parse(r#"{"type":"Q2"}"#).unwrap(), ChannelSpec::AllPairs);
        let mixed = ChannelSpec::parse(
            r#"{"type":"mix","channels":[{"type":"minimal","n":1},{"type":"identity"}],"weights":[0.25,0.75]}"#,
        )
        .unwrap();
        let expanded = mixed.expand(3, 2).unwrap();
        assert_eq!(expanded.len(), 1);
        assert_eq!(expanded[0].0, ChannelId::Mixed);
        assert_eq!(expanded[0].1.terms().len(), 2);
    }

    #[test]
    fn expands_families() {
        assert_eq!(ChannelSpec::AllMinimal.expand(4, 1).unwrap().len(), 4);
        let pairs = ChannelSpec::AllPairs.expand(4, 1).unwrap();
        assert_eq!(pairs.len(), 6);
        assert_eq!(pairs[5].0, ChannelId::Pair { k: [3, 4] });
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(ChannelSpec::parse("{").unwrap_err().exit_code(), 2);
        assert_eq!(ChannelSpec::parse(r#"{"type":"warp"}"#).unwrap_err().exit_code(), 2);
        assert!(ChannelSpec::Minimal { n: 5 }.expand(3, 1).is_err());
        let bad_mix = ChannelSpec::Mix {
            channels: vec![ChannelSpec::Identity],
            weights: vec![0.5],
        };
        assert!(bad_mix.expand(2, 1).is_err());
    }
}
