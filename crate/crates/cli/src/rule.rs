//! The `--coloring` mini-language.
//!
//! `all-one`, `padic:<p>:<r>`, `periodic:<m>:<c0,...>` and `rand-seed:<seed>:<r>`
//! name rule colorings (colors are 0-based residues); anything else is read as
//! a coloring text file.

use std::fs;
use std::path::PathBuf;

use regularity::Coloring;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringRule {
    AllOne,
    Padic { p: u64, colors: u32 },
    Periodic { table: Vec<u32> },
    RandSeed { seed: u64, colors: u32 },
    File(PathBuf),
}

fn number<T: std::str::FromStr>(field: &str, what: &str) -> Result<T, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad {what} {field:?} in coloring rule")))
}

impl ColoringRule {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let arity = |k: usize| {
            if parts.len() == k {
                Ok(())
            } else {
                Err(CliError::Usage(format!(
                    "coloring rule {text:?} takes {} fields",
                    k - 1
                )))
            }
        };
        match parts[0] {
            "all-one" => {
                arity(1)?;
                Ok(ColoringRule::AllOne)
            }
            "padic" => {
                arity(3)?;
                Ok(ColoringRule::Padic {
                    p: number(parts[1], "prime")?,
                    colors: number(parts[2], "color count")?,
                })
            }
            "periodic" => {
                arity(3)?;
                let m: usize = number(parts[1], "period")?;
                let table = parts[2]
                    .split(',')
                    .map(|c| number(c, "color"))
                    .collect::<Result<Vec<u32>, _>>()?;
                if table.len() != m {
                    return Err(CliError::Usage(format!(
                        "period {m} needs {m} colors, got {}",
                        table.len()
                    )));
                }
                Ok(ColoringRule::Periodic { table })
            }
            "rand-seed" => {
                arity(3)?;
                Ok(ColoringRule::RandSeed {
                    seed: number(parts[1], "seed")?,
                    colors: number(parts[2], "color count")?,
                })
            }
            _ => Ok(ColoringRule::File(PathBuf::from(text))),
        }
    }

    /// The coloring restricted to what `[1, bound]` needs.
    pub fn build(&self, bound: u64) -> Result<Coloring, CliError> {
        Ok(match self {
            ColoringRule::AllOne => Coloring::constant(),
            ColoringRule::Padic { p, colors } => Coloring::padic(*p, *colors)?,
            ColoringRule::Periodic { table } => Coloring::periodic(table.clone())?,
            ColoringRule::RandSeed { seed, colors } => {
                Coloring::pseudo_random(*seed, *colors, bound)?
            }
            ColoringRule::File(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Coloring::from_text(&text)?
            }
        })
    }

    /// Whether the rule colors every positive integer consistently, so a
    /// larger interval extends the same coloring.
    pub fn is_extensible(&self) -> bool {
        !matches!(self, ColoringRule::File(_))
    }
}
