//! Building an instance from a family name and flags, or from a graph file.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use walkbound::generators::{
    caterpillar, flower_path, four_cycle_chain_with, lrv_v_chain, random_bounded_degree,
    ratio_config, CaterpillarParams, CycleEntry, Family, GeneratedInstance,
};
use walkbound::io::instance_from_json;
use walkbound::NodeId;

use crate::CliError;

/// Family parameters. Each family reads only the flags it needs.
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyParams {
    /// Caterpillar leaf scale.
    #[arg(long)]
    pub b: Option<u64>,
    /// Caterpillar root surplus.
    #[arg(long, default_value_t = 11)]
    pub c: u64,
    /// Caterpillar interior path length (odd).
    #[arg(long)]
    pub l: Option<u64>,
    /// Component count (chains) or target neighbor count (ratio).
    #[arg(long)]
    pub k: Option<u64>,
    /// Flower centers along the path.
    #[arg(long)]
    pub segments: Option<u64>,
    /// Pendants per flower center.
    #[arg(long)]
    pub petals: Option<u64>,
    /// Degree of the start node (ratio).
    #[arg(long)]
    pub delta: Option<u64>,
    /// Node count (random).
    #[arg(long)]
    pub n: Option<u64>,
    /// Degree cap (random).
    #[arg(long)]
    pub max_degree: Option<u64>,
    /// Generator seed (random).
    #[arg(long)]
    pub graph_seed: Option<u64>,
    /// Four-cycle chain: go round each cycle the long way on first entry.
    #[arg(long)]
    pub long_entry: bool,
}

impl FamilyParams {
    /// Overrides one parameter by its flag name.
    pub fn set(&mut self, name: &str, v: u64) -> Result<(), CliError> {
        match name {
            "b" => self.b = Some(v),
            "c" => self.c = v,
            "l" => self.l = Some(v),
            "k" => self.k = Some(v),
            "segments" => self.segments = Some(v),
            "petals" => self.petals = Some(v),
            "delta" => self.delta = Some(v),
            "n" => self.n = Some(v),
            "max-degree" => self.max_degree = Some(v),
            "graph-seed" => self.graph_seed = Some(v),
            _ => return Err(CliError::Usage(format!("unknown parameter `{name}`"))),
        }
        Ok(())
    }

    pub fn build(&self, family: Family) -> Result<GeneratedInstance, CliError> {
        let need = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("{family} needs --{flag}")))
        };
        let built = match family {
            Family::Caterpillar => caterpillar(CaterpillarParams {
                b: need(self.b, "b")?,
                c: self.c,
                l: need(self.l, "l")?,
            }),
            Family::LrvVChain => lrv_v_chain(need(self.k, "k")?),
            Family::FourCycleChain => {
                let entry = if self.long_entry {
                    CycleEntry::Long
                } else {
                    CycleEntry::Short
                };
                four_cycle_chain_with(need(self.k, "k")?, entry)
            }
            Family::FlowerPath => flower_path(
                need(self.segments, "segments")?,
                need(self.petals, "petals")?,
            ),
            Family::Ratio => ratio_config(need(self.delta, "delta")?, need(self.k, "k")?),
            Family::Random => random_bounded_degree(
                need(self.n, "n")?,
                need(self.max_degree, "max-degree")?,
                need(self.graph_seed, "graph-seed")?,
            ),
            Family::Custom => {
                return Err(CliError::Usage(
                    "custom graphs are loaded with --graph".into(),
                ))
            }
        };
        built.map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Where the instance comes from: a family name with parameters, or a file.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Generator family.
    #[arg(long, required_unless_present = "graph")]
    pub family: Option<Family>,
    #[command(flatten)]
    pub params: FamilyParams,
    /// Start node override.
    #[arg(long)]
    pub start: Option<u32>,
}

impl Source {
    pub fn load(&self) -> Result<GeneratedInstance, CliError> {
        let mut inst = match (&self.graph, self.family) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                instance_from_json(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            (None, Some(f)) => self.params.build(f)?,
            (None, None) => return Err(CliError::Usage("give --graph or --family".into())),
        };
        if let Some(s) = self.start {
            if !inst.graph.contains(NodeId(s)) {
                return Err(CliError::Usage(format!("start {s} is not a node")));
            }
            inst.start = NodeId(s);
        }
        Ok(inst)
    }
}
