//! Command-line surface: subcommands, flags, and the dims/nodes syntax.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridctl_core::{GridSpec, NodeIndex};

/// Exact controllability and observability analysis of grid graphs.
#[derive(Debug, Parser)]
#[command(name = "gridctl", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a node set controls (or observes) the grid.
    Analyze(AnalyzeArgs),
    /// Emit the node partition that determines single-node verdicts.
    Partition(PartitionArgs),
    /// Propose a smallest controllable node set.
    Suggest(SuggestArgs),
    /// List eigenvalues, multiplicities, and symmetry profiles.
    Spectrum(SpectrumArgs),
    /// Analyze and cross-check the verdict against the numerical oracle.
    Verify(AnalyzeArgs),
    /// Scan a dims range checking that every multiple eigenvalue is
    /// carried by a proper sub-brick.
    ScanConjecture(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Inputs injected at the node set; verdict speaks of controllability.
    Controllability,
    /// Outputs read at the node set; same analysis, observability labels.
    Observability,
}

impl Mode {
    /// Adjective for verdict strings.
    pub fn adjective(self) -> &'static str {
        match self {
            Mode::Controllability => "controllable",
            Mode::Observability => "observable",
        }
    }

    /// Machine-readable name.
    pub fn name(self) -> &'static str {
        match self {
            Mode::Controllability => "controllability",
            Mode::Observability => "observability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
    Dot,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Grid dimensions, e.g. "7x15" or "4x6x3".
    #[arg(long)]
    pub dims: String,
    /// Node set: semicolon-separated nodes, comma-separated 1-based
    /// coordinates, e.g. "1,2;4,1".
    #[arg(long)]
    pub nodes: String,
    #[arg(long, value_enum, default_value_t = Mode::Controllability)]
    pub mode: Mode,
    /// Output format (text or json).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Embed witness eigenvectors in the report.
    #[arg(long)]
    pub witnesses: bool,
    /// Also run the numerical oracle and embed the agreement status.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Grid dimensions, e.g. "7x15".
    #[arg(long)]
    pub dims: String,
    #[arg(long, value_enum, default_value_t = Mode::Controllability)]
    pub mode: Mode,
    /// Output format (text, json, svg, or dot).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SuggestArgs {
    /// Grid dimensions, e.g. "7x15".
    #[arg(long)]
    pub dims: String,
    #[arg(long, value_enum, default_value_t = Mode::Controllability)]
    pub mode: Mode,
    /// Output format (text or json).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Grid dimensions, e.g. "4x6".
    #[arg(long)]
    pub dims: String,
    /// Output format (text or json).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Upper dimension bounds, e.g. "10x10": scans every grid with
    /// 2 <= n_l <= bound_l.
    #[arg(long)]
    pub max_dims: String,
    /// Output format (text or json).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Parse "7x15" style dimensions.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    let dims: Result<Vec<usize>, _> =
        s.split(['x', 'X']).map(|part| part.trim().parse::<usize>()).collect();
    match dims {
        Ok(dims) if !dims.is_empty() => Ok(dims),
        _ => Err(format!("invalid dims \"{s}\": expected the form 7x15")),
    }
}

/// Parse "1,2;4,1" style node lists against the grid's arity and bounds.
pub fn parse_nodes(s: &str, grid: &GridSpec) -> Result<Vec<NodeIndex>, String> {
    let mut nodes = Vec::new();
    for part in s.split(';') {
        let coords: Result<Vec<usize>, _> =
            part.split(',').map(|c| c.trim().parse::<usize>()).collect();
        let coords = coords
            .map_err(|_| format!("invalid node \"{part}\": expected the form 1,2"))?;
        if coords.len() != grid.ndim() {
            return Err(format!(
                "node \"{part}\" has {} coordinates, grid {grid} needs {}",
                coords.len(),
                grid.ndim()
            ));
        }
        let node = NodeIndex::new(coords);
        if !grid.contains(&node) {
            return Err(format!("node {node} is outside the grid {grid}"));
        }
        nodes.push(node);
    }
    if nodes.is_empty() {
        return Err("empty node list".into());
    }
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_forms() {
        assert_eq!(parse_dims("7x15").unwrap(), vec![7, 15]);
        assert_eq!(parse_dims("4X6x3").unwrap(), vec![4, 6, 3]);
        assert_eq!(parse_dims(" 9 ").unwrap(), vec![9]);
        assert!(parse_dims("7x").is_err());
        assert!(parse_dims("").is_err());
        assert!(parse_dims("axb").is_err());
    }

    #[test]
    fn node_forms() {
        let g = GridSpec::new(vec![7, 15]).unwrap();
        let nodes = parse_nodes("1,2; 4,1", &g).unwrap();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].coords(), &[1, 2]);
        assert_eq!(nodes[1].coords(), &[4, 1]);
        assert!(parse_nodes("1", &g).is_err());
        assert!(parse_nodes("0,2", &g).is_err());
        assert!(parse_nodes("8,1", &g).is_err());
        assert!(parse_nodes("", &g).is_err());
    }
}
