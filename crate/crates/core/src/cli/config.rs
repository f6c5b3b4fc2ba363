use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde::Serialize;

use super::{EXIT_PASS, EXIT_USAGE};
use crate::graph::EnumLimits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Count internally connected graphs and check d² = 0 on their blocks.
    Enumerate,
    /// Cohomology of the graph complex, compared with the Drinfeld-Kohno dimensions.
    Cohomology,
    /// Trivalent trees modulo IHX, compared with special derivations.
    Sder,
    /// One-loop trace of d1 against the divergence on trivalent trees.
    DivCheck,
    /// Weight-two associator from the holonomy of the configuration-space connection.
    Associator,
    /// Weight-two flatness of the connection at random configurations.
    Flatness,
    /// Shuffle signs, Alexander-Whitney and shuffle maps on random simplicial sets.
    AwTest,
    /// Transport maps of flat polynomial connections on simplices.
    TransportTest,
    /// Every pipeline at the configured sizes.
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Enumerate => "enumerate",
            Self::Cohomology => "cohomology",
            Self::Sder => "sder",
            Self::DivCheck => "div-check",
            Self::Associator => "associator",
            Self::Flatness => "flatness",
            Self::AwTest => "aw-test",
            Self::TransportTest => "transport-test",
            Self::Report => "report",
        }
    }

    /// Commands whose output depends on random sampling.
    pub fn needs_seed(self) -> bool {
        matches!(
            self,
            Self::Associator | Self::Flatness | Self::AwTest | Self::TransportTest | Self::Report
        )
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "formality",
    version,
    about = "Graph complexes, associators and transport maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Number of external vertices.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Largest weight to compute.
    #[arg(long, global = true)]
    max_weight: Option<usize>,
    /// A single weight, overriding --max-weight where it applies.
    #[arg(long, global = true)]
    weight: Option<usize>,
    /// Truncation weight for series and coefficient algebras.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Monte Carlo samples per estimate.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Quadrature nodes along the associator path.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Random configurations for the flatness test.
    #[arg(long, global = true)]
    configs: Option<usize>,
    /// Report path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest number of graphs a single block may hold.
    #[arg(long, global = true)]
    limit_graphs: Option<usize>,
    /// Worker threads (0 for one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of `key=value` lines; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
            entries.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        let mut f = Flags::default();
        for (k, v) in &entries {
            match k.as_str() {
                "n" => f.n = Some(parse_value(k, v)?),
                "max-weight" => f.max_weight = Some(parse_value(k, v)?),
                "weight" => f.weight = Some(parse_value(k, v)?),
                "trunc" => f.trunc = Some(parse_value(k, v)?),
                "samples" => f.samples = Some(parse_value(k, v)?),
                "seed" => f.seed = Some(parse_value(k, v)?),
                "nodes" => f.nodes = Some(parse_value(k, v)?),
                "configs" => f.configs = Some(parse_value(k, v)?),
                "out" => f.out = Some(PathBuf::from(v)),
                "limit-graphs" => f.limit_graphs = Some(parse_value(k, v)?),
                "threads" => f.threads = Some(parse_value(k, v)?),
                _ => return Err(format!("{}: unknown key `{k}`", path.display())),
            }
        }
        Ok(f)
    }

    fn or(self, fallback: Flags) -> Flags {
        Flags {
            n: self.n.or(fallback.n),
            max_weight: self.max_weight.or(fallback.max_weight),
            weight: self.weight.or(fallback.weight),
            trunc: self.trunc.or(fallback.trunc),
            samples: self.samples.or(fallback.samples),
            seed: self.seed.or(fallback.seed),
            nodes: self.nodes.or(fallback.nodes),
            configs: self.configs.or(fallback.configs),
            out: self.out.or(fallback.out),
            limit_graphs: self.limit_graphs.or(fallback.limit_graphs),
            threads: self.threads.or(fallback.threads),
            config: self.config,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("invalid value `{value}` for {key}: {e}"))
}

/// A fully resolved run. The output path and thread count do not affect
/// results, so they are left out of the serialized form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub max_weight: usize,
    pub weight: Option<usize>,
    pub trunc: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    pub nodes: usize,
    pub configs: usize,
    pub limit_graphs: usize,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub threads: usize,
}

pub(super) enum ParseOutcome {
    Exit(i32),
    Error(String),
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: 3,
            max_weight: 3,
            weight: None,
            trunc: 3,
            samples: 1_000_000,
            seed: None,
            nodes: 24,
            configs: 10,
            limit_graphs: EnumLimits::default().max_graphs,
            out: PathBuf::from(format!("{}.json", command.name())),
            threads: 0,
        }
    }

    pub fn limits(&self) -> EnumLimits {
        EnumLimits {
            max_graphs: self.limit_graphs,
        }
    }

    /// The weights a command iterates over: `--weight` alone, or `1..=max_weight`.
    pub fn weights(&self) -> std::ops::RangeInclusive<usize> {
        match self.weight {
            Some(w) => w..=w,
            None => 1..=self.max_weight,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated")
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("n", self.n),
            ("max-weight", self.max_weight),
            ("trunc", self.trunc),
            ("samples", self.samples),
            ("nodes", self.nodes),
            ("configs", self.configs),
            ("limit-graphs", self.limit_graphs),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(format!("--{name} must be positive"));
        }
        if self.weight == Some(0) {
            return Err("--weight must be positive".into());
        }
        if self.command.needs_seed() && self.seed.is_none() {
            return Err(format!("{} needs --seed", self.command.name()));
        }
        Ok(())
    }

    fn resolve(command: Command, flags: Flags) -> Result<Self, String> {
        let flags = match &flags.config {
            Some(path) => {
                let file = Flags::from_file(path)?;
                flags.or(file)
            }
            None => flags,
        };
        let d = Self::new(command);
        let c = Self {
            command,
            n: flags.n.unwrap_or(d.n),
            max_weight: flags.max_weight.unwrap_or(d.max_weight),
            weight: flags.weight,
            trunc: flags.trunc.unwrap_or(d.trunc),
            samples: flags.samples.unwrap_or(d.samples),
            seed: flags.seed,
            nodes: flags.nodes.unwrap_or(d.nodes),
            configs: flags.configs.unwrap_or(d.configs),
            limit_graphs: flags.limit_graphs.unwrap_or(d.limit_graphs),
            out: flags.out.unwrap_or(d.out),
            threads: flags.threads.unwrap_or(d.threads),
        };
        c.validate()?;
        Ok(c)
    }

    pub(super) fn from_args<I, T>(args: I) -> Result<Self, ParseOutcome>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            ParseOutcome::Exit(code)
        })?;
        Self::resolve(cli.command, cli.flags).map_err(ParseOutcome::Error)
    }

    /// Parses without running, for callers embedding the front end.
    pub fn parse_args<I, T>(args: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
        Self::resolve(cli.command, cli.flags)
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    #[test]
    fn defaults_and_flags() {
        let c = RunConfig::parse_args(["formality", "enumerate", "--n", "2", "--weight", "1"]).unwrap();
        assert_eq!((c.command, c.n, c.weight), (Command::Enumerate, 2, Some(1)));
        assert_eq!(c.weights(), 1..=1);
        assert_eq!(c.out, PathBuf::from("enumerate.json"));
    }

    #[test]
    fn numeric_commands_need_a_seed() {
        let e = RunConfig::parse_args(["formality", "associator"]).unwrap_err();
        assert!(e.contains("--seed"), "{e}");
        assert!(RunConfig::parse_args(["formality", "associator", "--seed", "1"]).is_ok());
    }

    #[test]
    fn rejects_unknown_flags_and_zero_counts() {
        assert!(RunConfig::parse_args(["formality", "sder", "--bogus", "1"]).is_err());
        assert!(RunConfig::parse_args(["formality", "sder", "--n", "0"]).is_err());
        assert!(RunConfig::parse_args(["formality", "frobnicate"]).is_err());
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let path = std::env::temp_dir().join(format!("formality-config-{}.txt", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# sizes\nn = 4\nmax_weight=2\nseed=9").unwrap();
        drop(f);
        let p = path.to_str().unwrap();
        let c = RunConfig::parse_args(["formality", "flatness", "--config", p, "--n", "3"]).unwrap();
        assert_eq!((c.n, c.max_weight, c.seed), (3, 2, Some(9)));
        std::fs::write(&path, "colour=blue\n").unwrap();
        assert!(RunConfig::parse_args(["formality", "sder", "--config", p]).is_err());
        std::fs::remove_file(&path).unwrap();
    }
}
