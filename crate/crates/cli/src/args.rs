use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "saccade-lab",
    version,
    about = "Simulate and analyze fixation scanpaths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the model over every manifest trial and write its scanpaths.
    Simulate,
    /// Compute return-fixation reports from one or more fixation logs.
    Analyze {
        /// Fixation logs; several logs are pooled as one dataset.
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Generate random-walk scanpaths and report the chance return rate.
    Null,
    /// Run the full model and its four ablations, with a similarity-index table.
    Ablate {
        /// Reference fixation logs; the full model is the reference when omitted.
        reference: Vec<PathBuf>,
    },
    /// Export builtin feature tensors for the manifest images as FMAP files.
    Features,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Model configuration file (key = value lines).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Trial manifest.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    /// Output directory, created if absent.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Replace existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    /// Return-fixation threshold in dva, overriding config and dataset defaults.
    #[arg(long = "threshold-dva", global = true, value_name = "X")]
    pub threshold_dva: Option<f64>,
    /// Number of null-model sequences.
    #[arg(long, global = true, value_name = "N")]
    pub count: Option<usize>,
    /// Write every intermediate map as FMAP files (simulate).
    #[arg(long = "dump-maps", global = true)]
    pub dump_maps: bool,
    /// Also write SVG histograms.
    #[arg(long, global = true)]
    pub figures: bool,
}
