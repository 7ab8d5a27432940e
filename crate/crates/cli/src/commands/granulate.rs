//! `granulate`: build the IT2FS granule of a dataset file, write its record
//! and a per-element interval-width plot file, and print the fuzzy entropy.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use granulate_core::{
    euclidean, granulate, graph_dissimilarity, GranulationParams, GraphWeights, IT2FSGranule,
};

use crate::commands::LmfStatArg;
use crate::io::{self, DatasetFile};

#[derive(Args)]
pub struct GranulateArgs {
    /// Input dataset: vector rows or graph JSON lines (auto-detected)
    data: PathBuf,
    /// Gaussian kernel width for the upper membership
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Scale applied to the row statistic in the lower membership
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Row statistic feeding the lower membership
    #[arg(long, value_enum, default_value_t = LmfStatArg::Mean)]
    lmf_stat: LmfStatArg,
    /// Granule record path; plot data goes to <out>.widths.tsv
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: GranulateArgs) -> Result<()> {
    let params = GranulationParams::new(args.width)?
        .with_lmf_scale(args.beta)?
        .with_lmf_stat(args.lmf_stat.into());

    let (granule, plot_abscissa): (IT2FSGranule, Vec<String>) = match io::read_dataset(&args.data)?
    {
        DatasetFile::Vectors(file) => {
            let granule = granulate(&file.dataset, euclidean, &params)?;
            // 1-D elements plot against their value, otherwise the index.
            let abscissa = if file.dataset.dim() == 1 {
                file.dataset
                    .iter()
                    .map(|e| e.coords()[0].to_string())
                    .collect()
            } else {
                (0..file.dataset.len()).map(|i| i.to_string()).collect()
            };
            (granule, abscissa)
        }
        DatasetFile::Graphs(dataset) => {
            let weights = GraphWeights::default();
            let granule = granulate(
                &dataset,
                |a, b| graph_dissimilarity(a, b, &weights),
                &params,
            )?;
            let abscissa = (0..dataset.len()).map(|i| i.to_string()).collect();
            (granule, abscissa)
        }
    };

    io::write_atomic(&args.out, &format!("{}\n", granule.to_record()))?;

    let mut plot = String::new();
    for (x, interval) in plot_abscissa.iter().zip(granule.intervals()) {
        let _ = writeln!(plot, "{x}\t{}", interval.width());
    }
    io::write_atomic(&io::sibling(&args.out, ".widths.tsv"), &plot)?;

    println!("fuzzy_entropy {:.8e}", granule.fuzzy_entropy());
    Ok(())
}
