//! `cluster`: k-means partition of a vector dataset with one granule per
//! cluster, reported in ascending fuzzy-entropy order. Class labels, when
//! present in the file, feed post-hoc purity reporting only.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use granulate_core::{euclidean, kmeans_restarts, model_clusters, pca_project, GranulationParams};
use serde_json::json;

use crate::commands::LmfStatArg;
use crate::io;

#[derive(Args)]
pub struct ClusterArgs {
    /// Vector dataset, optional trailing class-label column
    data: PathBuf,
    /// Number of clusters
    #[arg(long)]
    k: usize,
    /// Base RNG seed; restarts use seed, seed+1, ...
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Independent k-means restarts, best inertia wins
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Iteration cap per run
    #[arg(long, default_value_t = 300)]
    max_iter: usize,
    /// Gaussian kernel width for the per-cluster granules
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Lower-membership scale
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Lower-membership row statistic
    #[arg(long, value_enum, default_value_t = LmfStatArg::Mean)]
    lmf_stat: LmfStatArg,
    /// Also project onto this many principal components
    /// (written to <out>.pca.tsv)
    #[arg(long)]
    pca: Option<usize>,
    /// Cluster report path (JSON)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: ClusterArgs) -> Result<()> {
    let file = io::read_vector_dataset(&args.data)?;
    let params = GranulationParams::new(args.width)?
        .with_lmf_scale(args.beta)?
        .with_lmf_stat(args.lmf_stat.into());

    let (assignment, winning_seed) = kmeans_restarts(
        &file.dataset,
        args.k,
        args.seed,
        args.restarts,
        args.max_iter,
    )?;
    let model = model_clusters(&file.dataset, &assignment, euclidean, &params)?;

    let clusters: Vec<serde_json::Value> = model
        .clusters
        .iter()
        .map(|cluster| {
            let mut value = json!({
                "cluster": cluster.cluster,
                "size": cluster.size(),
                "representative": cluster.members[cluster.granule.representative()],
                "entropy": cluster.entropy,
                "members": cluster.members,
                "intervals": cluster
                    .granule
                    .intervals()
                    .iter()
                    .map(|i| vec![i.lmf(), i.umf()])
                    .collect::<Vec<_>>(),
            });
            if let Some(labels) = &file.class_labels {
                let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
                for &member in &cluster.members {
                    *counts.entry(labels[member].as_str()).or_default() += 1;
                }
                let (majority, count) = counts
                    .iter()
                    .max_by_key(|(_, &count)| count)
                    .map(|(label, &count)| (label.to_string(), count))
                    .expect("clusters are non-empty");
                value["majority_class"] = json!(majority);
                value["purity"] = json!(count as f64 / cluster.size() as f64);
            }
            value
        })
        .collect();
    let report = json!({
        "k": args.k,
        "seed": args.seed,
        "restarts": args.restarts,
        "winning_seed": winning_seed,
        "iterations": assignment.iterations,
        "inertia": assignment.inertia,
        "kernel_width": args.width,
        "lmf_scale": args.beta,
        "clusters": clusters,
    });
    io::write_atomic(
        &args.out,
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;

    if let Some(components) = args.pca {
        let projected = pca_project(&file.dataset, components)?;
        let mut plot = String::new();
        for row in &projected {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            let _ = writeln!(plot, "{}", cells.join("\t"));
        }
        io::write_atomic(&io::sibling(&args.out, ".pca.tsv"), &plot)?;
    }

    for cluster in &model.clusters {
        println!(
            "cluster {} size {} entropy {:.8e}",
            cluster.cluster,
            cluster.size(),
            cluster.entropy
        );
    }
    Ok(())
}
