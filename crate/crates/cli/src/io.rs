//! Dataset file formats and atomic output writing.
//!
//! Vector datasets are delimiter-separated text, one element per row, with an
//! optional trailing class-label column. Graph datasets are JSON lines, one
//! `{"nodes": [...], "edges": [[i, j, label], ...]}` record per graph.
//! Output files are written to a `.tmp` sibling and renamed into place, so a
//! failed run leaves no partial artifacts behind.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use granulate_core::{Dataset, LabeledGraph, VectorElement};

/// A vector dataset plus the optional class-label column.
pub struct VectorFile {
    pub dataset: Dataset<VectorElement>,
    pub class_labels: Option<Vec<String>>,
}

pub enum DatasetFile {
    Vectors(VectorFile),
    Graphs(Dataset<LabeledGraph>),
}

/// Reads either dataset format, deciding by the first non-empty line: JSON
/// object records mean graphs, anything else is parsed as delimited vectors.
pub fn read_dataset(path: &Path) -> Result<DatasetFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read dataset {}", path.display()))?;
    let first = text.lines().map(str::trim).find(|line| !line.is_empty());
    match first {
        Some(line) if line.starts_with('{') => Ok(DatasetFile::Graphs(parse_graphs(&text)?)),
        Some(_) => Ok(DatasetFile::Vectors(parse_vectors(&text)?)),
        None => bail!("dataset {} is empty", path.display()),
    }
}

pub fn read_vector_dataset(path: &Path) -> Result<VectorFile> {
    match read_dataset(path)? {
        DatasetFile::Vectors(file) => Ok(file),
        DatasetFile::Graphs(_) => bail!(
            "{} holds graph records, this command needs a vector dataset",
            path.display()
        ),
    }
}

fn parse_vectors(text: &str) -> Result<VectorFile> {
    let mut rows = Vec::new();
    let mut class_labels = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let (coord_tokens, label) = match tokens.last() {
            Some(last) if last.parse::<f64>().is_err() => {
                (&tokens[..tokens.len() - 1], Some(last.to_string()))
            }
            _ => (&tokens[..], None),
        };
        let coords = coord_tokens
            .iter()
            .map(|token| {
                token
                    .parse::<f64>()
                    .with_context(|| format!("line {}: bad number {token:?}", line_no + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        if coords.is_empty() {
            bail!("line {}: no numeric columns", line_no + 1);
        }
        rows.push(VectorElement::new(coords)?);
        class_labels.push(label);
    }
    let labeled = class_labels.iter().filter(|l| l.is_some()).count();
    let class_labels = if labeled == 0 {
        None
    } else if labeled == rows.len() {
        Some(class_labels.into_iter().map(Option::unwrap).collect())
    } else {
        bail!("class labels are present on some rows but not all");
    };
    Ok(VectorFile {
        dataset: Dataset::from_vectors(rows)?,
        class_labels,
    })
}

fn parse_graphs(text: &str) -> Result<Dataset<LabeledGraph>> {
    let mut graphs = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let graph: LabeledGraph = serde_json::from_str(line)
            .with_context(|| format!("line {}: bad graph record", line_no + 1))?;
        graphs.push(graph);
    }
    Ok(Dataset::new(graphs)?)
}

/// One comma-separated row per element; `{}` formatting keeps the shortest
/// round-trip representation of every coordinate.
pub fn format_vectors(dataset: &Dataset<VectorElement>, class_labels: Option<&[String]>) -> String {
    let mut out = String::new();
    for (i, element) in dataset.iter().enumerate() {
        let mut row: Vec<String> = element.coords().iter().map(f64::to_string).collect();
        if let Some(labels) = class_labels {
            row.push(labels[i].clone());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn format_graphs(dataset: &Dataset<LabeledGraph>) -> Result<String> {
    let mut out = String::new();
    for graph in dataset.iter() {
        out.push_str(&serde_json::to_string(graph)?);
        out.push('\n');
    }
    Ok(out)
}

/// Writes through a temporary sibling and renames into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut temp = path.as_os_str().to_owned();
    temp.push(".tmp");
    let temp = PathBuf::from(temp);
    fs::write(&temp, contents).with_context(|| format!("cannot write {}", temp.display()))?;
    fs::rename(&temp, path).with_context(|| {
        let _ = fs::remove_file(&temp);
        format!("cannot move output into place at {}", path.display())
    })?;
    Ok(())
}

/// Sibling path with an extra suffix appended to the full file name
/// (`out.json` -> `out.json.widths.tsv`).
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}
