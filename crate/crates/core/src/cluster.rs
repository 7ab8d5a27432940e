//! Cluster-then-granulate: k-means partitioning of a vector dataset with one
//! IT2FS granule per cluster, ranked by fuzzy entropy, plus a PCA projection
//! for plot emission.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{Dataset, DatasetError};
use crate::granule::{granulate, GranulationParams, IT2FSGranule};
use crate::measures::{MeasureError, VectorElement};

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("k = {k} exceeds the dataset size {n}")]
    TooManyClusters { k: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroClusters,
    #[error("max_iter must be at least 1")]
    ZeroIterations,
    #[error("restarts must be at least 1")]
    ZeroRestarts,
    #[error("cluster {index} is empty")]
    EmptyCluster { index: usize },
    #[error("assignment covers {labels} elements but the dataset has {n}")]
    AssignmentMismatch { labels: usize, n: usize },
    #[error("label {label} out of range for k = {k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("requested {components} components but the data has dimension {dim}")]
    ComponentsExceedDim { components: usize, dim: usize },
    #[error("components must be at least 1")]
    ZeroComponents,
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Result of one k-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Cluster index per element, each in `0..k`.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Within-cluster sum of squared distances.
    pub inertia: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with seeded random distinct-point initialization.
/// Assignment ties break to the lowest cluster index; an emptied cluster is
/// reseeded from the point farthest from its current centroid. Converges
/// when the assignment stabilizes or after `max_iter` sweeps; deterministic
/// in the seed.
pub fn kmeans(
    dataset: &Dataset<VectorElement>,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusterAssignment, ClusterError> {
    let n = dataset.len();
    if k == 0 {
        return Err(ClusterError::ZeroClusters);
    }
    if k > n {
        return Err(ClusterError::TooManyClusters { k, n });
    }
    if max_iter == 0 {
        return Err(ClusterError::ZeroIterations);
    }
    let points: Vec<&[f64]> = dataset.iter().map(VectorElement::coords).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = rand::seq::index::sample(&mut rng, n, k);
    let mut centroids: Vec<Vec<f64>> = initial.iter().map(|i| points[i].to_vec()).collect();

    let mut labels = vec![usize::MAX; n];
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        // Assignment sweep.
        let mut next = vec![0usize; n];
        let mut nearest = vec![f64::INFINITY; n];
        for (i, point) in points.iter().enumerate() {
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_distance(point, centroid);
                if d < nearest[i] {
                    nearest[i] = d;
                    next[i] = c;
                }
            }
        }
        // Reseed emptied clusters from the farthest point, skipping points
        // that are the sole member of their cluster.
        let mut counts = vec![0usize; k];
        for &label in &next {
            counts[label] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let mut farthest = usize::MAX;
            for i in 0..n {
                if counts[next[i]] <= 1 {
                    continue;
                }
                if farthest == usize::MAX || nearest[i] > nearest[farthest] {
                    farthest = i;
                }
            }
            let donor = next[farthest];
            counts[donor] -= 1;
            counts[c] += 1;
            next[farthest] = c;
            centroids[c] = points[farthest].to_vec();
            nearest[farthest] = 0.0;
        }
        let converged = next == labels;
        labels = next;
        // Update sweep.
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        for (i, point) in points.iter().enumerate() {
            for (j, &x) in point.iter().enumerate() {
                sums[labels[i]][j] += x;
            }
        }
        for c in 0..k {
            for value in sums[c].iter_mut() {
                *value /= counts[c] as f64;
            }
        }
        centroids = sums;
        if converged {
            break;
        }
    }

    let inertia = points
        .iter()
        .zip(&labels)
        .map(|(point, &label)| squared_distance(point, &centroids[label]))
        .sum();
    Ok(ClusterAssignment {
        labels,
        centroids,
        iterations,
        inertia,
    })
}

/// Best of `restarts` independent runs with seeds `base_seed, base_seed + 1,
/// ...`, by inertia; ties keep the earliest seed. Returns the winning
/// assignment and its seed.
pub fn kmeans_restarts(
    dataset: &Dataset<VectorElement>,
    k: usize,
    base_seed: u64,
    restarts: usize,
    max_iter: usize,
) -> Result<(ClusterAssignment, u64), ClusterError> {
    if restarts == 0 {
        return Err(ClusterError::ZeroRestarts);
    }
    let mut best: Option<(ClusterAssignment, u64)> = None;
    for offset in 0..restarts {
        let seed = base_seed.wrapping_add(offset as u64);
        let run = kmeans(dataset, k, seed, max_iter)?;
        let improves = match &best {
            None => true,
            Some((current, _)) => run.inertia < current.inertia,
        };
        if improves {
            best = Some((run, seed));
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// One cluster's granulation: original cluster id, member indices into the
/// full dataset, the granule over the member subset, and its fuzzy entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGranule {
    pub cluster: usize,
    pub members: Vec<usize>,
    pub granule: IT2FSGranule,
    pub entropy: f64,
}

impl ClusterGranule {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Per-cluster granulation of a partitioned dataset, sorted by ascending
/// fuzzy entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub clusters: Vec<ClusterGranule>,
}

/// Granulates every cluster of `assignment` over its member subset. Each
/// cluster must be non-empty; entropies are reported in ascending order.
pub fn model_clusters<T: Clone>(
    dataset: &Dataset<T>,
    assignment: &ClusterAssignment,
    measure: impl Fn(&T, &T) -> Result<f64, MeasureError>,
    params: &GranulationParams,
) -> Result<ClusterModel, ClusterError> {
    let n = dataset.len();
    if assignment.labels.len() != n {
        return Err(ClusterError::AssignmentMismatch {
            labels: assignment.labels.len(),
            n,
        });
    }
    let k = assignment.centroids.len();
    let mut members = vec![Vec::new(); k];
    for (i, &label) in assignment.labels.iter().enumerate() {
        if label >= k {
            return Err(ClusterError::LabelOutOfRange { label, k });
        }
        members[label].push(i);
    }
    let mut clusters = Vec::with_capacity(k);
    for (cluster, member_indices) in members.into_iter().enumerate() {
        if member_indices.is_empty() {
            return Err(ClusterError::EmptyCluster { index: cluster });
        }
        let subset = dataset.subset(&member_indices)?;
        let granule = granulate(&subset, &measure, params)?;
        let entropy = granule.fuzzy_entropy();
        clusters.push(ClusterGranule {
            cluster,
            members: member_indices,
            granule,
            entropy,
        });
    }
    clusters.sort_by(|a, b| a.entropy.total_cmp(&b.entropy));
    Ok(ClusterModel { clusters })
}

/// Projects a vector dataset onto its top principal components.
///
/// The sample covariance of the mean-centered data is decomposed by power
/// iteration with deflation; each eigenvector's sign is fixed so that its
/// largest-magnitude loading is positive.
pub fn pca_project(
    dataset: &Dataset<VectorElement>,
    components: usize,
) -> Result<Vec<Vec<f64>>, ClusterError> {
    let n = dataset.len();
    let dim = dataset.dim();
    if components == 0 {
        return Err(ClusterError::ZeroComponents);
    }
    if components > dim {
        return Err(ClusterError::ComponentsExceedDim { components, dim });
    }

    let mut mean = vec![0.0; dim];
    for element in dataset.iter() {
        for (j, &x) in element.coords().iter().enumerate() {
            mean[j] += x;
        }
    }
    for value in mean.iter_mut() {
        *value /= n as f64;
    }
    let centered: Vec<Vec<f64>> = dataset
        .iter()
        .map(|element| {
            element
                .coords()
                .iter()
                .zip(&mean)
                .map(|(x, m)| x - m)
                .collect()
        })
        .collect();

    // Sample covariance, divisor n - 1 (zero matrix when n = 1).
    let divisor = (n as f64 - 1.0).max(1.0);
    let mut covariance = vec![vec![0.0; dim]; dim];
    for row in &centered {
        for a in 0..dim {
            for b in a..dim {
                covariance[a][b] += row[a] * row[b] / divisor;
            }
        }
    }
    for a in 1..dim {
        let (upper, lower) = covariance.split_at_mut(a);
        for (b, upper_row) in upper.iter().enumerate() {
            lower[0][b] = upper_row[a];
        }
    }

    let axes = dominant_eigenvectors(covariance, components);
    Ok(centered
        .iter()
        .map(|row| {
            axes.iter()
                .map(|axis| row.iter().zip(axis).map(|(x, v)| x * v).sum())
                .collect()
        })
        .collect())
}

/// Top-`count` eigenvectors of a symmetric PSD matrix by power iteration
/// with deflation.
fn dominant_eigenvectors(mut matrix: Vec<Vec<f64>>, count: usize) -> Vec<Vec<f64>> {
    let dim = matrix.len();
    let mut axes = Vec::with_capacity(count);
    for _ in 0..count {
        let vector = power_iteration(&matrix);
        let eigenvalue = rayleigh(&matrix, &vector);
        for a in 0..dim {
            for b in 0..dim {
                matrix[a][b] -= eigenvalue * vector[a] * vector[b];
            }
        }
        axes.push(vector);
    }
    axes
}

fn power_iteration(matrix: &[Vec<f64>]) -> Vec<f64> {
    let dim = matrix.len();
    // Deterministic starts; later ones only matter if an earlier start is
    // orthogonal to the dominant eigenvector or annihilated by the matrix.
    let starts = std::iter::once(vec![1.0; dim]).chain((0..dim).map(|i| {
        let mut basis = vec![0.0; dim];
        basis[i] = 1.0;
        basis
    }));
    for start in starts {
        let mut v = normalized(&start);
        let mut usable = true;
        for _ in 0..1000 {
            let mut next = mat_vec(matrix, &v);
            let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-300 {
                usable = false;
                break;
            }
            for value in next.iter_mut() {
                *value /= norm;
            }
            let delta: f64 = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            v = next;
            if delta < 1e-13 {
                break;
            }
        }
        if usable {
            return fix_sign(v);
        }
    }
    // The matrix is (numerically) zero; any unit vector is an eigenvector.
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    v
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

fn mat_vec(matrix: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
        .collect()
}

fn rayleigh(matrix: &[Vec<f64>], v: &[f64]) -> f64 {
    mat_vec(matrix, v).iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Largest-magnitude loading positive (ties to the lowest index).
fn fix_sign(mut v: Vec<f64>) -> Vec<f64> {
    let mut lead = 0;
    for (i, value) in v.iter().enumerate() {
        if value.abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        for value in v.iter_mut() {
            *value = -*value;
        }
    }
    v
}
