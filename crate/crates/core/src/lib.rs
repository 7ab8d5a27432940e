//! Synthesis and evaluation of interval type-2 fuzzy-set (IT2FS) information
//! granules over dissimilarity-equipped data.
//!
//! The pipeline is built around the minimum-sum-of-dissimilarities (MinSOD)
//! prototype: a dataset is summarized by the element closest to all others,
//! and every element receives an interval membership `[LMF, UMF] ⊆ [0, 1]`
//! derived purely from pairwise dissimilarity values. The mean interval width
//! (normalized fuzzy entropy) measures the uncertainty carried by the granule,
//! and the [`calibration`] module quantifies how well that output uncertainty
//! tracks the entropy of the data-generating source.
//!
//! Modules:
//! - [`dataset`]: indexed, immutable element collections;
//! - [`matrix`]: symmetric pairwise dissimilarity caches and the MinSOD;
//! - [`granule`]: interval membership synthesis and fuzzy entropy;
//! - [`measures`]: Euclidean and labeled-graph dissimilarities;
//! - [`sources`]: seeded Gaussian / exponential / Markov-graph generators
//!   with closed-form entropies;
//! - [`calibration`]: granulation error, linear bridge fit, kernel-width search;
//! - [`cluster`]: k-means partitioning with per-cluster granulation and PCA
//!   plot projection.

pub mod calibration;
pub mod cluster;
pub mod dataset;
pub mod granule;
pub mod matrix;
pub mod measures;
pub mod sources;

pub use calibration::{
    analytic_example_granulate, fit_psi, granulation_error, optimize_width, CalibrationError,
    CalibrationInstance, CalibrationReport, ParameterGrid, PsiFit, PsiModel,
};
pub use cluster::{
    kmeans, kmeans_restarts, model_clusters, pca_project, ClusterAssignment, ClusterError,
    ClusterGranule, ClusterModel,
};
pub use dataset::{Dataset, DatasetError};
pub use granule::{
    granulate, granulate_matrix, lmf_value, umf_value, GranulationParams, GranuleError,
    IT2FSGranule, LmfStat, MembershipInterval,
};
pub use matrix::{DissimilarityMatrix, MatrixError};
pub use measures::{
    euclidean, graph_dissimilarity, GraphError, GraphWeights, Label, LabeledGraph, MeasureError,
    VectorElement,
};
pub use sources::{ExponentialSource, GaussianSource, MarkovGraphSource, SourceError};
