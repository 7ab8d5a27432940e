//! Interval type-2 fuzzy granules synthesized from dissimilarity values.
//!
//! A granule pairs a MinSOD representative with one membership interval per
//! dataset element. The upper membership of element `x` is a Gaussian kernel
//! of its dissimilarity to the representative, `u(d) = exp(-d^2 / (2 w^2))`;
//! the lower membership subtracts a spread statistic of the element's whole
//! dissimilarity row, `max(u - beta * l(row), 0)`. Wide intervals therefore
//! mark elements whose neighborhood is diverse, and the mean interval width
//! (the normalized fuzzy entropy) summarizes the uncertainty captured by the
//! granule.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dataset::Dataset;
use crate::matrix::DissimilarityMatrix;
use crate::measures::MeasureError;

#[derive(Debug, Error, PartialEq)]
pub enum GranuleError {
    #[error("membership interval [{lmf}, {umf}] violates 0 <= lmf <= umf <= 1")]
    InvalidInterval { lmf: f64, umf: f64 },
    #[error("{name} is {value}, must be a positive finite number")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("granule has no intervals")]
    NoIntervals,
    #[error("representative index {index} out of range for {len} intervals")]
    RepresentativeOutOfRange { index: usize, len: usize },
    #[error("granule covers {granule_len} elements but the dataset has {dataset_len}")]
    DatasetMismatch {
        granule_len: usize,
        dataset_len: usize,
    },
    #[error("malformed granule record: {0}")]
    MalformedRecord(String),
}

/// Which spread statistic of the dissimilarity row feeds the lower
/// membership function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LmfStat {
    /// Arithmetic mean of the whole row, self-dissimilarity included.
    #[default]
    Mean,
    /// Population standard deviation of the whole row.
    StdDev,
}

/// Parameters of the interval synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GranulationParams {
    kernel_width: f64,
    lmf_scale: f64,
    lmf_stat: LmfStat,
}

impl GranulationParams {
    /// Gaussian kernel width `w`, with `beta = 1` and the mean row statistic.
    pub fn new(kernel_width: f64) -> Result<Self, GranuleError> {
        if !kernel_width.is_finite() || kernel_width <= 0.0 {
            return Err(GranuleError::NonPositiveParameter {
                name: "kernel_width",
                value: kernel_width,
            });
        }
        Ok(Self {
            kernel_width,
            lmf_scale: 1.0,
            lmf_stat: LmfStat::Mean,
        })
    }

    /// Scale `beta` applied to the row statistic before it is subtracted
    /// from the UMF. Raw dissimilarities larger than 1 collapse every LMF
    /// to zero at `beta = 1`; a smaller scale keeps the lower bound
    /// informative.
    pub fn with_lmf_scale(mut self, lmf_scale: f64) -> Result<Self, GranuleError> {
        if !lmf_scale.is_finite() || lmf_scale <= 0.0 {
            return Err(GranuleError::NonPositiveParameter {
                name: "lmf_scale",
                value: lmf_scale,
            });
        }
        self.lmf_scale = lmf_scale;
        Ok(self)
    }

    pub fn with_lmf_stat(mut self, lmf_stat: LmfStat) -> Self {
        self.lmf_stat = lmf_stat;
        self
    }

    pub fn kernel_width(&self) -> f64 {
        self.kernel_width
    }

    pub fn lmf_scale(&self) -> f64 {
        self.lmf_scale
    }

    pub fn lmf_stat(&self) -> LmfStat {
        self.lmf_stat
    }
}

/// One element's membership interval `[lmf, umf]`, a subinterval of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipInterval {
    lmf: f64,
    umf: f64,
}

impl MembershipInterval {
    pub fn new(lmf: f64, umf: f64) -> Result<Self, GranuleError> {
        let ordered = 0.0 <= lmf && lmf <= umf && umf <= 1.0;
        if !ordered || !lmf.is_finite() || !umf.is_finite() {
            return Err(GranuleError::InvalidInterval { lmf, umf });
        }
        Ok(Self { lmf, umf })
    }

    pub fn lmf(&self) -> f64 {
        self.lmf
    }

    pub fn umf(&self) -> f64 {
        self.umf
    }

    pub fn width(&self) -> f64 {
        self.umf - self.lmf
    }
}

/// An interval type-2 fuzzy granule: a representative element index plus one
/// membership interval per dataset element (the footprint of uncertainty).
#[derive(Debug, Clone, PartialEq)]
pub struct IT2FSGranule {
    representative: usize,
    intervals: Vec<MembershipInterval>,
    params: GranulationParams,
}

impl IT2FSGranule {
    /// Assembles a granule from parts. Interval validity and index bounds are
    /// checked; `intervals[representative].umf == 1` additionally holds for
    /// every granule produced by [`granulate`], but is not demanded here so
    /// that constant-interval granules (see
    /// [`crate::calibration::analytic_example_granulate`]) can be expressed.
    pub fn new(
        representative: usize,
        intervals: Vec<MembershipInterval>,
        params: GranulationParams,
    ) -> Result<Self, GranuleError> {
        if intervals.is_empty() {
            return Err(GranuleError::NoIntervals);
        }
        if representative >= intervals.len() {
            return Err(GranuleError::RepresentativeOutOfRange {
                index: representative,
                len: intervals.len(),
            });
        }
        Ok(Self {
            representative,
            intervals,
            params,
        })
    }

    /// Index of the MinSOD representative.
    pub fn representative(&self) -> usize {
        self.representative
    }

    pub fn intervals(&self) -> &[MembershipInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn params(&self) -> &GranulationParams {
        &self.params
    }

    /// Normalized fuzzy entropy: the mean interval width, in `[0, 1]`.
    /// Zero on crisp granules, one when every interval is `[0, 1]`.
    pub fn fuzzy_entropy(&self) -> f64 {
        let total: f64 = self.intervals.iter().map(MembershipInterval::width).sum();
        total / self.intervals.len() as f64
    }

    /// Defuzzifies the granule to the representative element of `dataset`.
    pub fn defuzzify<'a, T>(&self, dataset: &'a Dataset<T>) -> Result<&'a T, GranuleError> {
        if dataset.len() != self.intervals.len() {
            return Err(GranuleError::DatasetMismatch {
                granule_len: self.intervals.len(),
                dataset_len: dataset.len(),
            });
        }
        dataset
            .get(self.representative)
            .ok_or(GranuleError::RepresentativeOutOfRange {
                index: self.representative,
                len: dataset.len(),
            })
    }

    /// Serializes to the canonical text record, reals at 9 significant
    /// digits:
    /// `{"representative_index": .., "kernel_width": .., "lmf_scale": ..,
    ///   "intervals": [[lmf, umf], ...]}`.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "{{\"representative_index\":{},\"kernel_width\":{},\"lmf_scale\":{},\"intervals\":[",
            self.representative,
            fmt_g9(self.params.kernel_width),
            fmt_g9(self.params.lmf_scale),
        );
        for (k, interval) in self.intervals.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "[{},{}]", fmt_g9(interval.lmf), fmt_g9(interval.umf));
        }
        out.push_str("]}");
        out
    }

    /// Parses a record produced by [`IT2FSGranule::to_record`]. The record
    /// does not carry the row-statistic choice, so the parsed parameters use
    /// the default mean statistic.
    pub fn from_record(text: &str) -> Result<Self, GranuleError> {
        #[derive(serde::Deserialize)]
        struct Record {
            representative_index: usize,
            kernel_width: f64,
            lmf_scale: f64,
            intervals: Vec<(f64, f64)>,
        }
        let record: Record =
            serde_json::from_str(text).map_err(|e| GranuleError::MalformedRecord(e.to_string()))?;
        let params =
            GranulationParams::new(record.kernel_width)?.with_lmf_scale(record.lmf_scale)?;
        let intervals = record
            .intervals
            .into_iter()
            .map(|(lmf, umf)| MembershipInterval::new(lmf, umf))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(record.representative_index, intervals, params)
    }
}

/// 9 significant digits, scientific notation; parses back as JSON.
fn fmt_g9(value: f64) -> String {
    format!("{value:.8e}")
}

/// Upper membership `u(d) = exp(-d^2 / (2 w^2))`: monotonically
/// non-increasing in the dissimilarity, one at zero.
pub fn umf_value(d_to_rep: f64, params: &GranulationParams) -> f64 {
    debug_assert!(d_to_rep >= 0.0, "dissimilarities are non-negative");
    let w = params.kernel_width;
    (-d_to_rep * d_to_rep / (2.0 * w * w)).exp()
}

/// Lower membership `max(umf - beta * l(row), 0)` where `l` is the row
/// statistic selected by the parameters. Never exceeds `umf`.
pub fn lmf_value(umf: f64, row_dissimilarities: &[f64], params: &GranulationParams) -> f64 {
    let stat = row_stat(row_dissimilarities, params.lmf_stat);
    lmf_from_stat(umf, stat, params.lmf_scale)
}

/// Spread statistic of a dissimilarity row (self-dissimilarity included,
/// divisor `n`).
pub(crate) fn row_stat(row: &[f64], stat: LmfStat) -> f64 {
    let n = row.len() as f64;
    let mean = row.iter().sum::<f64>() / n;
    match stat {
        LmfStat::Mean => mean,
        LmfStat::StdDev => {
            let var = row.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
            var.sqrt()
        }
    }
}

pub(crate) fn lmf_from_stat(umf: f64, stat: f64, lmf_scale: f64) -> f64 {
    (umf - lmf_scale * stat).max(0.0)
}

/// Synthesizes an IT2FS granule from a dataset and a dissimilarity measure:
/// locate the MinSOD representative, then give every element the interval
/// `[lmf, umf]` built from its kernel similarity to the representative and
/// its row spread. Deterministic; errors from the measure propagate.
pub fn granulate<T>(
    dataset: &Dataset<T>,
    measure: impl Fn(&T, &T) -> Result<f64, MeasureError>,
    params: &GranulationParams,
) -> Result<IT2FSGranule, MeasureError> {
    let matrix = DissimilarityMatrix::compute(dataset, measure)?;
    Ok(granulate_matrix(&matrix, params))
}

/// [`granulate`] on a precomputed dissimilarity matrix.
pub fn granulate_matrix(matrix: &DissimilarityMatrix, params: &GranulationParams) -> IT2FSGranule {
    let representative = matrix.minsod();
    let intervals = (0..matrix.n())
        .map(|i| {
            let umf = umf_value(matrix.get(i, representative), params);
            let lmf = lmf_value(umf, matrix.row(i), params);
            MembershipInterval::new(lmf, umf).expect("kernel and clamp keep intervals in [0, 1]")
        })
        .collect();
    IT2FSGranule::new(representative, intervals, *params)
        .expect("matrix dimensions give a valid granule")
}
