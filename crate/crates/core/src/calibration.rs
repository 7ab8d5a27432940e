//! Uncertainty-preservation evaluation: granulation error, the linear bridge
//! between input and output entropy scales, and the kernel-width search.
//!
//! A granulation procedure is judged by how faithfully the fuzzy entropy of
//! its output granule tracks the entropy of the data source. The two scales
//! differ, so a monotone bridge function maps between them; in practice the
//! bridge is approximated by a least-squares line fitted to
//! `(output entropy, source entropy)` pairs collected over a parameter sweep,
//! and the kernel width is chosen to minimize the fitting error.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::granule::{
    lmf_from_stat, row_stat, umf_value, GranulationParams, GranuleError, IT2FSGranule, LmfStat,
    MembershipInterval,
};
use crate::matrix::DissimilarityMatrix;
use crate::measures::MeasureError;

#[derive(Debug, Error, PartialEq)]
pub enum CalibrationError {
    #[error("need at least 2 points to fit, got {found}")]
    TooFewPoints { found: usize },
    #[error("all abscissa values are equal; the fit is undefined")]
    ConstantAbscissa,
    #[error("point ({x}, {y}) is not finite")]
    NonFinitePoint { x: f64, y: f64 },
    #[error("psi is not monotonically increasing near {at}")]
    NonMonotonePsi { at: f64 },
    #[error("psi({at}) evaluated to {value}")]
    NonFinitePsi { at: f64, value: f64 },
    #[error("sigma is {sigma}, the constant-interval construction needs sigma in (0, 1]")]
    SigmaOutOfRange { sigma: f64 },
    #[error("invalid width grid [{lo}, {hi}] step {step}")]
    InvalidGrid { lo: f64, hi: f64, step: f64 },
    #[error("need at least 2 training and 1 holdout instance, got {train} and {holdout}")]
    TooFewInstances { train: usize, holdout: usize },
    #[error("every width in the grid failed to fit")]
    NoViableWidth,
    #[error(transparent)]
    InvalidParams(#[from] GranuleError),
}

/// Absolute mismatch `|h_in - psi(h_out)|` between the input uncertainty and
/// the bridged output uncertainty. Before evaluating, `psi` is probed on a
/// small bracket around `h_out` (nine points spanning +-10%, clamped to stay
/// positive when `h_out > 0`) and must be strictly increasing there.
pub fn granulation_error(
    h_in: f64,
    h_out: f64,
    psi: impl Fn(f64) -> f64,
) -> Result<f64, CalibrationError> {
    let span = 0.1 * h_out.abs().max(1e-3);
    let mut lo = h_out - span;
    if h_out > 0.0 {
        lo = lo.max(h_out * 0.5);
    }
    let hi = h_out + span;
    let mut previous = f64::NEG_INFINITY;
    for k in 0..9 {
        let t = lo + (hi - lo) * k as f64 / 8.0;
        let value = psi(t);
        if value.is_nan() {
            return Err(CalibrationError::NonFinitePsi { at: t, value });
        }
        if value <= previous {
            return Err(CalibrationError::NonMonotonePsi { at: t });
        }
        previous = value;
    }
    let bridged = psi(h_out);
    if !bridged.is_finite() {
        return Err(CalibrationError::NonFinitePsi {
            at: h_out,
            value: bridged,
        });
    }
    Ok((h_in - bridged).abs())
}

/// The constant-interval granulator: every element of a dataset sampled from
/// a zero-mean Gaussian with deviation `sigma` receives the membership
/// interval `[0, sigma]`, so the granule's fuzzy entropy equals `sigma`
/// itself. With the bridge `psi(h) = ln(2 pi e h^2) / 2` this construction
/// attains zero granulation error, which makes it a useful exactness
/// reference. The representative is fixed at index 0 and the parameters
/// record `sigma` as the nominal kernel width.
pub fn analytic_example_granulate<T>(
    dataset: &Dataset<T>,
    sigma: f64,
) -> Result<IT2FSGranule, CalibrationError> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(CalibrationError::SigmaOutOfRange { sigma });
    }
    let interval = MembershipInterval::new(0.0, sigma)?;
    let params = GranulationParams::new(sigma)?;
    Ok(IT2FSGranule::new(0, vec![interval; dataset.len()], params)?)
}

/// A fitted linear bridge `h_in ~ slope * h_out + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiModel {
    slope: f64,
    intercept: f64,
}

impl PsiModel {
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn eval(&self, h_out: f64) -> f64 {
        self.slope * h_out + self.intercept
    }

    /// Whether the fitted bridge is monotonically increasing, as a valid
    /// uncertainty bridge must be.
    pub fn is_increasing(&self) -> bool {
        self.slope > 0.0
    }
}

/// Fit result: the line plus its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiFit {
    pub model: PsiModel,
    pub r_squared: f64,
}

/// Ordinary least squares over `(h_out, h_in)` pairs. Requires at least two
/// points with non-constant `h_out`. A constant `h_in` yields `R^2 = 1` when
/// the residuals vanish and 0 otherwise.
pub fn fit_psi(points: &[(f64, f64)]) -> Result<PsiFit, CalibrationError> {
    if points.len() < 2 {
        return Err(CalibrationError::TooFewPoints {
            found: points.len(),
        });
    }
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(CalibrationError::NonFinitePoint { x, y });
        }
    }
    let n = points.len() as f64;
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
        syy += (y - y_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(CalibrationError::ConstantAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let model = PsiModel { slope, intercept };
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - model.eval(x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 {
        1.0 - ss_res / syy
    } else {
        // Constant ordinate: a zero-slope line through the mean either
        // reproduces it exactly or it does not.
        let tolerance = n * (f64::EPSILON * (1.0 + y_mean.abs())).powi(2);
        if ss_res <= tolerance {
            1.0
        } else {
            0.0
        }
    };
    Ok(PsiFit { model, r_squared })
}

/// Inclusive arithmetic width grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    lo: f64,
    hi: f64,
    step: f64,
}

impl ParameterGrid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self, CalibrationError> {
        let valid = lo.is_finite()
            && hi.is_finite()
            && step.is_finite()
            && lo > 0.0
            && lo <= hi
            && step > 0.0;
        if !valid {
            return Err(CalibrationError::InvalidGrid { lo, hi, step });
        }
        Ok(Self { lo, hi, step })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `lo, lo + step, ...` up to `hi` (inclusive, with a small slack against
    /// accumulated rounding).
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let slack = self.hi + self.step * 1e-9;
        (0..)
            .map(|k| self.lo + k as f64 * self.step)
            .take_while(move |w| *w <= slack)
    }
}

impl Default for ParameterGrid {
    /// `[0.01, 5]` with step `0.01`.
    fn default() -> Self {
        Self {
            lo: 0.01,
            hi: 5.0,
            step: 0.01,
        }
    }
}

/// One dataset entering the calibration: its pairwise dissimilarity matrix
/// and the closed-form entropy of the source it was sampled from.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationInstance {
    matrix: DissimilarityMatrix,
    source_entropy: f64,
}

impl CalibrationInstance {
    pub fn new(matrix: DissimilarityMatrix, source_entropy: f64) -> Self {
        Self {
            matrix,
            source_entropy,
        }
    }

    pub fn from_dataset<T>(
        dataset: &Dataset<T>,
        measure: impl Fn(&T, &T) -> Result<f64, MeasureError>,
        source_entropy: f64,
    ) -> Result<Self, MeasureError> {
        Ok(Self {
            matrix: DissimilarityMatrix::compute(dataset, measure)?,
            source_entropy,
        })
    }

    pub fn matrix(&self) -> &DissimilarityMatrix {
        &self.matrix
    }

    pub fn source_entropy(&self) -> f64 {
        self.source_entropy
    }
}

/// Output of the width search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    /// Training `(output fuzzy entropy, input source entropy)` pairs at the
    /// selected width, for external plotting.
    pub points: Vec<(f64, f64)>,
    pub model: PsiModel,
    pub r_squared: f64,
    /// Mean `|h_in - f(h_out)|` over the holdout instances at the selected
    /// width.
    pub epsilon: f64,
    pub best_width: f64,
}

/// Width-independent per-matrix quantities: the representative, each
/// element's dissimilarity to it, and each row's spread statistic.
struct Precomputed {
    d_to_rep: Vec<f64>,
    row_stats: Vec<f64>,
    source_entropy: f64,
}

impl Precomputed {
    fn build(instance: &CalibrationInstance, stat: LmfStat) -> Self {
        let matrix = &instance.matrix;
        let rep = matrix.minsod();
        let n = matrix.n();
        Self {
            d_to_rep: (0..n).map(|i| matrix.get(i, rep)).collect(),
            row_stats: (0..n).map(|i| row_stat(matrix.row(i), stat)).collect(),
            source_entropy: instance.source_entropy,
        }
    }

    /// Fuzzy entropy of the granule this matrix produces at the given
    /// parameters; identical to granulating from scratch, with the
    /// width-independent parts reused across the sweep.
    fn entropy_at(&self, params: &GranulationParams) -> f64 {
        let total: f64 = self
            .d_to_rep
            .iter()
            .zip(&self.row_stats)
            .map(|(&d, &stat)| {
                let umf = umf_value(d, params);
                umf - lmf_from_stat(umf, stat, params.lmf_scale())
            })
            .sum();
        total / self.d_to_rep.len() as f64
    }
}

/// Linear search over the width grid. At each width every training matrix is
/// granulated, the `(output entropy, source entropy)` pairs are fitted, and
/// the width whose fit has the smallest mean absolute fitting error on the
/// training pairs is selected (ties to the smallest width; widths whose fit
/// fails are excluded). The reported `epsilon` is the mean absolute error of
/// the selected fit on the holdout instances.
pub fn optimize_width(
    train: &[CalibrationInstance],
    holdout: &[CalibrationInstance],
    grid: &ParameterGrid,
    lmf_scale: f64,
    lmf_stat: LmfStat,
) -> Result<CalibrationReport, CalibrationError> {
    if train.len() < 2 || holdout.is_empty() {
        return Err(CalibrationError::TooFewInstances {
            train: train.len(),
            holdout: holdout.len(),
        });
    }
    // Validates the scale once; per-width parameters reuse it.
    GranulationParams::new(1.0)?.with_lmf_scale(lmf_scale)?;

    let train_pre: Vec<Precomputed> = train
        .iter()
        .map(|inst| Precomputed::build(inst, lmf_stat))
        .collect();
    let holdout_pre: Vec<Precomputed> = holdout
        .iter()
        .map(|inst| Precomputed::build(inst, lmf_stat))
        .collect();

    struct Candidate {
        fitting_error: f64,
        width: f64,
        fit: PsiFit,
        points: Vec<(f64, f64)>,
    }
    let mut best: Option<Candidate> = None;
    for width in grid.values() {
        let params = GranulationParams::new(width)?
            .with_lmf_scale(lmf_scale)?
            .with_lmf_stat(lmf_stat);
        let points: Vec<(f64, f64)> = train_pre
            .iter()
            .map(|pre| (pre.entropy_at(&params), pre.source_entropy))
            .collect();
        let Ok(fit) = fit_psi(&points) else {
            continue;
        };
        let fitting_error = points
            .iter()
            .map(|&(x, y)| (y - fit.model.eval(x)).abs())
            .sum::<f64>()
            / points.len() as f64;
        let improves = match &best {
            None => true,
            Some(current) => fitting_error < current.fitting_error,
        };
        if improves {
            best = Some(Candidate {
                fitting_error,
                width,
                fit,
                points,
            });
        }
    }

    let Candidate {
        width: best_width,
        fit,
        points,
        ..
    } = best.ok_or(CalibrationError::NoViableWidth)?;
    let params = GranulationParams::new(best_width)?
        .with_lmf_scale(lmf_scale)?
        .with_lmf_stat(lmf_stat);
    let epsilon = holdout_pre
        .iter()
        .map(|pre| (pre.source_entropy - fit.model.eval(pre.entropy_at(&params))).abs())
        .sum::<f64>()
        / holdout_pre.len() as f64;

    Ok(CalibrationReport {
        points,
        model: fit.model,
        r_squared: fit.r_squared,
        epsilon,
        best_width,
    })
}
