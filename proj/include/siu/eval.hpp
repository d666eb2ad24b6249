#ifndef SIU_EVAL_HPP
#define SIU_EVAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "siu/errors.hpp"

namespace siu {

// --- word correctness -------------------------------------------------------

enum class WcsMode { slots, align };

// Word correctness score in [0, 1].
//
// slots mode: fraction of the scored slot indices whose response word equals
// the reference word (case-folded). An empty `slots` list scores every
// reference position. A response shorter than a scored slot counts as wrong.
//
// align mode: matched words in a minimum-edit-distance alignment (unit
// costs) divided by the reference length. Among cost-optimal alignments the
// one with the most matches is taken, earlier reference positions first.
double wcs(const std::vector<std::string>& reference, const std::vector<std::string>& response,
           WcsMode mode, const std::vector<int>& slots = {});

// --- bucket averaging -------------------------------------------------------

struct BucketMean {
  std::string key;
  int n = 0;
  double mean = 0;
};

// Chunks values into groups of `group_size` within each key (keys in first-
// appearance order, values in input order) and returns per-chunk means; a
// trailing partial chunk is averaged over its actual size.
std::vector<BucketMean> bucket_average(
    const std::vector<std::pair<std::string, double>>& keyed_values, int group_size);

// --- logistic calibration ---------------------------------------------------

struct CalibrationParams {
  double a = 0;
  double b = 0;
  double residual_rmse = 0;
  int iterations = 0;
  bool converged = false;
};

// f(x) = 1 / (1 + exp(a*x + b)), overflow-safe, strictly inside (0, 1).
double apply_logistic(double x, const CalibrationParams& p);

// Least-squares fit of f to (x, y) by Levenberg-Marquardt with the analytic
// Jacobian, multi-started from a in {-10, -1, 1, 10} with b = -a * median(x).
// Convergence: parameter step inf-norm < 1e-10 within 200 iterations.
// Requires >= 3 points (InputError), finite input (InputError), non-constant
// x (DegenerateInputError).
CalibrationParams fit_logistic(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

// --- correlation metrics ----------------------------------------------------

double rmse(const Eigen::ArrayXd& pred, const Eigen::ArrayXd& truth);

// Pearson product-moment correlation (the usual reading of "normalised
// cross-correlation" in intelligibility evaluation).
double ncc(const Eigen::ArrayXd& pred, const Eigen::ArrayXd& truth);

enum class TauVariant { b, a };

// Kendall rank correlation, tie-corrected tau-b by default (WCS values are
// heavily tied), O(n log n) via merge-sort inversion counting. tau-a is the
// uncorrected variant. Fully tied input on either side -> DegenerateInputError
// for tau-b.
double kendall_tau(const Eigen::ArrayXd& pred, const Eigen::ArrayXd& truth,
                   TauVariant variant = TauVariant::b);

// --- report -----------------------------------------------------------------

struct ScatterPoint {
  double x_raw = 0;
  double x_mapped = 0;
  double y_true = 0;
};

struct MeasureEval {
  std::string measure;
  CalibrationParams params;
  double rmse_value = 0;
  double ncc_value = 0;
  double kt_value = 0;
  int n = 0;
  std::vector<ScatterPoint> points;
};

void write_scatter_csv(const std::string& path, const std::vector<ScatterPoint>& points);

// Self-contained SVG: scatter points plus the fitted logistic curve.
std::string scatter_svg(const std::vector<ScatterPoint>& points, const CalibrationParams& params,
                        const std::string& title);

}  // namespace siu

#endif  // SIU_EVAL_HPP
