#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdreg/basis.hpp"

namespace fdreg {

/// Discrete measurements of one curve: strictly ascending times, one value each.
struct SampledSeries {
    Eigen::VectorXd times;
    Eigen::VectorXd values;
};

/// One curve represented by coefficients in a spline basis.
struct FunctionalDatum {
    SplineBasis basis;
    Eigen::VectorXd coeffs;
    std::optional<long> label;

    Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& points, int deriv = 0) const {
        return basis.eval(points, deriv) * coeffs;
    }
    double eval_at(double point, int deriv = 0) const {
        return basis.eval_at(point, deriv).dot(coeffs);
    }
};

enum class SmoothRule { fixed, gcv, loocv };

/// Penalized least-squares smoothing configuration.
///
/// `loocv` follows the knot-count selection rule: equispaced candidates are
/// refit at the configured lambda (0 by default) and the leave-one-out score
/// picks the count, ties resolving to fewer knots.  `gcv` keeps the knots of
/// `basis` and selects lambda over `log10_lambda_grid`.
struct SmoothConfig {
    SplineBasis basis;
    SmoothRule rule = SmoothRule::fixed;
    double lambda = 0.0;
    int penalty_deriv = 2;
    std::vector<int> candidate_knot_counts;
    std::vector<double> log10_lambda_grid;
};

struct SmoothDiagnostics {
    double lambda_used = 0.0;
    int knots_used = 0;
    double loocv_score = std::numeric_limits<double>::quiet_NaN();
    double edf = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

std::pair<FunctionalDatum, SmoothDiagnostics> smooth(const SampledSeries& series,
                                                     const SmoothConfig& cfg);

/// Smooth a set of curves with one shared basis and smoothing parameter,
/// selected by the pooled (mean) per-curve criterion.
std::vector<FunctionalDatum> smooth_batch(const std::vector<SampledSeries>& series_set,
                                          const SmoothConfig& cfg,
                                          SmoothDiagnostics* diagnostics = nullptr);

}  // namespace fdreg
