#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fdreg/basis.hpp"

namespace fdreg {

/// Long-term trend component s(i): a natural cubic spline over the
/// observation index with equispaced knots (e.g. one every 90 days).
struct TrendSpec {
    double knot_spacing = 0.0;           // > 0: interior knots every so many index units
    std::vector<double> explicit_knots;  // alternative: interior knots given directly

    static TrendSpec spacing(double s) { return TrendSpec{s, {}}; }
    static TrendSpec knots(std::vector<double> k) { return TrendSpec{0.0, std::move(k)}; }
};

/// Trend design built on training rows.  Columns are reparameterized to sum
/// to zero over the training index so the block never collides with an
/// intercept; natural-spline evaluation extends linearly beyond the training
/// range, so held-out indices outside it remain predictable.
class TrendDesign {
public:
    TrendDesign(const TrendSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& train_index,
                const std::string& block_name = "trend");

    Eigen::MatrixXd design(const Eigen::Ref<const Eigen::VectorXd>& index) const;
    int cols() const { return static_cast<int>(center_.cols()); }
    const SplineBasis& basis() const { return basis_; }

    /// Trend values s(index) for given centered-space coefficients.
    Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& index,
                             const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;

private:
    TrendDesign() : basis_(SplineBasis::equispaced(BasisKind::natural_cubic, 4, 0, Interval(0, 1))) {}
    SplineBasis basis_;
    Eigen::MatrixXd center_;  // dim x (dim-1) sum-to-zero transform
};

}  // namespace fdreg
