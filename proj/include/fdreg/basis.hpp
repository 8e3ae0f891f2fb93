#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace fdreg {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_);
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

enum class BasisKind { bspline, natural_cubic };

/// A univariate spline basis system over a closed interval.
///
/// B-splines use a clamped knot vector (boundary knots replicated to order
/// multiplicity) and are evaluated by the de Boor recurrence.  Natural cubic
/// splines are represented as the null space of the boundary second-derivative
/// constraints inside the cubic B-spline space on the same knots; outside the
/// domain they continue linearly.
class SplineBasis {
public:
    static SplineBasis bspline(int order, std::vector<double> interior_knots, Interval domain);
    static SplineBasis natural_cubic(std::vector<double> interior_knots, Interval domain);
    /// Interior knots at lo + k*(hi-lo)/(n_interior+1), k = 1..n_interior.
    static SplineBasis equispaced(BasisKind kind, int order, int n_interior, Interval domain);

    BasisKind kind() const { return kind_; }
    int order() const { return order_; }
    int dim() const { return dim_; }
    const Interval& domain() const { return domain_; }
    const std::vector<double>& interior_knots() const { return interior_; }
    /// Segment boundaries for piecewise-polynomial integration:
    /// domain endpoints plus interior knots, ascending.
    std::vector<double> breakpoints() const;

    /// n_points x dim matrix of d^deriv B_j / ds^deriv at the given points.
    Eigen::MatrixXd eval(const Eigen::Ref<const Eigen::VectorXd>& points, int deriv = 0) const;
    Eigen::RowVectorXd eval_at(double point, int deriv = 0) const;

    bool operator==(const SplineBasis& o) const;
    bool operator!=(const SplineBasis& o) const { return !(*this == o); }

private:
    SplineBasis() = default;

    BasisKind kind_ = BasisKind::bspline;
    int order_ = 4;
    int dim_ = 0;
    Interval domain_{0.0, 1.0};
    std::vector<double> interior_;
    std::vector<double> knots_;     // full clamped knot vector of the underlying B-spline space
    Eigen::MatrixXd transform_;     // underlying_dim x dim; identity for plain B-splines

    Eigen::MatrixXd eval_underlying(const Eigen::Ref<const Eigen::VectorXd>& points, int deriv) const;
    friend Eigen::MatrixXd gram_entries(const SplineBasis&, const SplineBasis&,
                                        std::pair<int, int>, const Interval&);
};

/// Matrix of pairwise integrals entries[j,k] = \int B_left,j^(d1) B_right,k^(d2) ds
/// over the window (full domain overlap by default).
struct GramMatrix {
    SplineBasis left_basis;
    SplineBasis right_basis;
    Eigen::MatrixXd entries;
    std::pair<int, int> derivative_orders;
    Interval window;
};

GramMatrix gram(const SplineBasis& left, const SplineBasis& right,
                std::pair<int, int> derivs = {0, 0},
                std::optional<Interval> window = std::nullopt);

/// Roughness penalty: gram(basis, basis, (d, d)) over the full domain.
GramMatrix penalty(const SplineBasis& basis, int deriv_order = 2);

/// Gauss-Legendre nodes and weights on [-1, 1], exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fdreg
