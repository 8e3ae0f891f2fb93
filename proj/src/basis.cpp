#include "fdreg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdreg {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi))
        throw std::invalid_argument("Interval: lo must be strictly below hi, got [" +
                                    std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

namespace {

void check_interior(const std::vector<double>& interior, const Interval& domain) {
    double prev = domain.lo;
    for (double k : interior) {
        if (!(k > prev))
            throw std::invalid_argument("SplineBasis: interior knots must be strictly ascending "
                                        "and strictly inside the domain");
        prev = k;
    }
    if (!interior.empty() && !(interior.back() < domain.hi))
        throw std::invalid_argument("SplineBasis: interior knots must lie strictly below domain.hi");
}

std::vector<double> clamped_knots(int order, const std::vector<double>& interior, const Interval& d) {
    std::vector<double> knots;
    knots.reserve(interior.size() + 2 * order);
    knots.insert(knots.end(), order, d.lo);
    knots.insert(knots.end(), interior.begin(), interior.end());
    knots.insert(knots.end(), order, d.hi);
    return knots;
}

// Nonzero B-spline values (and derivatives) at x: the `order` functions with
// indices span..span+order-1, where span is the index of the first of them.
// Standard triangular recurrence with the derivative extension (The NURBS Book
// algorithm A2.3, zero-guarded for clamped ends).
void deboor_nonzero(double x, int order, const std::vector<double>& knots, int deriv,
                    int& span, Eigen::VectorXd& out) {
    const int n_knots = static_cast<int>(knots.size());
    const int n_basis = n_knots - order;
    // Knot span i with knots[i] <= x < knots[i+1], clamped to valid range.
    int i = static_cast<int>(std::upper_bound(knots.begin() + (order - 1),
                                              knots.end() - order, x) -
                             knots.begin()) - 1;
    i = std::clamp(i, order - 1, n_basis - 1);
    span = i - order + 1;

    std::vector<double> left(order), right(order);
    std::vector<std::vector<double>> ndu(order, std::vector<double>(order));
    ndu[0][0] = 1.0;
    for (int j = 1; j < order; ++j) {
        left[j] = x - knots[i + 1 - j];
        right[j] = knots[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double temp = ndu[j][r] == 0.0 ? 0.0 : ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    out.resize(order);
    if (deriv == 0) {
        for (int j = 0; j < order; ++j) out[j] = ndu[j][order - 1];
        return;
    }
    if (deriv >= order) {
        out.setZero();
        return;
    }

    std::vector<std::vector<double>> a(2, std::vector<double>(order));
    for (int r = 0; r < order; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        double value = 0.0;
        for (int k = 1; k <= deriv; ++k) {
            value = 0.0;
            int rk = r - k, pk = order - 1 - k;
            if (r >= k) {
                double den = ndu[pk + 1][rk];
                a[s2][0] = den == 0.0 ? 0.0 : a[s1][0] / den;
                value = a[s2][0] * ndu[rk][pk];
            }
            int j1 = rk >= -1 ? 1 : -rk;
            int j2 = r - 1 <= pk ? k - 1 : order - 1 - r;
            for (int j = j1; j <= j2; ++j) {
                double den = ndu[pk + 1][rk + j];
                a[s2][j] = den == 0.0 ? 0.0 : (a[s1][j] - a[s1][j - 1]) / den;
                value += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                double den = ndu[pk + 1][r];
                a[s2][k] = den == 0.0 ? 0.0 : -a[s1][k - 1] / den;
                value += a[s2][k] * ndu[r][pk];
            }
            std::swap(s1, s2);
        }
        out[r] = value;
    }
    double factor = static_cast<double>(order - 1);
    for (int k = 2; k <= deriv; ++k) factor *= static_cast<double>(order - k);
    out *= factor;
}

}  // namespace

SplineBasis SplineBasis::bspline(int order, std::vector<double> interior, Interval domain) {
    if (order < 1) throw std::invalid_argument("SplineBasis: order must be >= 1");
    check_interior(interior, domain);
    SplineBasis b;
    b.kind_ = BasisKind::bspline;
    b.order_ = order;
    b.domain_ = domain;
    b.interior_ = std::move(interior);
    b.knots_ = clamped_knots(order, b.interior_, domain);
    b.dim_ = static_cast<int>(b.interior_.size()) + order;
    b.transform_ = Eigen::MatrixXd::Identity(b.dim_, b.dim_);
    return b;
}

SplineBasis SplineBasis::natural_cubic(std::vector<double> interior, Interval domain) {
    check_interior(interior, domain);
    SplineBasis b;
    b.kind_ = BasisKind::natural_cubic;
    b.order_ = 4;
    b.domain_ = domain;
    b.interior_ = std::move(interior);
    b.knots_ = clamped_knots(4, b.interior_, domain);
    const int udim = static_cast<int>(b.interior_.size()) + 4;
    b.dim_ = udim - 2;

    // Null space of the two boundary constraints B''(lo) = B''(hi) = 0.
    b.transform_ = Eigen::MatrixXd::Identity(udim, udim);  // placeholder so eval_underlying works
    Eigen::VectorXd ends(2);
    ends << domain.lo, domain.hi;
    Eigen::MatrixXd constraints = b.eval_underlying(ends, 2);  // 2 x udim
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints.transpose());
    Eigen::MatrixXd q = qr.householderQ();
    b.transform_ = q.rightCols(udim - 2);
    return b;
}

SplineBasis SplineBasis::equispaced(BasisKind kind, int order, int n_interior, Interval domain) {
    if (n_interior < 0) throw std::invalid_argument("SplineBasis: n_interior must be >= 0");
    std::vector<double> interior(n_interior);
    const double gap = domain.length() / (n_interior + 1);
    for (int k = 1; k <= n_interior; ++k) interior[k - 1] = domain.lo + k * gap;
    return kind == BasisKind::bspline ? bspline(order, std::move(interior), domain)
                                      : natural_cubic(std::move(interior), domain);
}

std::vector<double> SplineBasis::breakpoints() const {
    std::vector<double> b;
    b.reserve(interior_.size() + 2);
    b.push_back(domain_.lo);
    b.insert(b.end(), interior_.begin(), interior_.end());
    b.push_back(domain_.hi);
    return b;
}

Eigen::MatrixXd SplineBasis::eval_underlying(const Eigen::Ref<const Eigen::VectorXd>& points,
                                             int deriv) const {
    const int udim = static_cast<int>(knots_.size()) - order_;
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(points.size(), udim);
    Eigen::VectorXd vals;
    int span = 0;
    for (Eigen::Index p = 0; p < points.size(); ++p) {
        deboor_nonzero(points[p], order_, knots_, deriv, span, vals);
        phi.row(p).segment(span, order_) = vals;
    }
    return phi;
}

Eigen::MatrixXd SplineBasis::eval(const Eigen::Ref<const Eigen::VectorXd>& points, int deriv) const {
    if (deriv < 0) throw std::invalid_argument("eval: derivative order must be >= 0");
    if (deriv >= order_)
        throw std::invalid_argument("eval: derivative order " + std::to_string(deriv) +
                                    " too high for order-" + std::to_string(order_) + " basis");
    if (kind_ == BasisKind::bspline) {
        for (Eigen::Index p = 0; p < points.size(); ++p)
            if (!domain_.contains(points[p]))
                throw std::invalid_argument("eval: point " + std::to_string(points[p]) +
                                            " outside basis domain [" + std::to_string(domain_.lo) +
                                            ", " + std::to_string(domain_.hi) + "]");
        return eval_underlying(points, deriv) * transform_;
    }

    // Natural cubic: linear continuation beyond the boundary knots.
    Eigen::MatrixXd out(points.size(), dim_);
    Eigen::VectorXd one(1);
    for (Eigen::Index p = 0; p < points.size(); ++p) {
        double x = points[p];
        if (domain_.contains(x)) {
            one[0] = x;
            out.row(p) = eval_underlying(one, deriv) * transform_;
        } else {
            double edge = x < domain_.lo ? domain_.lo : domain_.hi;
            one[0] = edge;
            if (deriv == 0) {
                Eigen::RowVectorXd v = eval_underlying(one, 0) * transform_;
                Eigen::RowVectorXd d = eval_underlying(one, 1) * transform_;
                out.row(p) = v + (x - edge) * d;
            } else if (deriv == 1) {
                out.row(p) = eval_underlying(one, 1) * transform_;
            } else {
                out.row(p).setZero();
            }
        }
    }
    return out;
}

Eigen::RowVectorXd SplineBasis::eval_at(double point, int deriv) const {
    Eigen::VectorXd one(1);
    one[0] = point;
    return eval(one, deriv).row(0);
}

bool SplineBasis::operator==(const SplineBasis& o) const {
    return kind_ == o.kind_ && order_ == o.order_ && domain_ == o.domain_ &&
           interior_ == o.interior_;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton refinement of the Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

Eigen::MatrixXd gram_entries(const SplineBasis& left, const SplineBasis& right,
                             std::pair<int, int> derivs, const Interval& window) {
    // Segment boundaries: knots of both bases inside the window plus its endpoints.
    std::vector<double> cuts{window.lo, window.hi};
    for (const SplineBasis* b : {&left, &right})
        for (double k : b->breakpoints())
            if (k > window.lo && k < window.hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const int n_nodes = (left.order() + right.order() + 1) / 2;
    std::vector<double> gx, gw;
    gauss_legendre(n_nodes, gx, gw);

    const int udl = static_cast<int>(left.knots_.size()) - left.order();
    const int udr = static_cast<int>(right.knots_.size()) - right.order();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(udl, udr);
    Eigen::VectorXd pts(n_nodes);
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        if (half <= 0.0) continue;
        for (int g = 0; g < n_nodes; ++g) pts[g] = mid + half * gx[g];
        Eigen::MatrixXd phil = left.eval_underlying(pts, derivs.first);
        Eigen::MatrixXd phir = right.eval_underlying(pts, derivs.second);
        for (int g = 0; g < n_nodes; ++g)
            acc.noalias() += (half * gw[g]) * phil.row(g).transpose() * phir.row(g);
    }
    return left.transform_.transpose() * acc * right.transform_;
}

GramMatrix gram(const SplineBasis& left, const SplineBasis& right,
                std::pair<int, int> derivs, std::optional<Interval> window) {
    if (derivs.first < 0 || derivs.second < 0)
        throw std::invalid_argument("gram: derivative orders must be >= 0");
    if (derivs.first >= left.order() || derivs.second >= right.order())
        throw std::invalid_argument("gram: derivative order too high for basis order");

    const double lo = std::max(left.domain().lo, right.domain().lo);
    const double hi = std::min(left.domain().hi, right.domain().hi);
    if (!(lo < hi)) throw std::invalid_argument("gram: basis domains do not overlap");
    Interval w = window.value_or(Interval(lo, hi));
    if (!(w.lo >= lo - 1e-12 && w.hi <= hi + 1e-12))
        throw std::invalid_argument("gram: window exceeds the domain overlap");

    return GramMatrix{left, right, gram_entries(left, right, derivs, w), derivs, w};
}

GramMatrix penalty(const SplineBasis& basis, int deriv_order) {
    if (deriv_order >= basis.order())
        throw std::invalid_argument("penalty: derivative order must be below the basis order");
    return gram(basis, basis, {deriv_order, deriv_order});
}

}  // namespace fdreg
