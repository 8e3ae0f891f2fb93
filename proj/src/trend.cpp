#include "fdreg/trend.hpp"

#include <cmath>
#include <stdexcept>

#include "fdreg/plsq.hpp"

namespace fdreg {

TrendDesign::TrendDesign(const TrendSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& train_index,
                         const std::string& block_name)
    : TrendDesign() {
    if (train_index.size() == 0)
        throw std::invalid_argument("TrendDesign: empty index");
    const double lo = train_index.minCoeff();
    const double hi = train_index.maxCoeff();
    if (!(lo < hi))
        throw RankDeficiencyError(
            "trend over a single index value cannot be identified (block " + block_name + ")",
            {block_name});

    std::vector<double> interior;
    if (!spec.explicit_knots.empty()) {
        for (double k : spec.explicit_knots)
            if (k > lo && k < hi) interior.push_back(k);
    } else if (spec.knot_spacing > 0.0) {
        for (double k = lo + spec.knot_spacing; k < hi; k += spec.knot_spacing)
            interior.push_back(k);
    }
    basis_ = SplineBasis::natural_cubic(std::move(interior), Interval(lo, hi));

    Eigen::MatrixXd n = basis_.eval(train_index, 0);
    center_ = sum_to_zero_transform(n.colwise().sum());
}

Eigen::MatrixXd TrendDesign::design(const Eigen::Ref<const Eigen::VectorXd>& index) const {
    return basis_.eval(index, 0) * center_;
}

Eigen::VectorXd TrendDesign::evaluate(const Eigen::Ref<const Eigen::VectorXd>& index,
                                      const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
    return design(index) * coeffs;
}

}  // namespace fdreg
