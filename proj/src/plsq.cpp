#include "fdreg/plsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fdreg {

Eigen::MatrixXd assemble_penalty(int dim,
                                 const std::vector<std::pair<double, const PenaltyTerm*>>& terms) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [lambda, term] : terms) {
        if (lambda == 0.0) continue;
        const int k = static_cast<int>(term->matrix.rows());
        d.block(term->offset, term->offset, k, k) += lambda * term->matrix;
    }
    return d;
}

namespace {

void finish(const PlsqProblem& p, const Eigen::MatrixXd& penalty,
            const Eigen::LDLT<Eigen::MatrixXd>& ldlt, PlsqSolution& out) {
    out.theta = ldlt.solve(p.Ztw);
    double rss = p.wtw - 2.0 * out.theta.dot(p.Ztw) + out.theta.dot(p.ZtZ * out.theta);
    out.rss = std::max(rss, 0.0);
    // edf = tr(A^-1 Z'Z) = dim - tr(A^-1 D); D is block-sparse so solve only
    // against its nonzero columns.
    const int dim = static_cast<int>(p.ZtZ.rows());
    double tr = 0.0;
    if (penalty.size() > 0 && penalty.cwiseAbs().sum() > 0.0) {
        Eigen::MatrixXd x = ldlt.solve(penalty);
        tr = x.trace();
    }
    out.edf = dim - tr;
    const double denom = p.n_obs - out.edf;
    out.gcv = denom > 1e-9 ? p.n_obs * out.rss / (denom * denom)
                           : std::numeric_limits<double>::infinity();
}

}  // namespace

bool solve_plsq_fast(const PlsqProblem& p, const Eigen::MatrixXd& penalty, PlsqSolution& out) {
    Eigen::MatrixXd a = p.ZtZ + penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) return false;
    finish(p, penalty, ldlt, out);
    if (!out.theta.allFinite()) return false;
    // Reject solutions of inconsistent/singular systems.
    double resid = (a * out.theta - p.Ztw).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, p.Ztw.cwiseAbs().maxCoeff());
    return resid <= 1e-6 * scale;
}

PlsqSolution solve_plsq(const PlsqProblem& p, const Eigen::MatrixXd& penalty, double rank_tol) {
    Eigen::MatrixXd a = p.ZtZ + penalty;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& ev = es.eigenvalues();
    const double max_ev = std::max(ev.maxCoeff(), 0.0);
    const double floor_ev = rank_tol * std::max(max_ev, 1.0);

    if (ev.minCoeff() < floor_ev) {
        // Attribute the null direction to design blocks by coefficient mass.
        Eigen::VectorXd null_vec = es.eigenvectors().col(0);
        std::vector<std::string> blamed;
        for (const auto& b : p.blocks) {
            double mass = null_vec.segment(b.offset, b.size).norm();
            if (mass > 0.1) blamed.push_back(b.name);
        }
        if (blamed.empty()) blamed.push_back("(unattributed)");
        std::ostringstream msg;
        msg << "rank-deficient penalized system (min eigenvalue " << ev.minCoeff()
            << "); unidentifiable direction in block(s):";
        for (const auto& b : blamed) msg << " " << b;
        throw RankDeficiencyError(msg.str(), blamed);
    }

    PlsqSolution out;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    finish(p, penalty, ldlt, out);
    return out;
}

Eigen::MatrixXd sum_to_zero_transform(const Eigen::RowVectorXd& column_sums) {
    const int m = static_cast<int>(column_sums.size());
    if (m < 2)
        throw std::invalid_argument("sum_to_zero_transform: need at least two columns");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(column_sums.transpose());
    Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(m - 1);
}

}  // namespace fdreg
