#include "fdreg/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_series(const SampledSeries& s, const SplineBasis& basis) {
    if (s.times.size() == 0) throw std::invalid_argument("smooth: empty series");
    if (s.times.size() != s.values.size())
        throw std::invalid_argument("smooth: times and values differ in length");
    for (Eigen::Index i = 1; i < s.times.size(); ++i)
        if (!(s.times[i] > s.times[i - 1]))
            throw std::invalid_argument("smooth: times must be strictly ascending");
    if (!basis.domain().contains(s.times[0]) || !basis.domain().contains(s.times[s.times.size() - 1]))
        throw std::invalid_argument("smooth: series times outside the basis domain");
}

// One basis + lambda fitted to possibly many value columns sharing the same
// times; exposes the hat diagonal so LOO/GCV scores come out of one solve.
struct SmoothSolve {
    Eigen::MatrixXd coeffs;    // dim x n_series
    Eigen::VectorXd hat_diag;  // n_obs
    double edf = 0.0;
    bool ok = false;
};

SmoothSolve solve_smooth(const Eigen::VectorXd& times, const Eigen::MatrixXd& values,
                         const SplineBasis& basis, double lambda, int penalty_deriv) {
    SmoothSolve out;
    Eigen::MatrixXd phi = basis.eval(times, 0);
    Eigen::MatrixXd a = phi.transpose() * phi;
    if (lambda != 0.0) a += lambda * penalty(basis, penalty_deriv).entries;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < 1e-10 * std::max(1.0, ev.maxCoeff())) return out;  // singular

    Eigen::MatrixXd ainv_phit = es.eigenvectors() *
                                ev.cwiseInverse().asDiagonal() *
                                (phi * es.eigenvectors()).transpose();
    out.coeffs = ainv_phit * values;
    out.hat_diag.resize(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i)
        out.hat_diag[i] = phi.row(i).dot(ainv_phit.col(i));
    out.edf = out.hat_diag.sum();
    out.ok = true;
    return out;
}

// Mean over series of the hat-trick leave-one-out score
// (1/n) sum_i (r_i / (1 - h_ii))^2.
double loocv_score(const Eigen::VectorXd& times, const Eigen::MatrixXd& values,
                   const SplineBasis& basis, const SmoothSolve& s) {
    if (!s.ok) return kInf;
    Eigen::MatrixXd phi = basis.eval(times, 0);
    Eigen::MatrixXd resid = values - phi * s.coeffs;
    const Eigen::Index n = times.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double denom = 1.0 - s.hat_diag[i];
        if (denom < 1e-12) return kInf;
        total += resid.row(i).squaredNorm() / (denom * denom);
    }
    return total / (n * values.cols());
}

double gcv_score(const Eigen::VectorXd& times, const Eigen::MatrixXd& values,
                 const SplineBasis& basis, const SmoothSolve& s) {
    if (!s.ok) return kInf;
    Eigen::MatrixXd phi = basis.eval(times, 0);
    const double n = static_cast<double>(times.size());
    double denom = n - s.edf;
    if (denom < 1e-9) return kInf;
    double total = 0.0;
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        double rss = (values.col(c) - phi * s.coeffs.col(c)).squaredNorm();
        total += n * rss / (denom * denom);
    }
    return total / values.cols();
}

SplineBasis with_knot_count(const SplineBasis& tmpl, int n_interior) {
    return SplineBasis::equispaced(tmpl.kind(), tmpl.order(), n_interior, tmpl.domain());
}

// Selection + final solve shared by smooth() and smooth_batch() for series
// on one common time grid.
struct SharedFit {
    SplineBasis basis;
    SmoothSolve solve;
    SmoothDiagnostics diag;
};

SharedFit fit_shared(const Eigen::VectorXd& times, const Eigen::MatrixXd& values,
                     const SmoothConfig& cfg) {
    SharedFit out{cfg.basis, {}, {}};
    double lambda = cfg.lambda;

    switch (cfg.rule) {
        case SmoothRule::fixed:
            break;
        case SmoothRule::loocv: {
            if (cfg.candidate_knot_counts.empty())
                throw std::invalid_argument("smooth: loocv rule needs candidate_knot_counts");
            auto counts = cfg.candidate_knot_counts;
            std::sort(counts.begin(), counts.end());
            double best = kInf;
            int best_count = -1;
            for (int k : counts) {
                SplineBasis cand = with_knot_count(cfg.basis, k);
                SmoothSolve s = solve_smooth(times, values, cand, lambda, cfg.penalty_deriv);
                double score = loocv_score(times, values, cand, s);
                if (score < best) {  // ties keep the earlier, smaller count
                    best = score;
                    best_count = k;
                }
            }
            if (best_count < 0)
                throw std::runtime_error("smooth: no candidate knot count gives an identifiable fit");
            out.basis = with_knot_count(cfg.basis, best_count);
            out.diag.loocv_score = best;
            break;
        }
        case SmoothRule::gcv: {
            if (cfg.log10_lambda_grid.empty())
                throw std::invalid_argument("smooth: gcv rule needs log10_lambda_grid");
            double best = kInf;
            for (double lg : cfg.log10_lambda_grid) {
                double cand = std::pow(10.0, lg);
                SmoothSolve s = solve_smooth(times, values, cfg.basis, cand, cfg.penalty_deriv);
                double score = gcv_score(times, values, cfg.basis, s);
                if (score < best) {
                    best = score;
                    lambda = cand;
                }
            }
            if (!std::isfinite(best))
                throw std::runtime_error("smooth: GCV failed at every grid lambda");
            break;
        }
    }

    out.solve = solve_smooth(times, values, out.basis, lambda, cfg.penalty_deriv);
    if (!out.solve.ok)
        throw std::runtime_error("smooth: singular normal equations (lambda = " +
                                 std::to_string(lambda) + ", dim = " +
                                 std::to_string(out.basis.dim()) + ", n = " +
                                 std::to_string(times.size()) + ")");
    out.diag.lambda_used = lambda;
    out.diag.knots_used = static_cast<int>(out.basis.interior_knots().size());
    out.diag.edf = out.solve.edf;
    if (!std::isfinite(out.diag.loocv_score))
        out.diag.loocv_score = loocv_score(times, values, out.basis, out.solve);
    if (times.size() < out.basis.dim())
        out.diag.warnings.push_back("series shorter than basis dimension; fit is not identifiable "
                                    "without a positive lambda");
    return out;
}

}  // namespace

std::pair<FunctionalDatum, SmoothDiagnostics> smooth(const SampledSeries& series,
                                                     const SmoothConfig& cfg) {
    validate_series(series, cfg.basis);
    SharedFit fit = fit_shared(series.times, series.values, cfg);
    return {FunctionalDatum{fit.basis, fit.solve.coeffs.col(0), std::nullopt}, fit.diag};
}

std::vector<FunctionalDatum> smooth_batch(const std::vector<SampledSeries>& series_set,
                                          const SmoothConfig& cfg, SmoothDiagnostics* diagnostics) {
    if (series_set.empty()) throw std::invalid_argument("smooth_batch: empty series set");
    for (const auto& s : series_set) validate_series(s, cfg.basis);

    const bool shared_times = std::all_of(series_set.begin(), series_set.end(),
                                          [&](const SampledSeries& s) {
                                              return s.times.size() == series_set[0].times.size() &&
                                                     s.times.isApprox(series_set[0].times, 0.0);
                                          });
    std::vector<FunctionalDatum> out;
    out.reserve(series_set.size());

    if (shared_times) {
        Eigen::MatrixXd values(series_set[0].times.size(), series_set.size());
        for (size_t c = 0; c < series_set.size(); ++c) values.col(c) = series_set[c].values;
        SharedFit fit = fit_shared(series_set[0].times, values, cfg);
        for (size_t c = 0; c < series_set.size(); ++c)
            out.push_back(FunctionalDatum{fit.basis, fit.solve.coeffs.col(c), std::nullopt});
        if (diagnostics) *diagnostics = fit.diag;
        return out;
    }

    // Irregular times: pool the per-curve criterion over the shared candidate,
    // then fit each curve at the pooled choice.
    SmoothConfig chosen = cfg;
    chosen.rule = SmoothRule::fixed;
    chosen.lambda = cfg.lambda;

    if (cfg.rule == SmoothRule::loocv) {
        auto counts = cfg.candidate_knot_counts;
        if (counts.empty())
            throw std::invalid_argument("smooth_batch: loocv rule needs candidate_knot_counts");
        std::sort(counts.begin(), counts.end());
        double best = kInf;
        int best_count = -1;
        for (int k : counts) {
            SplineBasis cand = with_knot_count(cfg.basis, k);
            double pooled = 0.0;
            for (const auto& s : series_set) {
                SmoothSolve ss = solve_smooth(s.times, s.values, cand, cfg.lambda, cfg.penalty_deriv);
                pooled += loocv_score(s.times, s.values, cand, ss);
            }
            pooled /= series_set.size();
            if (pooled < best) {
                best = pooled;
                best_count = k;
            }
        }
        if (best_count < 0)
            throw std::runtime_error("smooth_batch: no candidate knot count fits every series");
        chosen.basis = with_knot_count(cfg.basis, best_count);
    } else if (cfg.rule == SmoothRule::gcv) {
        if (cfg.log10_lambda_grid.empty())
            throw std::invalid_argument("smooth_batch: gcv rule needs log10_lambda_grid");
        double best = kInf;
        double best_lambda = cfg.lambda;
        for (double lg : cfg.log10_lambda_grid) {
            double cand = std::pow(10.0, lg);
            double pooled = 0.0;
            for (const auto& s : series_set) {
                SmoothSolve ss = solve_smooth(s.times, s.values, cfg.basis, cand, cfg.penalty_deriv);
                pooled += gcv_score(s.times, s.values, cfg.basis, ss);
            }
            pooled /= series_set.size();
            if (pooled < best) {
                best = pooled;
                best_lambda = cand;
            }
        }
        chosen.lambda = best_lambda;
    }

    SmoothDiagnostics last;
    for (const auto& s : series_set) {
        auto [fd, diag] = smooth(s, chosen);
        last = diag;
        out.push_back(std::move(fd));
    }
    if (diagnostics) *diagnostics = last;
    return out;
}

}  // namespace fdreg
