#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdreg {

/// Thrown when a (penalized) normal-equations system is singular; `blocks`
/// names the design blocks carrying the unidentifiable direction.
struct RankDeficiencyError : std::runtime_error {
    std::vector<std::string> blocks;
    RankDeficiencyError(const std::string& msg, std::vector<std::string> blocks_)
        : std::runtime_error(msg), blocks(std::move(blocks_)) {}
};

/// Named column range of a stacked design matrix.
struct BlockSpec {
    std::string name;
    int offset;
    int size;
};

/// One quadratic penalty placed on a sub-block of the coefficient vector.
struct PenaltyTerm {
    int offset;
    Eigen::MatrixXd matrix;
};

/// Normal-equations form of a penalized least squares problem
/// min ||w - Z theta||^2 + sum_k lambda_k theta' D_k theta.
struct PlsqProblem {
    Eigen::MatrixXd ZtZ;
    Eigen::VectorXd Ztw;
    double wtw = 0.0;
    long n_obs = 0;
    std::vector<BlockSpec> blocks;
};

struct PlsqSolution {
    Eigen::VectorXd theta;
    double rss = 0.0;
    double edf = 0.0;
    double gcv = 0.0;
};

/// Embed penalty terms into a full-size matrix.
Eigen::MatrixXd assemble_penalty(int dim, const std::vector<std::pair<double, const PenaltyTerm*>>& terms);

/// Solve by LDLT; no identifiability check (selection loops use this).
/// Returns false when the factorization is unusable.
bool solve_plsq_fast(const PlsqProblem& p, const Eigen::MatrixXd& penalty, PlsqSolution& out);

/// Solve with a spectral identifiability check; throws RankDeficiencyError
/// naming the blocks where a null direction lives.
PlsqSolution solve_plsq(const PlsqProblem& p, const Eigen::MatrixXd& penalty,
                        double rank_tol = 1e-10);

/// Sum-to-zero reparameterization: columns of the returned dim x (dim-1)
/// matrix span the null space of the given column-sum row vector.
Eigen::MatrixXd sum_to_zero_transform(const Eigen::RowVectorXd& column_sums);

}  // namespace fdreg
