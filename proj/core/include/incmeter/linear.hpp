#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace incmeter {

enum class LinearKind { Ols, Ridge, Lasso };

struct LinearModel {
    LinearKind kind = LinearKind::Ols;
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    std::optional<double> alpha;
    bool rank_deficient = false; // OLS diagnostic
};

/// Ordinary least squares via a rank-revealing (complete orthogonal)
/// decomposition; rank-deficient systems get the minimum-norm solution and
/// the rank_deficient diagnostic. The intercept is fitted by centering.
LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Ridge: (X'X + alpha I) beta = X'y on centered data, intercept
/// unpenalized. For wide matrices the equivalent dual form
/// beta = X'(XX' + alpha I)^-1 y is used.
LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha);

struct LassoInfo {
    std::size_t sweeps = 0;
    bool converged = false;
    std::vector<double> objective_trace; // objective after each sweep
};

/// Lasso by coordinate descent on (1/2n)||y - Xb||^2 + alpha*||b||_1 with
/// unpenalized intercept (centering). Stops when the largest coefficient
/// change in a sweep is below 1e-6, or after 1000 sweeps.
LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                      LassoInfo* info = nullptr);

Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& x);

} // namespace incmeter
