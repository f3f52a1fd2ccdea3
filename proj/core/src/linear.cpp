#include "incmeter/linear.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "incmeter/errors.hpp"

namespace incmeter {

namespace {

void check_shapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) {
        throw DimensionError("fit: X has " + std::to_string(x.rows()) +
                             " rows but y has " + std::to_string(y.size()));
    }
    if (x.rows() == 0) throw DimensionError("fit: empty design matrix");
}

struct Centered {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::RowVectorXd x_mean;
    double y_mean;
};

Centered center(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Centered c;
    c.x_mean = x.colwise().mean();
    c.y_mean = y.mean();
    c.x = x.rowwise() - c.x_mean;
    c.y = y.array() - c.y_mean;
    return c;
}

double intercept_for(const Centered& c, const Eigen::VectorXd& beta) {
    return c.y_mean - c.x_mean.dot(beta);
}

} // namespace

LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    check_shapes(x, y);
    Centered c = center(x, y);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c.x);
    LinearModel model;
    model.kind = LinearKind::Ols;
    model.coefficients = cod.solve(c.y);
    model.intercept = intercept_for(c, model.coefficients);
    // Centering removes the constant direction, so full rank is cols, or
    // cols-1 when a column was constant; flag only genuine collinearity.
    model.rank_deficient = cod.rank() < x.cols() && x.cols() > 0;
    if (model.rank_deficient) {
        // A constant column alone is not collinearity among predictors.
        Eigen::Index nonconstant = 0;
        for (Eigen::Index j = 0; j < c.x.cols(); ++j) {
            if (c.x.col(j).cwiseAbs().maxCoeff() > 0.0) ++nonconstant;
        }
        model.rank_deficient = cod.rank() < nonconstant;
    }
    return model;
}

LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha) {
    check_shapes(x, y);
    if (alpha < 0.0) throw std::invalid_argument("fit_ridge: alpha must be >= 0");
    Centered c = center(x, y);

    const Eigen::Index n = c.x.rows(), p = c.x.cols();
    LinearModel model;
    model.kind = LinearKind::Ridge;
    model.alpha = alpha;
    if (p <= n) {
        Eigen::MatrixXd gram = c.x.transpose() * c.x;
        gram.diagonal().array() += alpha;
        model.coefficients = gram.ldlt().solve(c.x.transpose() * c.y);
    } else {
        Eigen::MatrixXd gram = c.x * c.x.transpose();
        gram.diagonal().array() += alpha;
        model.coefficients = c.x.transpose() * gram.ldlt().solve(c.y);
    }
    model.intercept = intercept_for(c, model.coefficients);
    return model;
}

LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                      LassoInfo* info) {
    check_shapes(x, y);
    if (alpha < 0.0) throw std::invalid_argument("fit_lasso: alpha must be >= 0");
    Centered c = center(x, y);

    const Eigen::Index n = c.x.rows(), p = c.x.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::VectorXd col_scale(p); // ||x_j||^2 / n
    for (Eigen::Index j = 0; j < p; ++j) {
        col_scale(j) = c.x.col(j).squaredNorm() * inv_n;
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = c.y;
    constexpr double kTol = 1e-6;
    constexpr std::size_t kMaxSweeps = 1000;

    if (info) {
        info->objective_trace.clear();
        info->converged = false;
    }
    std::size_t sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (col_scale(j) == 0.0) continue;
            const double rho = c.x.col(j).dot(residual) * inv_n + col_scale(j) * beta(j);
            double updated = 0.0;
            if (rho > alpha) {
                updated = (rho - alpha) / col_scale(j);
            } else if (rho < -alpha) {
                updated = (rho + alpha) / col_scale(j);
            }
            const double change = updated - beta(j);
            if (change != 0.0) {
                residual -= c.x.col(j) * change;
                beta(j) = updated;
                max_change = std::max(max_change, std::abs(change));
            }
        }
        if (info) {
            info->objective_trace.push_back(0.5 * inv_n * residual.squaredNorm() +
                                            alpha * beta.lpNorm<1>());
        }
        if (max_change < kTol) {
            if (info) info->converged = true;
            ++sweep;
            break;
        }
    }
    if (info) info->sweeps = sweep;

    LinearModel model;
    model.kind = LinearKind::Lasso;
    model.alpha = alpha;
    model.coefficients = std::move(beta);
    model.intercept = intercept_for(c, model.coefficients);
    return model;
}

Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.coefficients.size()) {
        throw DimensionError("predict: X has " + std::to_string(x.cols()) +
                             " columns, model expects " +
                             std::to_string(model.coefficients.size()));
    }
    return (x * model.coefficients).array() + model.intercept;
}

} // namespace incmeter
