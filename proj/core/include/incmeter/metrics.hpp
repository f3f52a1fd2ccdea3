#pragma once

#include <Eigen/Core>

#include <cmath>

#include "incmeter/errors.hpp"

namespace incmeter {

/// Mean absolute error. Lengths must match and be non-zero.
inline double mae(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw DimensionError("mae: length mismatch");
    }
    if (y_true.size() == 0) {
        throw DimensionError("mae: empty input");
    }
    return (y_true - y_pred).cwiseAbs().mean();
}

} // namespace incmeter
