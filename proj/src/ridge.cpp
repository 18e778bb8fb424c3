// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconv/ridge.hpp"

#include <cmath>

#include "qconv/error.hpp"

namespace qconv {

namespace {

// Reciprocal condition estimate (and smallest-to-largest pivot ratio) below
// which the normal equations are treated as singular.
constexpr double kMinRcond = 1e-13;

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    const Eigen::VectorXd pivots = ldlt.vectorD();
    const double largest = pivots.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > kMinRcond) ||
        !(pivots.minCoeff() > kMinRcond * largest)) {
        fail(ErrorKind::IllConditioned,
             "ridge system is singular or ill-conditioned; use alpha > 0");
    }
    return ldlt.solve(b);
}

} // namespace

Eigen::MatrixXd solve_ridge(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                            double alpha) {
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
    require(x.rows() >= 1 && x.cols() >= 1, "ridge needs at least one sample");
    require(x.rows() == y.rows(), "feature and target sample counts differ");
    const auto samples = static_cast<double>(x.rows());
    const double shift = samples * alpha;

    if (x.cols() > x.rows() && alpha > 0.0) {
        Eigen::MatrixXd gram = x * x.transpose();
        gram.diagonal().array() += shift;
        return x.transpose() * solve_spd(gram, y);
    }
    Eigen::MatrixXd normal = x.transpose() * x;
    normal.diagonal().array() += shift;
    return solve_spd(normal, x.transpose() * y);
}

} // namespace qconv
