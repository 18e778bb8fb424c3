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

#pragma once

#include <Eigen/Dense>

namespace qconv {

/// Minimizes (1/N) ||X B - Y||_F^2 + alpha ||B||_F^2 for N samples in the
/// rows of X (N x d) and Y (N x m); returns B (d x m).
///
/// Solves (X^T X + N alpha I) B = X^T Y, or the equivalent dual system
/// B = X^T (X X^T + N alpha I)^{-1} Y when d > N and alpha > 0. Throws
/// ill-conditioned when the system is singular (alpha = 0 on rank-deficient
/// data) and invalid-parameter for alpha < 0 or empty inputs.
Eigen::MatrixXd solve_ridge(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                            double alpha);

} // namespace qconv
