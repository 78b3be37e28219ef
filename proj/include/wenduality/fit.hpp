// Copyright 2026 The wenduality Authors
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
#include <algorithm>
#include <cmath>
#include <vector>

#include "wenduality/errors.hpp"

namespace wenduality {

/// log y = intercept + slope * log x by least squares.
struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;  // in log y
    double max_residual = 0.0;
    std::vector<double> residuals;
};

inline PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("x and y differ in length");
    if (x.size() < 2) throw InvalidSpec("a power-law fit needs at least two points");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)], yi = y[static_cast<std::size_t>(i)];
        if (!(xi > 0.0) || !(yi > 0.0)) throw InvalidSpec("power-law fit needs positive data");
        A(i, 0) = 1.0;
        A(i, 1) = std::log(xi);
        b(i) = std::log(yi);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    PowerLawFit f;
    f.intercept = c(0);
    f.slope = c(1);
    const Eigen::VectorXd r = b - A * c;
    f.residuals.assign(r.data(), r.data() + r.size());
    f.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));
    f.max_residual = r.cwiseAbs().maxCoeff();
    return f;
}

}  // namespace wenduality
