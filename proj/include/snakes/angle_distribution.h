// Copyright 2026 Snakes Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNAKES_ANGLE_DISTRIBUTION_H
#define SNAKES_ANGLE_DISTRIBUTION_H

#include <functional>
#include <vector>

namespace snakes {

/// Density over the defect angle on a uniform grid spanning [-pi, pi].
/// Values between grid points are linearly interpolated.
struct AngleDistribution {
    std::vector<double> omega;
    std::vector<double> density;

    static AngleDistribution tabulate(const std::function<double(double)> &f, int points = 4097);

    double operator()(double w) const;
    /// Trapezoidal integral of the density times g over [lo, hi] on the grid.
    double integrate(double lo, double hi, const std::function<double(double)> &g = nullptr) const;
    double total() const {
        return integrate(omega.front(), omega.back());
    }
    /// Rescales to unit mass; throws std::invalid_argument on zero or
    /// non-finite mass.
    void normalize();
    void validate() const;
};

/// Uniform grid of the given (odd) size on [-pi, pi].
std::vector<double> symmetric_angle_grid(int points = 4097);

}  // namespace snakes

#endif
