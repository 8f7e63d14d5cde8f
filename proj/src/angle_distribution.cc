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

#include "snakes/angle_distribution.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snakes {

std::vector<double> symmetric_angle_grid(int points) {
    if (points < 3 || points % 2 == 0) {
        throw std::invalid_argument("Angle grids need an odd number of points (at least 3).");
    }
    std::vector<double> out(points);
    for (int k = 0; k < points; k++) {
        out[k] = -std::numbers::pi + 2 * std::numbers::pi * k / (points - 1);
    }
    out[(points - 1) / 2] = 0.0;
    return out;
}

AngleDistribution AngleDistribution::tabulate(const std::function<double(double)> &f, int points) {
    AngleDistribution out;
    out.omega = symmetric_angle_grid(points);
    out.density.reserve(points);
    for (double w : out.omega) {
        out.density.push_back(f(w));
    }
    return out;
}

double AngleDistribution::operator()(double w) const {
    if (w <= omega.front()) {
        return w < omega.front() ? 0.0 : density.front();
    }
    if (w >= omega.back()) {
        return w > omega.back() ? 0.0 : density.back();
    }
    size_t k = std::upper_bound(omega.begin(), omega.end(), w) - omega.begin();
    double t = (w - omega[k - 1]) / (omega[k] - omega[k - 1]);
    return density[k - 1] * (1 - t) + density[k] * t;
}

double AngleDistribution::integrate(double lo, double hi, const std::function<double(double)> &g) const {
    if (hi <= lo) {
        return 0.0;
    }
    auto f = [&](double w) { return (*this)(w) * (g ? g(w) : 1.0); };
    std::vector<double> nodes = {lo};
    for (double w : omega) {
        if (w > lo && w < hi) {
            nodes.push_back(w);
        }
    }
    nodes.push_back(hi);
    double sum = 0;
    for (size_t k = 1; k < nodes.size(); k++) {
        sum += 0.5 * (f(nodes[k - 1]) + f(nodes[k])) * (nodes[k] - nodes[k - 1]);
    }
    return sum;
}

void AngleDistribution::normalize() {
    double mass = total();
    if (!(mass > 0) || !std::isfinite(mass)) {
        throw std::invalid_argument("Angle density has no finite positive mass.");
    }
    for (double &v : density) {
        v /= mass;
    }
}

void AngleDistribution::validate() const {
    if (omega.size() != density.size() || omega.size() < 3) {
        throw std::invalid_argument("Angle distribution grid and density sizes differ.");
    }
    for (double v : density) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw std::invalid_argument("Angle density must be finite and non-negative.");
        }
    }
}

}  // namespace snakes
