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

#ifndef SNAKES_DEPHASING_H
#define SNAKES_DEPHASING_H

#include <cstdint>
#include <string>
#include <vector>

namespace snakes {

struct OUParams {
    /// Spatial correlation length (m).
    double corr_length = 100e-9;
    /// Correlation time (s).
    double corr_time = 20e-6;
    /// Field variance at coincident points; sqrt(2) / corr_time by default.
    double variance_scale = 1.4142135623730951 / 20e-6;
    /// Phase accumulated per unit field and time.  Calibrated so that a
    /// 10 um LD shuttle at 10 m/s has an infidelity of 5e-3.
    double coupling = 2676.5;

    void validate() const;
};

enum class Encoding { kLD, kST };

const char *encoding_name(Encoding e);

struct ShuttleTrajectory {
    double length = 10e-6;
    double speed = 10.0;
    /// Electron separation of the ST pair (m); unused for LD.
    double separation = 0.0;
    Encoding encoding = Encoding::kLD;

    double duration() const {
        return length / speed;
    }
    void validate() const;
};

struct DephasingResult {
    double W = 1;
    double infidelity = 0;
    double variance = 0;
    /// Quadrature error estimate on the variance.
    double error = 0;
};

double covariance(double x1, double t1, double x2, double t2, const OUParams &params);

/// Covariance of the accumulated field at time lag u >= 0 along the
/// trajectory (difference field for ST).
double lag_kernel(double u, const ShuttleTrajectory &traj, const OUParams &params);

/// Var[phi] by adaptive Gauss-Kronrod quadrature (15, 31 or 61 points).
DephasingResult phase_variance(const ShuttleTrajectory &traj, const OUParams &params, int gk_points = 61);

struct OracleResult {
    double W = 1;
    double W_se = 0;
    double ci_lo = 1;
    double ci_hi = 1;
    double mean_sin = 0;
    double sin_se = 0;
    int trials = 0;
    int steps = 0;
};

/// Samples the OU sheet along the trajectory and averages cos(phi).
/// spacing is the spatial grid step (0 picks min(corr_length, v tau) / 20).
OracleResult sample_ou_phase(const ShuttleTrajectory &traj, const OUParams &params, int trials, uint64_t seed,
                             double spacing = 0);

struct InfidelityRow {
    Encoding encoding;
    double separation;
    double speed;
    double infidelity;
    double variance;
    std::string method;
};

std::vector<InfidelityRow> infidelity_curve(Encoding encoding, const std::vector<double> &separations,
                                            const std::vector<double> &speeds, const OUParams &params,
                                            double length = 10e-6);

void write_infidelity_csv(const std::string &path, const std::vector<InfidelityRow> &rows);

}  // namespace snakes

#endif
