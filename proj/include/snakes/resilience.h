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

#ifndef SNAKES_RESILIENCE_H
#define SNAKES_RESILIENCE_H

#include <cstdint>
#include <map>
#include <vector>

#include "json.hpp"
#include "snakes/angle_distribution.h"

namespace snakes {

/// log10 y = intercept + slope * x.
struct LogLinearFit {
    double intercept = 0;
    double slope = 0;

    double operator()(double x) const;
    /// Weighted least squares on log10(ys); points with ys <= 0 are skipped
    /// and at least two usable points with distinct x are required.  Empty
    /// weights mean equal weights; failure counts give Poisson weights.
    static LogLinearFit fit(const std::vector<double> &xs, const std::vector<double> &ys,
                            const std::vector<double> &weights = {});
};

/// P(omega): probability of a logical error given an undetected defect of
/// angle omega.  The log-linear fit is trusted down to the angle where it
/// falls to three times the zero-angle baseline; below that the model holds
/// the value at the cutoff, which bounds the circuit-noise region.
struct DefectErrorModel {
    LogLinearFit fit;
    /// Zero-angle rate; fit(0) when negative.
    double baseline = -1;

    double baseline_value() const;
    double cutoff() const;
    double operator()(double omega) const;
};

/// p_both = p_mon p_gap / int p_mon p_gap, on the grid of p_mon.
AngleDistribution combine_distributions(const AngleDistribution &p_mon, const AngleDistribution &p_gap);

struct DefectIntegral {
    double value = 0;
    /// Part of the value from |omega| below the model cutoff.
    double below_cutoff = 0;
    double cutoff = 0;
    /// Location and height of the maximum of P(omega) p(omega) over
    /// [cutoff, pi]; interior when it sits strictly inside that range.
    double peak_omega = 0;
    double peak_value = 0;
    bool interior_max = false;
};

/// int_{|omega| <= max_angle} P(|omega|) p(omega) d omega.
DefectIntegral defect_integral(const DefectErrorModel &model, const AngleDistribution &p,
                               double max_angle = 3.141592653589793);

struct TotalRate {
    double p_tilde = 0;
    /// P_L r / (1 - r): errors picked up while rejected paths are rolled back.
    double rejection_term = 0;
    double defect_term = 0;
    /// (1 - rho) times the accepted no-defect rate; reported, not added.
    double subdominant_bound = 0;
};

/// P~_L = P_L r / (1 - r) + rho * integral (r = 0.1 gives P_L / 9).
TotalRate total_logical_rate(double P_L, double rho, double integral, double rejection = 0.1,
                             double accepted_no_defect_rate = 0);

/// sum_{i>=1} (i - 1) r^(i-1) (1 - r), summed term by term until the terms
/// stop changing the total.
double rejection_series(double rejection);

/// Coefficients fitted linearly in d and evaluated at target.
LogLinearFit extrapolate_fit(const std::map<int, LogLinearFit> &fits, int target);

struct ResilienceStudyConfig {
    double p = 1e-3;
    std::vector<int> distances = {3, 5, 7, 9, 11, 13};
    /// Distances whose post-selected P(omega) is simulated and fitted.
    std::vector<int> fit_distances = {3, 5, 7};
    std::vector<double> fit_omegas = {0.35, 0.45, 0.55, 0.65};
    /// Accepted shots per fit point.
    int64_t fit_shots = 50000;
    /// Distances whose P_L is simulated; others use a log-linear fit in d.
    std::vector<int> pl_distances = {3, 5, 7};
    int64_t pl_shots = 200000;
    /// Angles and shots for the complementary-gap acceptance.
    std::vector<double> gap_omegas = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.8};
    int64_t gap_shots = 2048;
    /// Monitor settings (N = d^2 monitor qubits).
    double lambda = 0.002;
    double omega_max = 0.3;
    double omega_hat_max = 0.075;
    double rho = 1e-3;
    double rejection = 0.1;
    uint64_t seed = 1;
    int workers = 1;
    /// Precomputed P(omega) regressions per distance; when set, no fit points are simulated.
    std::map<int, LogLinearFit> given_fits;
    /// Precomputed P_L per distance; when set, P_L is not simulated.
    std::map<int, double> given_P_L;

    void validate() const;
};

/// Reads given_fits / given_P_L from {"fits": {"<d>": {"intercept", "slope"}}, "P_L": {"<d>": x}}.
void load_resilience_inputs(const nlohmann::json &j, ResilienceStudyConfig &cfg);

/// Runs the Monte Carlo inputs and assembles the per-distance report.
nlohmann::json run_resilience_study(const ResilienceStudyConfig &cfg);

}  // namespace snakes

#endif
