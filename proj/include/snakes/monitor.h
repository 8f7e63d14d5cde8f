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

#ifndef SNAKES_MONITOR_H
#define SNAKES_MONITOR_H

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "snakes/angle_distribution.h"

namespace snakes {

struct MonitorConfig {
    /// Number of monitor qubits.
    int N = 900;
    /// Combined dephasing and readout flip probability.
    double lambda = 0.002;
    /// Largest defect angle the code tolerates.
    double omega_max = 0.3;
    /// Detection threshold on the estimated angle.
    double omega_hat_max = 0.075;
    /// Shuttle repetitions.
    int nu = 1;
    /// Batch size for split estimation; 0 means a single batch of N.
    int batch = 0;

    int batch_size() const {
        return batch == 0 ? N : batch;
    }
    int num_batches() const {
        return N / batch_size();
    }
    void validate() const;
};

double outcome_prob(double omega, double lambda);

double estimator_task1(int m0, int N);

/// Smallest zero-outcome count accepted by the task (i) rule.
int acceptance_count(const MonitorConfig &cfg);

double binomial_log_pmf(int k, int n, double p);
/// P(X >= k) for X ~ Binom(n, p), summed in log space.
double binomial_upper_tail(int k, int n, double p);
/// P(X < k).
double binomial_lower_tail(int k, int n, double p);

/// Probability that a link with defect angle omega passes the monitor.
double monitor_acceptance(double omega, const MonitorConfig &cfg);

double false_positive_rate(const MonitorConfig &cfg);
AngleDistribution postselected_angle_density(const MonitorConfig &cfg, int points = 4097);
double false_negative_rate(const MonitorConfig &cfg);

struct DiscreteEstimate {
    double omega;
    double prob;
};

/// Support and probabilities of the task (i) estimator.
std::vector<DiscreteEstimate> task1_distribution(double omega, const MonitorConfig &cfg);

/// x0 and y0 count zero outcomes among the N/2 X-basis and N/2 Y-basis probes.
double estimator_task2(int x0, int y0, int N);

/// Zero-outcome probabilities of the X- and Y-basis probes.
std::pair<double, double> task2_probs(double omega, double lambda);

double wrap_angle(double a);

struct EstimatorStats {
    double omega = 0;
    int shots = 0;
    double rms = 0;
    double cr_bound = 0;
    double noisy_factor = 1;
    double noisy_bound = 0;
};

/// Exact RMS of the task (ii) estimator with n probes (0 means cfg.N).
EstimatorStats task2_rms(double omega, const MonitorConfig &cfg, int n = 0);

using Matrix2 = std::array<std::complex<double>, 4>;

/// Quantum Fisher information of rho under exp(-i theta H), from the
/// spectral decomposition of rho.
double quantum_fisher_information(const Matrix2 &rho, const Matrix2 &generator);

/// Density matrix of |+> after dephasing with probability lambda.
Matrix2 dephased_plus(double lambda);

/// QFI of the dephased probe relative to the pure probe.
double qfi_ratio(double lambda);
/// Closed form printed alongside the dephasing argument.
double qfi_ratio_closed_form(double lambda);
double noisy_bound_factor(double lambda);

double purity_variance(double f, int M);
/// Overlap estimates from M simulated SWAP-test bits per trial.
std::vector<double> sample_purity_estimates(double f, int M, int trials, uint64_t seed);

void write_rms_csv(const std::string &path, const MonitorConfig &cfg, const std::vector<EstimatorStats> &rows);
void write_density_csv(const std::string &path, const MonitorConfig &cfg, const AngleDistribution &density);
nlohmann::json monitor_summary(const MonitorConfig &cfg);

}  // namespace snakes

#endif
