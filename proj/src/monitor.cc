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

#include "snakes/monitor.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace snakes {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sum_exp(const std::vector<double> &terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        top = std::max(top, t);
    }
    if (!std::isfinite(top)) {
        return top;
    }
    double sum = 0;
    for (double t : terms) {
        sum += std::exp(t - top);
    }
    return top + std::log(sum);
}

std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; k++) {
        out[k] = std::exp(binomial_log_pmf(k, n, p));
    }
    return out;
}

std::ofstream open_csv(const std::string &path) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("Cannot open " + path + " for writing.");
    }
    f.precision(12);
    return f;
}

}  // namespace

void MonitorConfig::validate() const {
    if (N < 1) {
        throw std::invalid_argument("N must be positive.");
    }
    if (!(lambda >= 0 && lambda < 0.5)) {
        throw std::invalid_argument("lambda must lie in [0, 1/2).");
    }
    if (!(omega_hat_max > 0 && omega_hat_max < omega_max && omega_max < kPi)) {
        throw std::invalid_argument("Need 0 < omega_hat_max < omega_max < pi.");
    }
    if (nu < 1) {
        throw std::invalid_argument("nu must be positive.");
    }
    if (batch < 0 || (batch > 0 && N % batch != 0)) {
        throw std::invalid_argument("Batch size must divide N.");
    }
}

double outcome_prob(double omega, double lambda) {
    double c = std::cos(omega / 2);
    return (1 - 2 * lambda) * c * c + lambda;
}

double estimator_task1(int m0, int N) {
    if (N < 1 || m0 < 0 || m0 > N) {
        throw std::invalid_argument("Need 0 <= m0 <= N.");
    }
    return std::acos(std::clamp(2.0 * m0 / N - 1, -1.0, 1.0));
}

int acceptance_count(const MonitorConfig &cfg) {
    double c = std::cos(cfg.omega_hat_max / 2);
    return (int)std::ceil(cfg.N * c * c - 1e-9);
}

double binomial_log_pmf(int k, int n, double p) {
    if (k < 0 || k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    if (p <= 0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    if (p >= 1) {
        return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
           (n - k) * std::log1p(-p);
}

double binomial_upper_tail(int k, int n, double p) {
    k = std::max(k, 0);
    if (k > n) {
        return 0;
    }
    std::vector<double> terms;
    for (int j = k; j <= n; j++) {
        terms.push_back(binomial_log_pmf(j, n, p));
    }
    return std::min(1.0, std::exp(log_sum_exp(terms)));
}

double binomial_lower_tail(int k, int n, double p) {
    k = std::min(k, n + 1);
    if (k <= 0) {
        return 0;
    }
    std::vector<double> terms;
    for (int j = 0; j < k; j++) {
        terms.push_back(binomial_log_pmf(j, n, p));
    }
    return std::min(1.0, std::exp(log_sum_exp(terms)));
}

double monitor_acceptance(double omega, const MonitorConfig &cfg) {
    return binomial_upper_tail(acceptance_count(cfg), cfg.N, outcome_prob(omega, cfg.lambda));
}

double false_positive_rate(const MonitorConfig &cfg) {
    cfg.validate();
    return binomial_lower_tail(acceptance_count(cfg), cfg.N, outcome_prob(0, cfg.lambda));
}

AngleDistribution postselected_angle_density(const MonitorConfig &cfg, int points) {
    cfg.validate();
    auto dist = AngleDistribution::tabulate([&](double w) { return monitor_acceptance(w, cfg); }, points);
    dist.normalize();
    return dist;
}

double false_negative_rate(const MonitorConfig &cfg) {
    cfg.validate();
    auto trapezoid = [&](double lo, double hi, int intervals) {
        double h = (hi - lo) / intervals;
        double sum = 0.5 * (monitor_acceptance(lo, cfg) + monitor_acceptance(hi, cfg));
        for (int k = 1; k < intervals; k++) {
            sum += monitor_acceptance(lo + k * h, cfg);
        }
        return sum * h;
    };
    // The density is even, so both integrals run over [0, pi].  One
    // Richardson step on successive trapezoid grids removes the h^2 error
    // from the sharp fall-off just past omega_max.
    double prev = -1;
    double prev_inside = trapezoid(0, cfg.omega_max, 2048);
    double prev_outside = trapezoid(cfg.omega_max, kPi, 2048);
    for (int intervals = 4096; intervals <= (1 << 17); intervals *= 2) {
        double t_inside = trapezoid(0, cfg.omega_max, intervals);
        double t_outside = trapezoid(cfg.omega_max, kPi, intervals);
        double inside = (4 * t_inside - prev_inside) / 3;
        double outside = std::max(0.0, (4 * t_outside - prev_outside) / 3);
        prev_inside = t_inside;
        prev_outside = t_outside;
        if (!(inside + outside > 0)) {
            throw std::invalid_argument("Monitor acceptance has zero mass.");
        }
        double value = outside / (inside + outside);
        if (prev >= 0 && std::abs(value - prev) <= 1e-6 * value) {
            return value;
        }
        prev = value;
    }
    throw std::runtime_error("False-negative quadrature did not converge; last estimate " + std::to_string(prev) + ".");
}

std::vector<DiscreteEstimate> task1_distribution(double omega, const MonitorConfig &cfg) {
    cfg.validate();
    std::vector<DiscreteEstimate> out;
    double p = outcome_prob(omega, cfg.lambda);
    for (int k = 0; k <= cfg.N; k++) {
        out.push_back({estimator_task1(k, cfg.N), std::exp(binomial_log_pmf(k, cfg.N, p))});
    }
    return out;
}

double wrap_angle(double a) {
    double w = std::remainder(a, 2 * kPi);
    return w <= -kPi ? w + 2 * kPi : w;
}

double estimator_task2(int x0, int y0, int N) {
    if (N < 2 || N % 2 != 0) {
        throw std::invalid_argument("Task (ii) needs an even, positive N.");
    }
    if (x0 < 0 || y0 < 0 || x0 > N / 2 || y0 > N / 2) {
        throw std::invalid_argument("Counts must lie in [0, N/2].");
    }
    double x = 4.0 * x0 / N - 1;
    double y = 4.0 * y0 / N - 1;
    return wrap_angle(std::atan2(y, x) + kPi / 4);
}

std::pair<double, double> task2_probs(double omega, double lambda) {
    // Probes start at -pi/4, so the Bloch vector sits at omega - pi/4.
    double phi = omega - kPi / 4;
    double px = (1 - 2 * lambda) * 0.5 * (1 + std::cos(phi)) + lambda;
    double py = (1 - 2 * lambda) * 0.5 * (1 + std::sin(phi)) + lambda;
    return {px, py};
}

EstimatorStats task2_rms(double omega, const MonitorConfig &cfg, int n) {
    cfg.validate();
    if (n == 0) {
        n = cfg.N;
    }
    int total = n * cfg.nu;
    if (total < 2 || total % 2 != 0) {
        throw std::invalid_argument("Task (ii) needs an even number of probes.");
    }
    int half = total / 2;
    auto [px, py] = task2_probs(omega, cfg.lambda);
    auto bx = binomial_pmf(half, px);
    auto by = binomial_pmf(half, py);
    double mse = 0;
    for (int k = 0; k <= half; k++) {
        if (bx[k] < 1e-300) {
            continue;
        }
        for (int l = 0; l <= half; l++) {
            double w = bx[k] * by[l];
            if (w < 1e-300) {
                continue;
            }
            double e = wrap_angle(estimator_task2(k, l, total) - omega);
            mse += w * e * e;
        }
    }
    EstimatorStats out;
    out.omega = omega;
    out.shots = total;
    out.rms = std::sqrt(mse);
    out.cr_bound = 1 / std::sqrt((double)total);
    out.noisy_factor = noisy_bound_factor(cfg.lambda);
    out.noisy_bound = out.cr_bound * out.noisy_factor;
    return out;
}

double quantum_fisher_information(const Matrix2 &rho, const Matrix2 &generator) {
    double a = rho[0].real();
    double d = rho[3].real();
    std::complex<double> b = rho[1];
    double mean = 0.5 * (a + d);
    double radius = std::hypot(0.5 * (a - d), std::abs(b));
    std::array<double, 2> p{mean + radius, mean - radius};
    std::array<std::array<std::complex<double>, 2>, 2> vec;
    if (std::abs(b) < 1e-300) {
        bool upper_first = a >= d;
        vec[0] = upper_first ? std::array<std::complex<double>, 2>{1, 0} : std::array<std::complex<double>, 2>{0, 1};
        vec[1] = upper_first ? std::array<std::complex<double>, 2>{0, 1} : std::array<std::complex<double>, 2>{1, 0};
    } else {
        for (int i = 0; i < 2; i++) {
            std::array<std::complex<double>, 2> v{b, p[i] - a};
            double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
            vec[i] = {v[0] / norm, v[1] / norm};
        }
    }
    auto element = [&](int i, int j) {
        // <v_i| H |v_j>
        std::complex<double> hv0 = generator[0] * vec[j][0] + generator[1] * vec[j][1];
        std::complex<double> hv1 = generator[2] * vec[j][0] + generator[3] * vec[j][1];
        return std::conj(vec[i][0]) * hv0 + std::conj(vec[i][1]) * hv1;
    };
    double f = 0;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            double s = p[i] + p[j];
            if (s <= 1e-15) {
                continue;
            }
            f += 2 * (p[i] - p[j]) * (p[i] - p[j]) / s * std::norm(element(i, j));
        }
    }
    return f;
}

Matrix2 dephased_plus(double lambda) {
    double off = 0.5 * (1 - 2 * lambda);
    return {0.5, off, off, 0.5};
}

double qfi_ratio(double lambda) {
    Matrix2 half_z{0.5, 0, 0, -0.5};
    return quantum_fisher_information(dephased_plus(lambda), half_z) /
           quantum_fisher_information(dephased_plus(0), half_z);
}

double qfi_ratio_closed_form(double lambda) {
    return (1 - 4 * lambda + 4 * lambda * lambda) / (1 - 1.5 * lambda);
}

double noisy_bound_factor(double lambda) {
    return 1 / std::sqrt(1 - 2.5 * lambda);
}

double purity_variance(double f, int M) {
    if (!(f >= -1 && f <= 1) || M < 1) {
        throw std::invalid_argument("Need f in [-1, 1] and M >= 1.");
    }
    return (1 - f * f) / M;
}

std::vector<double> sample_purity_estimates(double f, int M, int trials, uint64_t seed) {
    purity_variance(f, M);
    std::mt19937_64 rng(seed);
    std::binomial_distribution<int> zeros(M, 0.5 * (1 + f));
    std::vector<double> out(trials);
    for (auto &v : out) {
        v = 2.0 * zeros(rng) / M - 1;
    }
    return out;
}

void write_rms_csv(const std::string &path, const MonitorConfig &cfg, const std::vector<EstimatorStats> &rows) {
    auto f = open_csv(path);
    f << "N,lambda,omega,estimator_rms,cr_bound,noisy_bound\n";
    for (const auto &r : rows) {
        f << r.shots << ',' << cfg.lambda << ',' << r.omega << ',' << r.rms << ',' << r.cr_bound << ','
          << r.noisy_bound << '\n';
    }
}

void write_density_csv(const std::string &path, const MonitorConfig &cfg, const AngleDistribution &density) {
    auto f = open_csv(path);
    f << "N,lambda,omega,p_mon_density\n";
    for (size_t k = 0; k < density.omega.size(); k++) {
        f << cfg.N << ',' << cfg.lambda << ',' << density.omega[k] << ',' << density.density[k] << '\n';
    }
}

nlohmann::json monitor_summary(const MonitorConfig &cfg) {
    cfg.validate();
    return {{"N", cfg.N},
            {"lambda", cfg.lambda},
            {"omega_max", cfg.omega_max},
            {"omega_hat_max", cfg.omega_hat_max},
            {"k_max", acceptance_count(cfg)},
            {"P_plus", false_positive_rate(cfg)},
            {"P_minus", false_negative_rate(cfg)},
            {"qfi_ratio", qfi_ratio(cfg.lambda)},
            {"noisy_bound_factor", noisy_bound_factor(cfg.lambda)}};
}

}  // namespace snakes
