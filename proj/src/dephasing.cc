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

#include "snakes/dephasing.h"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace snakes {

namespace {

constexpr double kQuadTolerance = 1e-10;

template <unsigned Points>
double integrate_segments(const std::vector<double> &cuts, double total, const ShuttleTrajectory &traj,
                          const OUParams &params, double &error) {
    using boost::math::quadrature::gauss_kronrod;
    // Dimensionless lag x = u / total keeps Boost's absolute error floor out of play.
    double norm = params.variance_scale > 0 ? params.variance_scale : 1.0;
    auto f = [&](double x) { return (1 - x) * lag_kernel(x * total, traj, params) / norm; };
    double sum = 0;
    error = 0;
    for (size_t k = 0; k + 1 < cuts.size(); k++) {
        double err = 0;
        sum += gauss_kronrod<double, Points>::integrate(f, cuts[k] / total, cuts[k + 1] / total, 20, kQuadTolerance,
                                                        &err);
        error += err;
    }
    error *= norm * total * total;
    return sum * norm * total * total;
}

}  // namespace

void OUParams::validate() const {
    if (!(corr_length > 0 && corr_time > 0)) {
        throw std::invalid_argument("Correlation length and time must be positive.");
    }
    if (!(variance_scale >= 0) || !(coupling >= 0)) {
        throw std::invalid_argument("Variance scale and coupling must be non-negative.");
    }
}

const char *encoding_name(Encoding e) {
    return e == Encoding::kLD ? "LD" : "ST";
}

void ShuttleTrajectory::validate() const {
    if (!(length > 0 && speed > 0)) {
        throw std::invalid_argument("Shuttle length and speed must be positive.");
    }
    if (!(separation >= 0)) {
        throw std::invalid_argument("Electron separation must be non-negative.");
    }
}

double covariance(double x1, double t1, double x2, double t2, const OUParams &params) {
    return params.variance_scale *
           std::exp(-std::abs(x1 - x2) / params.corr_length - std::abs(t1 - t2) / params.corr_time);
}

double lag_kernel(double u, const ShuttleTrajectory &traj, const OUParams &params) {
    double time_part = params.variance_scale * std::exp(-u / params.corr_time);
    double x = traj.speed * u;
    double lam = params.corr_length;
    if (traj.encoding == Encoding::kLD) {
        return time_part * std::exp(-x / lam);
    }
    double s = traj.separation;
    return time_part * (2 * std::exp(-x / lam) - std::exp(-(x + s) / lam) - std::exp(-std::abs(x - s) / lam));
}

DephasingResult phase_variance(const ShuttleTrajectory &traj, const OUParams &params, int gk_points) {
    traj.validate();
    params.validate();
    double T = traj.duration();
    std::vector<double> cuts{0.0};
    // Split at the kernel's kink and near its decay scale.
    double decay = 10 * params.corr_length / traj.speed;
    if (traj.encoding == Encoding::kST && traj.separation > 0) {
        double kink = traj.separation / traj.speed;
        if (kink < T) {
            cuts.push_back(kink);
        }
        if (kink + decay < T) {
            cuts.push_back(kink + decay);
        }
    }
    if (decay < T) {
        cuts.push_back(decay);
    }
    cuts.push_back(T);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double error = 0;
    double integral = 0;
    switch (gk_points) {
        case 15:
            integral = integrate_segments<15>(cuts, T, traj, params, error);
            break;
        case 31:
            integral = integrate_segments<31>(cuts, T, traj, params, error);
            break;
        case 61:
            integral = integrate_segments<61>(cuts, T, traj, params, error);
            break;
        default:
            throw std::invalid_argument("Gauss-Kronrod order must be 15, 31 or 61.");
    }
    double c2 = params.coupling * params.coupling;
    DephasingResult out;
    out.variance = std::max(0.0, 2 * c2 * integral);
    out.error = 2 * c2 * error;
    if (out.error > 1e-6 * out.variance + 1e-300 && out.error > 1e-14) {
        throw std::runtime_error("Dephasing quadrature missed its tolerance; estimate " +
                                 std::to_string(out.variance) + " +/- " + std::to_string(out.error) + ".");
    }
    out.W = std::exp(-out.variance / 2);
    out.infidelity = -std::expm1(-out.variance / 2);
    return out;
}

OracleResult sample_ou_phase(const ShuttleTrajectory &traj, const OUParams &params, int trials, uint64_t seed,
                             double spacing) {
    traj.validate();
    params.validate();
    if (trials < 1000) {
        throw std::invalid_argument("The sampling oracle needs at least 1000 trials.");
    }
    double v = traj.speed;
    double lam = params.corr_length;
    double tau = params.corr_time;
    if (spacing <= 0) {
        spacing = std::min(lam, v * tau) / 20;
    }
    int lag = 0;
    if (traj.encoding == Encoding::kST && traj.separation > 0) {
        lag = (int)std::ceil(traj.separation / spacing - 1e-9);
        spacing = traj.separation / lag;
    }
    if (spacing > lam / 10 || spacing / v > tau / 10) {
        throw std::invalid_argument("Oracle grid is coarser than a tenth of a correlation scale.");
    }
    int steps = (int)std::llround(traj.length / spacing);
    if (std::abs(steps * spacing - traj.length) > 1e-6 * traj.length) {
        throw std::invalid_argument("Separation must divide the shuttle length on the oracle grid.");
    }
    double ht = spacing / v;
    double rho_x = std::exp(-spacing / lam);
    double rho_t = std::exp(-ht / tau);
    double sx = std::sqrt(1 - rho_x * rho_x);
    double st = std::sqrt(1 - rho_t * rho_t);
    double sigma = std::sqrt(params.variance_scale);
    double scale = params.coupling * ht * sigma;

    // window[k] holds the field at position (j - k) * spacing at the
    // current time t_j, for k = 0..lag; positions behind the start of the
    // track are part of the sheet as well.
    std::vector<double> window(lag + 1);
    std::vector<double> innov(lag + 1);
    double sum_cos = 0, sum_cos2 = 0, sum_sin = 0, sum_sin2 = 0;
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < trials; trial++) {
        std::seed_seq seq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)trial};
        std::mt19937_64 rng(seq);
        window[lag] = normal(rng);
        for (int k = lag - 1; k >= 0; k--) {
            window[k] = rho_x * window[k + 1] + sx * normal(rng);
        }
        auto sample_value = [&]() {
            return traj.encoding == Encoding::kLD ? window[0] : window[0] - window[lag];
        };
        double phi = 0.5 * sample_value();
        for (int j = 1; j <= steps; j++) {
            // Advance the window in time with spatially correlated noise,
            // then move the front one cell forward.
            innov[lag] = normal(rng);
            for (int k = lag - 1; k >= 0; k--) {
                innov[k] = rho_x * innov[k + 1] + sx * normal(rng);
            }
            for (int k = 0; k <= lag; k++) {
                window[k] = rho_t * window[k] + st * innov[k];
            }
            for (int k = lag; k > 0; k--) {
                window[k] = window[k - 1];
            }
            window[0] = rho_x * window[lag > 0 ? 1 : 0] + sx * normal(rng);
            phi += (j == steps ? 0.5 : 1.0) * sample_value();
        }
        phi *= scale;
        double c = std::cos(phi);
        double s = std::sin(phi);
        sum_cos += c;
        sum_cos2 += c * c;
        sum_sin += s;
        sum_sin2 += s * s;
    }
    OracleResult out;
    out.trials = trials;
    out.steps = steps;
    out.W = sum_cos / trials;
    out.W_se = std::sqrt(std::max(0.0, sum_cos2 / trials - out.W * out.W) / trials);
    out.ci_lo = out.W - 3 * out.W_se;
    out.ci_hi = out.W + 3 * out.W_se;
    out.mean_sin = sum_sin / trials;
    out.sin_se = std::sqrt(std::max(0.0, sum_sin2 / trials - out.mean_sin * out.mean_sin) / trials);
    return out;
}

std::vector<InfidelityRow> infidelity_curve(Encoding encoding, const std::vector<double> &separations,
                                            const std::vector<double> &speeds, const OUParams &params,
                                            double length) {
    std::vector<InfidelityRow> rows;
    std::vector<double> seps = encoding == Encoding::kLD ? std::vector<double>{0.0} : separations;
    for (double s : seps) {
        for (double v : speeds) {
            ShuttleTrajectory traj{length, v, s, encoding};
            auto r = phase_variance(traj, params);
            rows.push_back({encoding, s, v, r.infidelity, r.variance, "quadrature"});
        }
    }
    return rows;
}

void write_infidelity_csv(const std::string &path, const std::vector<InfidelityRow> &rows) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("Cannot open " + path + " for writing.");
    }
    f.precision(12);
    f << "encoding,s_sep,v,infidelity,variance,method\n";
    for (const auto &r : rows) {
        f << encoding_name(r.encoding) << ',' << r.separation << ',' << r.speed << ',' << r.infidelity << ','
          << r.variance << ',' << r.method << '\n';
    }
}

}  // namespace snakes
