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

#include "snakes/resilience.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snakes/experiment.h"
#include "snakes/monitor.h"

namespace snakes {

namespace {

// Weighted least squares y = a + b x.
std::pair<double, double> least_squares(const std::vector<double> &xs, const std::vector<double> &ys,
                                        const std::vector<double> &ws = {}) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        double w = ws.empty() ? 1.0 : ws[k];
        n += w;
        sx += w * xs[k];
        sy += w * ys[k];
        sxx += w * xs[k] * xs[k];
        sxy += w * xs[k] * ys[k];
    }
    double denom = n * sxx - sx * sx;
    if (xs.size() < 2 || !(std::abs(denom) > 1e-300)) {
        throw std::invalid_argument("A line fit needs at least two distinct abscissae.");
    }
    double b = (n * sxy - sx * sy) / denom;
    return {(sy - b * sx) / n, b};
}

nlohmann::json fit_json(const LogLinearFit &f) {
    return {{"intercept", f.intercept}, {"slope", f.slope}};
}

}  // namespace

double LogLinearFit::operator()(double x) const {
    return std::pow(10.0, intercept + slope * x);
}

LogLinearFit LogLinearFit::fit(const std::vector<double> &xs, const std::vector<double> &ys,
                               const std::vector<double> &weights) {
    if (xs.size() != ys.size() || (!weights.empty() && weights.size() != xs.size())) {
        throw std::invalid_argument("Fit inputs differ in length.");
    }
    std::vector<double> x, y, w;
    for (size_t k = 0; k < xs.size(); k++) {
        double wk = weights.empty() ? 1.0 : weights[k];
        if (ys[k] > 0 && std::isfinite(ys[k]) && wk > 0) {
            x.push_back(xs[k]);
            y.push_back(std::log10(ys[k]));
            w.push_back(wk);
        }
    }
    auto [a, b] = least_squares(x, y, w);
    return {a, b};
}

double DefectErrorModel::baseline_value() const {
    return baseline >= 0 ? baseline : fit(0);
}

double DefectErrorModel::cutoff() const {
    if (!(fit.slope > 0)) {
        throw std::invalid_argument("The P(omega) fit must increase with omega.");
    }
    double target = std::log10(3 * baseline_value());
    return std::clamp((target - fit.intercept) / fit.slope, 0.0, std::numbers::pi);
}

double DefectErrorModel::operator()(double omega) const {
    double w = std::abs(omega);
    double c = cutoff();
    return std::min(1.0, fit(std::max(w, c)));
}

AngleDistribution combine_distributions(const AngleDistribution &p_mon, const AngleDistribution &p_gap) {
    p_mon.validate();
    p_gap.validate();
    AngleDistribution out;
    out.omega = p_mon.omega;
    out.density.resize(out.omega.size());
    for (size_t k = 0; k < out.omega.size(); k++) {
        out.density[k] = p_mon.density[k] * p_gap(out.omega[k]);
    }
    double mass = out.total();
    if (!(mass > 0)) {
        throw std::invalid_argument("Monitor and gap distributions do not overlap.");
    }
    out.normalize();
    return out;
}

DefectIntegral defect_integral(const DefectErrorModel &model, const AngleDistribution &p, double max_angle) {
    p.validate();
    if (!(max_angle > 0 && max_angle <= std::numbers::pi + 1e-12)) {
        throw std::invalid_argument("Integration range must lie in (0, pi].");
    }
    DefectIntegral out;
    out.cutoff = model.cutoff();
    auto P = [&](double w) { return model(w); };
    out.value = p.integrate(-max_angle, max_angle, P);
    double c = std::min(out.cutoff, max_angle);
    out.below_cutoff = c > 0 ? p.integrate(-c, c, P) : 0.0;
    size_t best = 0;
    std::vector<size_t> half;
    for (size_t k = 0; k < p.omega.size(); k++) {
        if (p.omega[k] >= out.cutoff) {
            half.push_back(k);
        }
    }
    for (size_t k : half) {
        double v = P(p.omega[k]) * p.density[k];
        if (v > out.peak_value) {
            out.peak_value = v;
            best = k;
        }
    }
    out.peak_omega = p.omega[best];
    out.interior_max = out.peak_value > 0 && best != half.front() && best != half.back();
    return out;
}

TotalRate total_logical_rate(double P_L, double rho, double integral, double rejection,
                             double accepted_no_defect_rate) {
    if (!(P_L >= 0 && P_L <= 1 && rho >= 0 && rho <= 1)) {
        throw std::invalid_argument("P_L and rho must lie in [0, 1].");
    }
    if (!(rejection >= 0 && rejection < 1)) {
        throw std::invalid_argument("Rejection rate must lie in [0, 1).");
    }
    if (!(integral >= 0) || !(accepted_no_defect_rate >= 0)) {
        throw std::invalid_argument("Integral and rates must be non-negative.");
    }
    TotalRate out;
    // P_L / (1/r - 1) is exactly P_L / 9 at r = 0.1 in binary floating point.
    out.rejection_term = rejection > 0 ? P_L / (1 / rejection - 1) : 0.0;
    out.defect_term = rho * integral;
    out.p_tilde = out.rejection_term + out.defect_term;
    out.subdominant_bound = (1 - rho) * accepted_no_defect_rate;
    return out;
}

double rejection_series(double rejection) {
    if (!(rejection >= 0 && rejection < 1)) {
        throw std::invalid_argument("Rejection rate must lie in [0, 1).");
    }
    double total = 0;
    double power = 1;  // r^(i-1)
    for (int i = 1; i < 100000; i++) {
        double term = (i - 1) * power * (1 - rejection);
        double next = total + term;
        if (i > 2 && next == total) {
            break;
        }
        total = next;
        power *= rejection;
    }
    return total;
}

LogLinearFit extrapolate_fit(const std::map<int, LogLinearFit> &fits, int target) {
    auto it = fits.find(target);
    if (it != fits.end()) {
        return it->second;
    }
    std::vector<double> ds, as, bs;
    for (const auto &[d, f] : fits) {
        ds.push_back(d);
        as.push_back(f.intercept);
        bs.push_back(f.slope);
    }
    auto [a0, a1] = least_squares(ds, as);
    auto [b0, b1] = least_squares(ds, bs);
    return {a0 + a1 * target, b0 + b1 * target};
}

void ResilienceStudyConfig::validate() const {
    if (distances.empty() || (given_fits.empty() && fit_distances.size() < 2) ||
        (given_P_L.empty() && pl_distances.size() < 2)) {
        throw std::invalid_argument("Resilience study needs target distances and two fit distances.");
    }
    for (int d : distances) {
        if (d < 3 || d % 2 == 0) {
            throw std::invalid_argument("Distances must be odd and at least 3.");
        }
    }
    if (given_fits.size() == 1 || given_P_L.size() == 1) {
        throw std::invalid_argument("Precomputed inputs need at least two distances.");
    }
    for (const auto &[d, x] : given_P_L) {
        if (!(x > 0 && x < 1)) {
            throw std::invalid_argument("Precomputed P_L must lie in (0, 1).");
        }
    }
    if (fit_omegas.size() < 2 || gap_omegas.size() < 2) {
        throw std::invalid_argument("Resilience study needs at least two fit and gap angles.");
    }
    if (fit_shots < 1 || pl_shots < 1 || gap_shots < 1) {
        throw std::invalid_argument("Shot counts must be positive.");
    }
    if (!(rho >= 0 && rho <= 1) || !(rejection >= 0 && rejection < 1)) {
        throw std::invalid_argument("rho must lie in [0, 1] and the rejection rate in [0, 1).");
    }
}

void load_resilience_inputs(const nlohmann::json &j, ResilienceStudyConfig &cfg) {
    try {
        if (j.contains("fits")) {
            for (const auto &[key, f] : j.at("fits").items()) {
                cfg.given_fits[std::stoi(key)] = {f.at("intercept").get<double>(), f.at("slope").get<double>()};
            }
        }
        if (j.contains("P_L")) {
            for (const auto &[key, x] : j.at("P_L").items()) {
                cfg.given_P_L[std::stoi(key)] = x.get<double>();
            }
        }
    } catch (const std::exception &e) {
        throw std::invalid_argument(std::string("Malformed resilience inputs: ") + e.what());
    }
    if (cfg.given_fits.empty() && cfg.given_P_L.empty()) {
        throw std::invalid_argument("Resilience inputs contain neither \"fits\" nor \"P_L\".");
    }
}

nlohmann::json run_resilience_study(const ResilienceStudyConfig &cfg) {
    cfg.validate();
    ExperimentConfig base;
    base.p = cfg.p;
    base.distances = cfg.distances;
    base.seed = cfg.seed;
    base.workers = cfg.workers;
    base.gap_rule = GapRule::kDPlus1;

    nlohmann::json report;
    report["p"] = cfg.p;
    report["rho"] = cfg.rho;
    report["rejection"] = cfg.rejection;
    report["lambda"] = cfg.lambda;
    report["omega_max"] = cfg.omega_max;
    report["omega_hat_max"] = cfg.omega_hat_max;
    report["seed"] = cfg.seed;

    std::map<int, LogLinearFit> fits = cfg.given_fits;
    report["fit_points"] = nlohmann::json::array();
    ExperimentConfig fit_cfg = base;
    fit_cfg.shots = cfg.fit_shots;
    for (int d : cfg.given_fits.empty() ? cfg.fit_distances : std::vector<int>{}) {
        std::vector<double> rates, weights;
        for (double w : cfg.fit_omegas) {
            auto r = postselected_rate(fit_cfg, d, w, base.gmin(d));
            rates.push_back(r.rate);
            weights.push_back((double)r.failures);
            report["fit_points"].push_back({{"d", d},
                                            {"omega", w},
                                            {"rate", r.rate},
                                            {"ci_lo", r.ci_lo},
                                            {"ci_hi", r.ci_hi},
                                            {"accepted", r.accepted},
                                            {"shots", r.shots},
                                            {"failures", r.failures}});
        }
        fits[d] = LogLinearFit::fit(cfg.fit_omegas, rates, weights);
    }

    std::map<int, double> pl_measured = cfg.given_P_L;
    std::vector<double> pl_d, pl_rate, pl_w;
    for (const auto &[d, x] : cfg.given_P_L) {
        pl_d.push_back(d);
        pl_rate.push_back(x);
        pl_w.push_back(1.0);
    }
    ExperimentConfig pl_cfg = base;
    pl_cfg.shots = cfg.pl_shots;
    for (int d : cfg.given_P_L.empty() ? cfg.pl_distances : std::vector<int>{}) {
        auto r = estimate_logical_rate(pl_cfg, d, 0.0);
        pl_measured[d] = r.rate;
        pl_d.push_back(d);
        pl_rate.push_back(r.rate);
        pl_w.push_back((double)r.failures);
    }
    auto pl_fit = LogLinearFit::fit(pl_d, pl_rate, pl_w);
    report["P_L_fit"] = fit_json(pl_fit);

    ExperimentConfig gap_cfg = base;
    gap_cfg.omegas = cfg.gap_omegas;
    gap_cfg.shots = cfg.gap_shots;

    report["distances"] = nlohmann::json::array();
    for (int d : cfg.distances) {
        nlohmann::json row;
        row["d"] = d;
        bool measured = pl_measured.count(d) && pl_measured[d] > 0;
        double P_L = measured ? pl_measured[d] : pl_fit(d);
        row["P_L"] = P_L;
        row["P_L_source"] = !measured ? "extrapolated" : cfg.given_P_L.empty() ? "simulated" : "given";

        DefectErrorModel model{extrapolate_fit(fits, d)};
        row["P_fit"] = fit_json(model.fit);
        row["P_fit_source"] = !fits.count(d) ? "extrapolated" : cfg.given_fits.empty() ? "simulated" : "given";

        auto gap = gap_angle_distribution(gap_cfg, d);
        row["g_min"] = gap.g_min;
        row["gap_last_reliable"] = gap.last_reliable;
        row["gap_tail"] = {{"a", gap.tail_a}, {"b", gap.tail_b}};

        MonitorConfig mon;
        mon.N = d * d;
        mon.lambda = cfg.lambda;
        mon.omega_max = cfg.omega_max;
        mon.omega_hat_max = cfg.omega_hat_max;
        auto p_mon = postselected_angle_density(mon);
        auto p_both = combine_distributions(p_mon, gap.density);

        auto both = defect_integral(model, p_both);
        auto gap_only = defect_integral(model, gap.density, std::numbers::pi / 2);
        auto total = total_logical_rate(P_L, cfg.rho, both.value, cfg.rejection);
        row["cutoff"] = both.cutoff;
        row["integral"] = both.value;
        row["integral_below_cutoff"] = both.below_cutoff;
        row["ratio"] = both.value / P_L;
        row["gap_only_integral"] = gap_only.value;
        row["gap_only_ratio"] = gap_only.value / P_L;
        row["peak_omega"] = both.peak_omega;
        row["peak_value"] = both.peak_value;
        row["interior_max"] = both.interior_max;
        row["P_tilde"] = total.p_tilde;
        row["rejection_term"] = total.rejection_term;
        row["defect_term"] = total.defect_term;
        report["distances"].push_back(row);
    }
    report["rejection_series"] = rejection_series(cfg.rejection);
    report["rejection_closed_form"] = cfg.rejection / (1 - cfg.rejection);
    return report;
}

}  // namespace snakes
