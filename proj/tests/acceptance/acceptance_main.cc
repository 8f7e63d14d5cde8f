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

// Acceptance run: one PASS/FAIL line per primary criterion.  Exits nonzero if
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "snakes/code_layout.h"
#include "snakes/decoder.h"
#include "snakes/dephasing.h"
#include "snakes/detection_graph.h"
#include "snakes/experiment.h"
#include "snakes/latticework.h"
#include "snakes/monitor.h"
#include "snakes/resilience.h"
#include "snakes/surgery.h"

using namespace snakes;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome threshold_criterion() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.distances = {3, 5, 7};
    cfg.p = 1e-3;
    cfg.shots = 20000;
    cfg.seed = 2026;
    auto r = threshold_scan(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = r.found && std::abs(r.omega_th - 0.62) <= 0.08;
    return {ok, fmt("omega_th=%.3f rad (95%% CI %.3f..%.3f), target 0.62+-0.08, %zu pair crossings, %.0f s", r.omega_th,
                    r.ci_lo, r.ci_hi, r.crossings.size(), secs)};
}

Outcome gap_rejection_criterion() {
    ExperimentConfig cfg;
    cfg.p = 1e-3;
    cfg.shots = 100000;
    cfg.seed = 2026;
    bool ok = true;
    std::string detail;
    for (int d : {3, 5, 7, 9}) {
        auto r = gap_rejection_rate(cfg, d, (d + 1) / 2);
        ok = ok && r.rate >= 0.02 && r.rate <= 0.07;
        detail += fmt("d=%d %.2f%%; ", d, 100 * r.rate);
    }
    auto r3 = gap_rejection_rate(cfg, 3, 3);
    ok = ok && r3.rate > 0.10;
    detail += fmt("d=3 g_min=(d+3)/2 %.2f%% (need >10%%)", 100 * r3.rate);
    return {ok, "g_min=(d+1)/2 in [2%,7%]: " + detail};
}

// Minimum weight per (syndrome, logical class) over every Z pattern on the
// data qubits, enumerated in Gray-code order.
std::vector<std::array<int, 2>> enumerate_class_weights(const CodeLayout &layout) {
    int n = layout.num_data();
    int checks = (int)layout.x_stabilisers.size();
    std::vector<uint32_t> flips(n, 0);
    for (int k = 0; k < checks; k++) {
        for (int q : layout.x_stabilisers[k].support) flips[q] ^= 1u << k;
    }
    std::vector<uint32_t> obs(n, 0);
    for (int q : layout.logical_x) obs[q] = 1;
    const int inf = std::numeric_limits<int>::max();
    std::vector<std::array<int, 2>> best(size_t(1) << checks, {inf, inf});
    uint32_t syn = 0, o = 0;
    int weight = 0;
    best[0][0] = 0;
    for (uint64_t i = 1; i < (uint64_t(1) << n); i++) {
        int q = __builtin_ctzll(i);
        uint64_t gray = i ^ (i >> 1);
        weight += (gray >> q) & 1 ? 1 : -1;
        syn ^= flips[q];
        o ^= obs[q];
        best[syn][o] = std::min(best[syn][o], weight);
    }
    return best;
}

Outcome gap_exactness_criterion() {
    bool ok = true;
    std::string detail;
    for (int d : {3, 5}) {
        auto layout = build_rotated_surface_code(d);
        auto graph = build_detection_graph(layout, 1);
        auto oracle = enumerate_class_weights(layout);
        int centre = -1;
        double best = 1e9;
        for (int k = 0; k < (int)layout.x_stabilisers.size(); k++) {
            const auto &s = layout.x_stabilisers[k];
            double dr = s.row + 0.5 - (d - 1) / 2.0, dc = s.col + 0.5 - (d - 1) / 2.0;
            if (dr * dr + dc * dc < best) {
                best = dr * dr + dc * dc;
                centre = k;
            }
        }
        auto g = complementary_gap(graph, {centre});
        int exact = std::abs(oracle[1u << centre][0] - oracle[1u << centre][1]);
        ok = ok && g.gap == exact && g.gap == 0;
        detail += fmt("d=%d central event: gap %d (enumeration %d, target 0); ", d, g.gap, exact);
        if (d == 3) {
            auto e = complementary_gap(graph, {});
            int exact_empty = std::abs(oracle[0][0] - oracle[0][1]);
            ok = ok && e.gap == exact_empty && e.gap == 3;
            detail += fmt("d=3 empty: gap %d (enumeration %d, target 3); ", e.gap, exact_empty);
        }
    }
    return {ok, detail + "a lone event at odd d is never equidistant from both boundaries"};
}

Outcome postselection_criterion() {
    ExperimentConfig cfg;
    cfg.p = 1e-3;
    cfg.seed = 2026;
    const int d = 7;
    int gmin = (d + 1) / 2;
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<double, int64_t>> points = {{0.15, 2500000}, {0.30, 500000}, {0.45, 200000}};
    for (auto [w, post_shots] : points) {
        ExperimentConfig raw_cfg = cfg;
        raw_cfg.shots = 1000000;
        auto raw = estimate_logical_rate(raw_cfg, d, w);
        ExperimentConfig post_cfg = cfg;
        post_cfg.shots = post_shots;
        auto post = postselected_rate(post_cfg, d, w, gmin);
        ok = ok && post.rate <= 1e-2 * raw.rate && post.rate <= raw.rate;
        detail += fmt("w=%.2f raw %.3g, post %.3g (%lld/%lld, CI hi %.2g) ratio %.2g; ", w, raw.rate, post.rate,
                      (long long)post.failures, (long long)post.accepted, post.ci_hi,
                      raw.rate > 0 ? post.rate / raw.rate : 0.0);
    }
    return {ok, "d=7, post <= 1e-2 x raw: " + detail};
}

Outcome monitor_task1_criterion() {
    MonitorConfig cfg;
    cfg.N = 900;
    cfg.lambda = 0.002;
    cfg.omega_hat_max = 0.075;
    cfg.omega_max = 0.3;
    auto t0 = std::chrono::steady_clock::now();
    double pm = false_negative_rate(cfg);
    double pp = false_positive_rate(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool p_minus_ok = pm >= 1.4e-8 / 1.5 && pm <= 1.4e-8 * 1.5;
    bool p_plus_ok = pp >= 0.03 && pp <= 0.08;
    return {p_minus_ok && p_plus_ok && secs < 1,
            fmt("P- = %.3g (target 1.4e-8 within x1.5: %s), P+ = %.2f%% (target [3%%,8%%]: %s), %.2f s", pm,
                p_minus_ok ? "ok" : "no", 100 * pp, p_plus_ok ? "ok" : "no", secs)};
}

Outcome monitor_task2_criterion() {
    MonitorConfig cfg;
    cfg.N = 800;
    cfg.lambda = 0.002;
    bool ok = true;
    double worst_rms = 0, worst_batch = 0, worst_sat = 0, worst_ratio = 0;
    for (double w : {0.0, kPi / 2, -kPi / 2, kPi, -kPi}) {
        auto s = task2_rms(w, cfg);
        auto b = task2_rms(w, cfg, 200);
        worst_rms = std::max(worst_rms, s.rms);
        worst_batch = std::max(worst_batch, b.rms);
        worst_sat = std::max(worst_sat, std::abs(s.rms / s.noisy_bound - 1));
    }
    for (double w : {kPi / 4, -kPi / 4, 3 * kPi / 4, -3 * kPi / 4}) {
        auto s = task2_rms(w, cfg);
        worst_ratio = std::max(worst_ratio, s.rms / s.cr_bound);
    }
    ok = worst_rms <= 0.05 && worst_batch <= 0.1 && worst_sat <= 0.1 && worst_ratio <= std::sqrt(2.0) * 1.1;
    return {ok, fmt("max rms %.4f (<=0.05), batch n=200 %.4f (<=0.1), CR saturation off by %.1f%% (<=10%%), "
                    "worst-case ratio %.3f (<=%.3f)",
                    worst_rms, worst_batch, 100 * worst_sat, worst_ratio, std::sqrt(2.0) * 1.1)};
}

Outcome noisy_bound_criterion() {
    bool ok = true;
    double worst = 1e9, worst_lambda = 0;
    for (int k = 1; k <= 70; k++) {
        double lam = k * 1e-4;
        double margin = qfi_ratio(lam) - (1 - 2.5 * lam);
        if (margin < worst) {
            worst = margin;
            worst_lambda = lam;
        }
        ok = ok && margin >= 0;
    }
    double shift = 1 / std::sqrt(qfi_ratio(0.002)) - 1;
    ok = ok && shift < 0.01;
    return {ok, fmt("QFI ratio (1-2l)^2 minus (1-2.5l): min %.3g at l=%.4f (need >=0); bound shift at l=0.2%% = %.3f%% "
                    "(<1%%)",
                    worst, worst_lambda, 100 * shift)};
}

Outcome dephasing_criterion() {
    OUParams p;
    const std::vector<double> speeds = {1, 2, 5, 10, 20, 50};
    auto traj = [](Encoding e, double v, double s) {
        ShuttleTrajectory t;
        t.speed = v;
        t.separation = s;
        t.encoding = e;
        return t;
    };
    int agree = 0, checked = 0;
    double worst_z = 0;
    for (double v : {1.0, 2.0, 5.0, 10.0, 50.0}) {
        for (auto [e, s] : {std::pair{Encoding::kLD, 0.0}, std::pair{Encoding::kST, 100e-9}}) {
            auto t = traj(e, v, s);
            auto o = sample_ou_phase(t, p, 4000, derive_seed(2026, {(uint64_t)e, (uint64_t)v}));
            double z = std::abs(o.W - phase_variance(t, p).W) / o.W_se;
            worst_z = std::max(worst_z, z);
            agree += z <= 3;
            checked++;
        }
    }
    auto ld = infidelity_curve(Encoding::kLD, {0.0}, speeds, p);
    auto st100 = infidelity_curve(Encoding::kST, {100e-9}, speeds, p);
    auto st1u = infidelity_curve(Encoding::kST, {1e-6}, speeds, p);
    bool monotone = true, st_below = true, reversed = true;
    for (size_t i = 0; i < speeds.size(); i++) {
        if (i > 0) {
            monotone = monotone && ld[i].infidelity < ld[i - 1].infidelity &&
                       st100[i].infidelity < st100[i - 1].infidelity && st1u[i].infidelity < st1u[i - 1].infidelity;
        }
        st_below = st_below && st100[i].infidelity < ld[i].infidelity;
        reversed = reversed && ld[i].infidelity < st1u[i].infidelity;
    }
    bool ok = agree == checked && monotone && st_below && reversed;
    return {ok, fmt("oracle within 3 sigma %d/%d (max %.2f sigma); monotone in v: %s; ST<LD at 100 nm: %s; "
                    "LD<ST at 1 um: %s (v=10: LD %.2e, ST(1um) %.2e)",
                    agree, checked, worst_z, monotone ? "yes" : "no", st_below ? "yes" : "no",
                    reversed ? "yes" : "no", ld[3].infidelity, st1u[3].infidelity)};
}

Outcome surgery_criterion() {
    std::vector<uint64_t> seeds;
    for (uint64_t k = 0; k < 5; k++) seeds.push_back(derive_seed(2026, {k}));
    auto checks = verify_surgery(seeds, {-kPi, -2.0, -0.7, -0.1, 0.0, 0.62, 2.7, kPi});
    bool ok = true;
    std::string detail;
    for (const auto &c : checks) {
        ok = ok && c.min_fidelity >= 1 - 1e-10 && c.probability_error < 1e-9;
        detail += fmt("%s %d branches min F=1-%.1e; ", c.protocol.c_str(), c.branches, 1 - c.min_fidelity);
    }
    return {ok, detail};
}

Outcome percolation_criterion() {
    auto bond = percolation_threshold(PercolationModel::kBond, Topology::kSquare, 64, 2000, 2026);
    auto site = percolation_threshold(PercolationModel::kSite, Topology::kSquare, 64, 2000, 2026);
    bool ok = std::abs(bond.occupied - 0.50) <= 0.02 && std::abs(site.occupied - 0.593) <= 0.01;
    return {ok, fmt("bond %.4f (0.50+-0.02), site %.4f (0.593+-0.01), occupied fractions at size 64, 2000 trials",
                    bond.occupied, site.occupied)};
}

Outcome resilience_criterion() {
    ResilienceStudyConfig cfg;
    cfg.seed = 2026;
    auto r = run_resilience_study(cfg);
    bool bounded = true, decreasing = true, exact = true;
    double prev = INFINITY;
    std::string ratios;
    for (const auto &row : r["distances"]) {
        double ratio = row["ratio"];
        double P_L = row["P_L"];
        bounded = bounded && ratio <= 1;
        decreasing = decreasing && ratio < prev;
        prev = ratio;
        exact = exact && total_logical_rate(P_L, 0, row["integral"].get<double>()).p_tilde == P_L / 9;
        ratios += fmt("d=%d %.3g; ", row["d"].get<int>(), ratio);
    }
    double series = rejection_series(0.1);
    bool series_ok = std::abs(series - 1.0 / 9) <= 4 * std::numeric_limits<double>::epsilon() / 9;
    bool ok = bounded && decreasing && exact && series_ok;
    return {ok, "integral/P_L: " + ratios +
                    fmt("<=1 everywhere: %s; decreasing: %s; P~(rho=0)=P_L/9 exactly: %s; series-1/9 = %.1e",
                        bounded ? "yes" : "no", decreasing ? "yes" : "no", exact ? "yes" : "no", series - 1.0 / 9)};
}

Outcome timing_criterion() {
    TimingModel t;
    double in_place = cycle_shuttle_time(30, CycleMode::kStabiliseInPlace, t);
    double forward = cycle_shuttle_time(30, CycleMode::kForward, t);
    double cycle = cycle_time(30, CycleMode::kStabiliseInPlace, t);
    bool ok = std::abs(in_place - 600e-9) < 1e-15 && std::abs(forward - 300e-9) < 1e-15 &&
              std::abs(cycle - 3.0e-6) < 1e-15;
    return {ok, fmt("d=30: shuttle %.0f ns in place, %.0f ns forward, cycle %.2f us", in_place * 1e9, forward * 1e9,
                    cycle * 1e6)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"defect threshold", threshold_criterion},
        {"gap rejection", gap_rejection_criterion},
        {"complementary gap exactness", gap_exactness_criterion},
        {"post-selection gain", postselection_criterion},
        {"monitor task (i)", monitor_task1_criterion},
        {"monitor task (ii)", monitor_task2_criterion},
        {"noisy-bound factor", noisy_bound_criterion},
        {"dephasing model", dephasing_criterion},
        {"snake surgery", surgery_criterion},
        {"percolation", percolation_criterion},
        {"resilience", resilience_criterion},
        {"timing model", timing_criterion},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", (int)criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
