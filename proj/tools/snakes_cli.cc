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

// Command-line driver.  Every run resolves its settings from defaults, an
// optional --config file, SNAKES_* environment variables and flags (in that
// order), writes its outputs under --out and records the resolved settings in
// <subcommand>.manifest.json.  `replay <manifest>` re-runs from a manifest.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snakes/dephasing.h"
#include "snakes/experiment.h"
#include "snakes/latticework.h"
#include "snakes/monitor.h"
#include "snakes/resilience.h"
#include "snakes/surgery.h"

#ifndef SNAKES_VERSION
#define SNAKES_VERSION "unknown"
#endif

namespace {

using Json = nlohmann::json;
using Settings = std::map<std::string, std::string>;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

struct OptionSpec {
    std::string key;
    std::string fallback;
    std::string help;
};

// Output bookkeeping for one run.
class RunContext {
   public:
    RunContext(std::string subcommand, fs::path out) : subcommand_(std::move(subcommand)), out_(std::move(out)) {
    }
    std::string path(const std::string &name) {
        auto p = (out_ / name).string();
        outputs_.push_back(p);
        return p;
    }
    std::string manifest_name() const {
        return subcommand_ + ".manifest.json";
    }
    void write_json(const std::string &name, Json j) {
        j["manifest"] = manifest_name();
        std::ofstream f(path(name));
        if (!f) {
            throw std::runtime_error("Cannot open " + (out_ / name).string() + " for writing.");
        }
        f << j.dump(2) << '\n';
    }
    const std::vector<std::string> &outputs() const {
        return outputs_;
    }
    const fs::path &out() const {
        return out_;
    }
    bool check_failed = false;

   private:
    std::string subcommand_;
    fs::path out_;
    std::vector<std::string> outputs_;
};

// ---- value parsing ----

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(std::string s) {
    s = trim(s);
    if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string &key, const std::string &v) {
    size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != v.size() || !std::isfinite(x)) {
        throw std::invalid_argument("Option " + key + ": '" + v + "' is not a number.");
    }
    return x;
}

long long to_int(const std::string &key, const std::string &v) {
    size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != v.size()) {
        throw std::invalid_argument("Option " + key + ": '" + v + "' is not an integer.");
    }
    return x;
}

class Params {
   public:
    explicit Params(const Settings &s) : s_(s) {
    }
    const std::string &str(const std::string &key) const {
        auto it = s_.find(key);
        if (it == s_.end()) throw std::logic_error("Unregistered option " + key);
        return it->second;
    }
    bool empty(const std::string &key) const {
        return trim(str(key)).empty();
    }
    double num(const std::string &key) const {
        return to_double(key, trim(str(key)));
    }
    long long integer(const std::string &key) const {
        return to_int(key, trim(str(key)));
    }
    int positive(const std::string &key) const {
        long long v = integer(key);
        if (v < 1 || v > (1LL << 31) - 1) throw std::invalid_argument("Option " + key + " must be a positive integer.");
        return (int)v;
    }
    uint64_t seed() const {
        long long v = integer("seed");
        if (v < 0) throw std::invalid_argument("Option seed must be non-negative.");
        return (uint64_t)v;
    }
    std::vector<double> nums(const std::string &key) const {
        std::vector<double> out;
        for (const auto &x : split_list(str(key))) out.push_back(to_double(key, x));
        return out;
    }
    std::vector<int> ints(const std::string &key) const {
        std::vector<int> out;
        for (const auto &x : split_list(str(key))) out.push_back((int)to_int(key, x));
        if (out.empty()) throw std::invalid_argument("Option " + key + " needs at least one value.");
        return out;
    }

   private:
    const Settings &s_;
};

// g_min rule: "d+1" ((d+1)/2), "d+3" ((d+3)/2), "none" or a fixed integer.
void apply_gmin(const Params &p, snakes::ExperimentConfig &cfg) {
    std::string v = trim(p.str("gmin"));
    if (v == "d+1") {
        cfg.gap_rule = snakes::GapRule::kDPlus1;
    } else if (v == "d+3") {
        cfg.gap_rule = snakes::GapRule::kDPlus3;
    } else if (v == "none") {
        cfg.gap_rule = snakes::GapRule::kNone;
    } else {
        cfg.gap_rule = snakes::GapRule::kCustom;
        cfg.custom_gmin = (int)to_int("gmin", v);
    }
}

snakes::ExperimentConfig experiment_config(const Params &p) {
    snakes::ExperimentConfig cfg;
    cfg.distances = p.ints("d");
    cfg.p = p.num("p");
    cfg.shots = p.integer("shots");
    cfg.seed = p.seed();
    cfg.workers = p.positive("workers");
    return cfg;
}

Json estimate_json(const snakes::RateEstimate &e) {
    return {{"rate", e.rate}, {"ci_lo", e.ci_lo},       {"ci_hi", e.ci_hi},
            {"shots", e.shots}, {"accepted", e.accepted}, {"failures", e.failures}};
}

// ---- subcommands ----

void run_threshold(const Params &p, RunContext &ctx) {
    auto cfg = experiment_config(p);
    if (!p.empty("omega")) cfg.omegas = p.nums("omega");
    auto result = snakes::threshold_scan(cfg);
    std::vector<snakes::RateRow> rows;
    for (const auto &pt : result.points) {
        auto e = snakes::wilson_interval(pt.failures, pt.shots, cfg.confidence);
        e.seed = cfg.seed;
        rows.push_back({pt.d, cfg.p, pt.omega, 0, e});
    }
    snakes::write_rate_csv(ctx.path("threshold.csv"), rows);
    Json crossings = Json::array();
    for (const auto &c : result.crossings) {
        crossings.push_back({{"d_small", c.d_small}, {"d_large", c.d_large}, {"omega", c.omega}});
    }
    Json j{{"found", result.found},   {"omega_th", result.omega_th}, {"ci_lo", result.ci_lo},
           {"ci_hi", result.ci_hi},   {"q_th", result.q_th},         {"crossings", crossings},
           {"config", snakes::config_to_json(cfg)}};
    ctx.write_json("threshold.json", j);
    std::cout << "omega_th = " << result.omega_th << " rad [" << result.ci_lo << ", " << result.ci_hi << "]"
              << (result.found ? "" : " (no crossing found)") << '\n';
}

void run_gap_stats(const Params &p, RunContext &ctx) {
    auto cfg = experiment_config(p);
    apply_gmin(p, cfg);
    std::vector<snakes::RateRow> rows;
    Json summary = Json::array();
    for (int d : cfg.distances) {
        auto e = snakes::gap_rejection_rate(cfg, d, cfg.gmin(d));
        rows.push_back({d, cfg.p, 0.0, cfg.gmin(d), e});
        summary.push_back({{"d", d}, {"g_min", cfg.gmin(d)}, {"rejection", estimate_json(e)}});
        std::cout << "d=" << d << " g_min=" << cfg.gmin(d) << " rejection=" << e.rate << '\n';
    }
    snakes::write_rate_csv(ctx.path("gap_stats.csv"), rows);
    if (!p.empty("omega")) {
        cfg.omegas = p.nums("omega");
        std::ofstream f(ctx.path("gap_density.csv"));
        f.precision(12);
        f << "d,g_min,omega,p_gap_density\n";
        for (size_t k = 0; k < cfg.distances.size(); k++) {
            int d = cfg.distances[k];
            auto g = snakes::gap_angle_distribution(cfg, d);
            for (size_t i = 0; i < g.density.omega.size(); i++) {
                f << d << ',' << g.g_min << ',' << g.density.omega[i] << ',' << g.density.density[i] << '\n';
            }
            summary[k]["p_gap"] = {{"last_reliable", g.last_reliable}, {"tail_a", g.tail_a}, {"tail_b", g.tail_b}};
        }
    }
    ctx.write_json("gap_stats.json", {{"rows", summary}, {"config", snakes::config_to_json(cfg)}});
}

void run_postselect(const Params &p, RunContext &ctx) {
    auto cfg = experiment_config(p);
    apply_gmin(p, cfg);
    cfg.omegas = p.nums("omega");
    if (cfg.omegas.empty()) throw std::invalid_argument("postselect needs at least one --omega.");
    std::vector<snakes::RateRow> rows;
    Json points = Json::array();
    for (int d : cfg.distances) {
        for (double w : cfg.omegas) {
            auto raw = snakes::estimate_logical_rate(cfg, d, w);
            auto post = snakes::postselected_rate(cfg, d, w, cfg.gmin(d));
            rows.push_back({d, cfg.p, w, 0, raw});
            rows.push_back({d, cfg.p, w, cfg.gmin(d), post});
            double gain = post.rate > 0 ? raw.rate / post.rate : INFINITY;
            points.push_back({{"d", d},
                              {"omega", w},
                              {"g_min", cfg.gmin(d)},
                              {"unconditioned", estimate_json(raw)},
                              {"postselected", estimate_json(post)},
                              {"gain", std::isfinite(gain) ? Json(gain) : Json(nullptr)}});
            std::cout << "d=" << d << " omega=" << w << " raw=" << raw.rate << " post=" << post.rate << '\n';
        }
    }
    snakes::write_rate_csv(ctx.path("postselect.csv"), rows);
    ctx.write_json("postselect.json", {{"points", points}, {"config", snakes::config_to_json(cfg)}});
}

void run_monitor(const Params &p, RunContext &ctx) {
    snakes::MonitorConfig cfg;
    cfg.N = p.positive("N");
    cfg.lambda = p.num("lambda");
    cfg.omega_max = p.num("omega-max");
    cfg.omega_hat_max = p.num("omega-hat-max");
    cfg.nu = p.positive("nu");
    cfg.batch = (int)p.integer("batch");
    cfg.validate();
    std::vector<double> angles = p.nums("omega");
    if (angles.empty()) {
        const double pi = std::numbers::pi;
        angles = {-pi, -3 * pi / 4, -pi / 2, -pi / 4, 0, pi / 4, pi / 2, 3 * pi / 4, pi};
    }
    std::vector<snakes::EstimatorStats> rms;
    for (double w : angles) rms.push_back(snakes::task2_rms(w, cfg));
    snakes::write_density_csv(ctx.path("monitor_density.csv"), cfg, snakes::postselected_angle_density(cfg));
    snakes::write_rms_csv(ctx.path("monitor_rms.csv"), cfg, rms);
    Json j = snakes::monitor_summary(cfg);
    std::cout << "P+ = " << snakes::false_positive_rate(cfg) << ", P- = " << snakes::false_negative_rate(cfg) << '\n';
    ctx.write_json("monitor.json", j);
}

void run_dephasing(const Params &p, RunContext &ctx) {
    snakes::OUParams ou;
    ou.corr_length = p.num("corr-length");
    ou.corr_time = p.num("corr-time");
    ou.variance_scale = p.empty("variance-scale") ? std::sqrt(2.0) / ou.corr_time : p.num("variance-scale");
    ou.coupling = p.num("coupling");
    ou.validate();
    double length = p.num("length");
    auto speeds = p.nums("v");
    auto seps = p.nums("sep");
    if (speeds.empty()) throw std::invalid_argument("dephasing needs at least one speed.");
    auto rows = snakes::infidelity_curve(snakes::Encoding::kLD, {0.0}, speeds, ou, length);
    if (!seps.empty()) {
        auto st = snakes::infidelity_curve(snakes::Encoding::kST, seps, speeds, ou, length);
        rows.insert(rows.end(), st.begin(), st.end());
    }
    long long trials = p.integer("oracle-trials");
    if (trials > 0) {
        std::vector<snakes::InfidelityRow> sampled;
        for (const auto &r : rows) {
            snakes::ShuttleTrajectory traj;
            traj.length = length;
            traj.speed = r.speed;
            traj.separation = r.separation;
            traj.encoding = r.encoding;
            uint64_t seed = snakes::derive_seed(p.seed(), {(uint64_t)r.encoding, (uint64_t)sampled.size()});
            auto o = snakes::sample_ou_phase(traj, ou, (int)trials, seed);
            double var = o.W > 0 ? -2 * std::log(o.W) : INFINITY;
            sampled.push_back({r.encoding, r.separation, r.speed, 1 - o.W, var, "sampling"});
        }
        rows.insert(rows.end(), sampled.begin(), sampled.end());
    }
    snakes::write_infidelity_csv(ctx.path("dephasing.csv"), rows);
    std::cout << rows.size() << " rows written\n";
}

void run_surgery(const Params &p, RunContext &ctx) {
    int states = p.positive("states");
    std::vector<uint64_t> seeds;
    for (int k = 0; k < states; k++) seeds.push_back(snakes::derive_seed(p.seed(), {(uint64_t)k}));
    auto angles = p.nums("phi");
    if (angles.empty()) angles = {-std::numbers::pi, -2.0, -0.7, -0.1, 0.0, 0.62, 2.7, std::numbers::pi};
    double tol = p.num("tolerance");
    auto checks = snakes::verify_surgery(seeds, angles);
    Json report = Json::array();
    bool pass = true;
    for (const auto &c : checks) {
        bool ok = c.min_fidelity >= 1 - tol && c.probability_error < 1e-9;
        pass = pass && ok;
        report.push_back({{"protocol", c.protocol},
                          {"branches", c.branches},
                          {"min_fidelity", c.min_fidelity},
                          {"probability_error", c.probability_error},
                          {"pass", ok}});
        std::cout << (ok ? "PASS " : "FAIL ") << c.protocol << " branches=" << c.branches
                  << " min_fidelity=" << c.min_fidelity << '\n';
    }
    ctx.write_json("surgery.json", {{"checks", report}, {"tolerance", tol}, {"angles", angles}, {"pass", pass}});
    ctx.check_failed = !pass;
}

Json read_json_file(const std::string &path, const std::string &what) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("Cannot read " + what + " file '" + path + "'.");
    try {
        return Json::parse(f);
    } catch (const Json::exception &e) {
        throw std::invalid_argument("Invalid JSON in " + path + ": " + e.what());
    }
}

void run_route(const Params &p, RunContext &ctx) {
    if (p.empty("scenario")) throw std::invalid_argument("route needs --scenario <file.json>.");
    auto result = snakes::run_scenario(read_json_file(p.str("scenario"), "scenario"));
    ctx.write_json("route.json", result);
    std::cout << result.dump(2) << '\n';
}

void run_percolation(const Params &p, RunContext &ctx) {
    std::vector<snakes::PercolationModel> models;
    std::string m = trim(p.str("model"));
    if (m == "both") {
        models = {snakes::PercolationModel::kBond, snakes::PercolationModel::kSite};
    } else {
        models = {snakes::parse_percolation_model(m)};
    }
    auto topology = snakes::parse_topology(trim(p.str("topology")));
    int size = p.positive("size");
    int trials = p.positive("trials");
    auto fractions = p.nums("fractions");
    std::vector<snakes::PercolationRow> rows;
    Json thresholds = Json::array();
    for (auto model : models) {
        auto t = snakes::percolation_threshold(model, topology, size, trials, p.seed());
        thresholds.push_back({{"model", snakes::percolation_model_name(model)},
                              {"occupied", t.occupied},
                              {"deactivated", t.deactivated},
                              {"ci_lo", t.lo},
                              {"ci_hi", t.hi}});
        std::cout << snakes::percolation_model_name(model) << " threshold (occupied) = " << t.occupied << '\n';
        auto curve = snakes::percolation_curve(model, topology, fractions, size, trials, p.seed());
        rows.insert(rows.end(), curve.begin(), curve.end());
    }
    snakes::write_percolation_csv(ctx.path("percolation.csv"), rows);
    ctx.write_json("percolation.json", {{"topology", snakes::topology_name(topology)},
                                        {"size", size},
                                        {"trials", trials},
                                        {"thresholds", thresholds}});
}

void run_resilience(const Params &p, RunContext &ctx) {
    snakes::ResilienceStudyConfig cfg;
    cfg.p = p.num("p");
    cfg.distances = p.ints("d");
    cfg.fit_distances = p.ints("fit-d");
    cfg.fit_omegas = p.nums("fit-omega");
    cfg.fit_shots = p.integer("fit-shots");
    cfg.pl_distances = p.ints("pl-d");
    cfg.pl_shots = p.integer("pl-shots");
    cfg.gap_omegas = p.nums("gap-omega");
    cfg.gap_shots = p.integer("gap-shots");
    cfg.lambda = p.num("lambda");
    cfg.omega_max = p.num("omega-max");
    cfg.omega_hat_max = p.num("omega-hat-max");
    cfg.rho = p.num("rho");
    cfg.rejection = p.num("rejection");
    cfg.seed = p.seed();
    cfg.workers = p.positive("workers");
    if (!p.empty("input")) {
        snakes::load_resilience_inputs(read_json_file(p.str("input"), "resilience input"), cfg);
    }
    auto report = snakes::run_resilience_study(cfg);
    std::ofstream f(ctx.path("resilience.csv"));
    f.precision(12);
    f << "d,P_L,P_L_source,fit_intercept,fit_slope,cutoff,integral,ratio,peak_omega,interior_max,P_tilde\n";
    for (const auto &r : report["distances"]) {
        f << r["d"].get<int>() << ',' << r["P_L"].get<double>() << ',' << r["P_L_source"].get<std::string>() << ','
          << r["P_fit"]["intercept"].get<double>() << ',' << r["P_fit"]["slope"].get<double>() << ','
          << r["cutoff"].get<double>() << ',' << r["integral"].get<double>() << ',' << r["ratio"].get<double>()
          << ',' << r["peak_omega"].get<double>() << ',' << (r["interior_max"].get<bool>() ? 1 : 0) << ','
          << r["P_tilde"].get<double>() << '\n';
        std::cout << "d=" << r["d"] << " P_L=" << r["P_L"] << " ratio=" << r["ratio"] << '\n';
    }
    ctx.write_json("resilience.json", report);
}

struct Command {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
    std::function<void(const Params &, RunContext &)> run;
};

std::vector<Command> commands() {
    const OptionSpec seed{"seed", "1", "master seed"};
    const OptionSpec workers{"workers", "1", "worker threads (results do not depend on it)"};
    return {
        {"threshold",
         "logical error rate vs defect angle and the crossing angle",
         {{"d", "3,5,7", "code distances"},
          {"p", "0.001", "physical error rate"},
          {"omega", "", "defect angles (default grid if empty)"},
          {"shots", "20000", "shots per point"},
          seed,
          workers},
         run_threshold},
        {"gap-stats",
         "complementary-gap rejection rates and optional p_gap densities",
         {{"d", "3,5,7,9", "code distances"},
          {"p", "0.001", "physical error rate"},
          {"omega", "", "angles for p_gap (skipped if empty; must start at 0)"},
          {"shots", "100000", "shots per distance (or per angle for p_gap)"},
          {"gmin", "d+1", "gap cut: d+1, d+3, none or an integer"},
          seed,
          workers},
         run_gap_stats},
        {"postselect",
         "unconditioned vs gap-post-selected logical rates",
         {{"d", "7", "code distances"},
          {"p", "0.001", "physical error rate"},
          {"omega", "0.15,0.3,0.45", "defect angles"},
          {"shots", "100000", "shots per point (accepted shots when post-selecting)"},
          {"gmin", "d+1", "gap cut: d+1, d+3, none or an integer"},
          seed,
          workers},
         run_postselect},
        {"monitor",
         "monitor-qubit detection and estimation statistics",
         {{"N", "900", "monitor qubits"},
          {"lambda", "0.002", "dephasing plus readout flip probability"},
          {"omega-max", "0.3", "largest tolerated defect angle"},
          {"omega-hat-max", "0.075", "detection threshold on the estimate"},
          {"nu", "1", "shuttle repetitions"},
          {"batch", "0", "batch size for split estimation (0 = N)"},
          {"omega", "", "angles for the estimator RMS table"}},
         run_monitor},
        {"dephasing",
         "shuttling dephasing of LD and ST encodings",
         {{"v", "1,2,5,10,20,50", "speeds in m/s"},
          {"sep", "50e-9,100e-9,1e-6", "ST separations in m"},
          {"length", "10e-6", "shuttle distance in m"},
          {"corr-length", "100e-9", "sheet correlation length in m"},
          {"corr-time", "20e-6", "sheet correlation time in s"},
          {"variance-scale", "", "sheet variance scale (default sqrt(2)/corr-time)"},
          {"coupling", "2676.5", "field-to-phase coupling"},
          {"oracle-trials", "0", "also sample the sheet with this many trials"},
          seed},
         run_dephasing},
        {"surgery-verify",
         "statevector check of every snake-surgery branch",
         {{"states", "5", "random input states"},
          {"phi", "", "defect angles (default 8 angles in [-pi, pi])"},
          {"tolerance", "1e-10", "allowed infidelity"},
          seed},
         run_surgery},
        {"route", "routes and timing on a latticework scenario", {{"scenario", "", "scenario JSON file"}}, run_route},
        {"percolation",
         "latticework connectivity under deactivated links or tiles",
         {{"model", "both", "bond, site or both"},
          {"topology", "square", "square, hexagonal or rectangular"},
          {"size", "64", "lattice side"},
          {"trials", "2000", "trials"},
          {"fractions", "0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7", "deactivated fractions for the curve"},
          seed},
         run_percolation},
        {"resilience",
         "defect contribution to the post-selected logical rate",
         {{"p", "0.001", "physical error rate"},
          {"d", "3,5,7,9,11,13", "target distances"},
          {"fit-d", "3,5,7", "distances with simulated P(omega)"},
          {"fit-omega", "0.35,0.45,0.55,0.65", "angles for the P(omega) fit"},
          {"fit-shots", "50000", "accepted shots per fit point"},
          {"pl-d", "3,5,7", "distances with simulated P_L"},
          {"pl-shots", "200000", "shots per P_L point"},
          {"gap-omega", "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.5,0.6,0.8", "angles for p_gap"},
          {"gap-shots", "2048", "shots per p_gap angle"},
          {"lambda", "0.002", "monitor flip probability"},
          {"omega-max", "0.3", "largest tolerated defect angle"},
          {"omega-hat-max", "0.075", "monitor detection threshold"},
          {"rho", "0.001", "defect probability per cycle"},
          {"rejection", "0.1", "post-selection rejection rate"},
          {"input", "", "JSON with precomputed fits and/or P_L"},
          seed,
          workers},
         run_resilience},
    };
}

const Command &find_command(const std::string &name) {
    static const std::vector<Command> all = commands();
    for (const auto &c : all) {
        if (c.name == name) return c;
    }
    throw std::invalid_argument("Unknown subcommand '" + name + "'.");
}

std::string env_name(const std::string &key) {
    std::string out = "SNAKES_";
    for (char c : key) out += c == '-' ? '_' : (char)std::toupper((unsigned char)c);
    return out;
}

std::string json_to_setting(const Json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto &x : v) out += (out.empty() ? "" : ",") + json_to_setting(x);
        return out;
    }
    return v.dump();
}

// key = value lines ('#' comments, [section] headers ignored) or a JSON object.
// A manifest is accepted too; its subcommand must match.
Settings read_config(const std::string &path, const std::string &subcommand) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("Cannot read config file '" + path + "'.");
    std::stringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();
    Settings out;
    if (trim(text).rfind('{', 0) == 0) {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception &e) {
            throw std::invalid_argument("Invalid JSON config " + path + ": " + e.what());
        }
        if (j.contains("subcommand") && j.contains("config")) {
            if (j["subcommand"] != subcommand) {
                throw std::invalid_argument("Manifest " + path + " belongs to '" +
                                            j["subcommand"].get<std::string>() + "'.");
            }
            j = j["config"];
        }
        for (const auto &[k, v] : j.items()) out[k] = json_to_setting(v);
        return out;
    }
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value.");
        }
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out[trim(line.substr(0, eq))] = value;
    }
    return out;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int execute(const Command &cmd, const Settings &settings, const fs::path &out) {
    fs::create_directories(out);
    RunContext ctx(cmd.name, out);
    std::string started = utc_now();
    cmd.run(Params(settings), ctx);
    Json manifest{{"subcommand", cmd.name},
                  {"config", settings},
                  {"seed", settings.count("seed") ? settings.at("seed") : ""},
                  {"code_version", SNAKES_VERSION},
                  {"started", started},
                  {"finished", utc_now()},
                  {"outputs", ctx.outputs()},
                  {"check_failed", ctx.check_failed}};
    std::ofstream f(out / ctx.manifest_name());
    if (!f) throw std::runtime_error("Cannot write manifest in " + out.string());
    f << manifest.dump(2) << '\n';
    return ctx.check_failed ? kExitCheckFailed : kExitOk;
}

Settings resolve(const Command &cmd, const std::string &config_path, const std::map<std::string, std::string> &flags,
                 const std::set<std::string> &given) {
    Settings s;
    for (const auto &o : cmd.options) s[o.key] = o.fallback;
    if (!config_path.empty()) {
        for (const auto &[k, v] : read_config(config_path, cmd.name)) {
            if (!s.count(k)) throw std::invalid_argument("Unknown key '" + k + "' for " + cmd.name + ".");
            s[k] = v;
        }
    }
    for (const auto &o : cmd.options) {
        if (const char *v = std::getenv(env_name(o.key).c_str())) s[o.key] = v;
    }
    for (const auto &k : given) s[k] = flags.at(k);
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Snake surface-code experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SNAKES_VERSION);

    auto all = commands();
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, CLI::App *> subs;
    std::map<std::string, std::string> config_paths, out_dirs;
    for (const auto &cmd : all) {
        auto *sub = app.add_subcommand(cmd.name, cmd.help);
        subs[cmd.name] = sub;
        for (const auto &o : cmd.options) {
            std::string help = o.help + (o.fallback.empty() ? "" : " [" + o.fallback + "]");
            sub->add_option("--" + o.key, flag_values[cmd.name][o.key], help);
        }
        sub->add_option("--config", config_paths[cmd.name], "config file (key = value or JSON, or a manifest)");
        out_dirs[cmd.name] = ".";
        sub->add_option("--out", out_dirs[cmd.name], "output directory [.]");
    }
    std::string manifest_path, replay_out = ".";
    auto *replay = app.add_subcommand("replay", "re-run a manifest with its recorded settings");
    replay->add_option("manifest", manifest_path, "manifest JSON")->required();
    replay->add_option("--out", replay_out, "output directory [.]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (replay->parsed()) {
            Json m = read_json_file(manifest_path, "manifest");
            if (!m.contains("subcommand") || !m.contains("config")) {
                throw std::invalid_argument(manifest_path + " is not a run manifest.");
            }
            const auto &cmd = find_command(m["subcommand"].get<std::string>());
            Settings s;
            for (const auto &o : cmd.options) s[o.key] = o.fallback;
            for (const auto &[k, v] : m["config"].items()) {
                if (!s.count(k)) throw std::invalid_argument("Unknown key '" + k + "' in manifest.");
                s[k] = json_to_setting(v);
            }
            return execute(cmd, s, replay_out);
        }
        for (const auto &cmd : all) {
            auto *sub = subs[cmd.name];
            if (!sub->parsed()) continue;
            std::set<std::string> given;
            for (const auto &o : cmd.options) {
                if (sub->count("--" + o.key) > 0) given.insert(o.key);
            }
            auto settings = resolve(cmd, config_paths[cmd.name], flag_values[cmd.name], given);
            return execute(cmd, settings, out_dirs[cmd.name]);
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
