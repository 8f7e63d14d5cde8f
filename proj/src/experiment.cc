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

#include "snakes/experiment.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "snakes/noise.h"

namespace snakes {

namespace {

uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t omega_tag(double omega) {
    return (uint64_t)std::llround(omega * 1e9);
}

}  // namespace

uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> tags) {
    uint64_t state = master;
    uint64_t out = splitmix64(state);
    for (uint64_t t : tags) {
        state ^= t + 0x632BE59BD9B4E019ull;
        out ^= splitmix64(state);
    }
    return out;
}

RateEstimate wilson_interval(int64_t successes, int64_t trials, double confidence) {
    if (trials < 0 || successes < 0 || successes > trials) {
        throw std::invalid_argument("Invalid counts for a binomial interval.");
    }
    if (!(confidence > 0 && confidence < 1)) {
        throw std::invalid_argument("Confidence level must lie in (0, 1).");
    }
    RateEstimate out;
    out.shots = trials;
    out.accepted = trials;
    out.failures = successes;
    if (trials == 0) {
        out.ci_hi = 1;
        return out;
    }
    double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
    double n = (double)trials;
    double phat = successes / n;
    double denom = 1 + z * z / n;
    double centre = (phat + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
    out.rate = phat;
    out.ci_lo = std::max(0.0, std::min(phat, centre - half));
    out.ci_hi = std::min(1.0, std::max(phat, centre + half));
    return out;
}

std::vector<double> default_omega_grid() {
    return {0.0, 0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.62, 0.8, 1.2, 2.0, std::numbers::pi};
}

ExperimentConfig::ExperimentConfig() : omegas(default_omega_grid()) {
}

int ExperimentConfig::gmin(int d) const {
    switch (gap_rule) {
        case GapRule::kNone:
            return 0;
        case GapRule::kDPlus1:
            return (d + 1) / 2;
        case GapRule::kDPlus3:
            return (d + 3) / 2;
        case GapRule::kCustom:
            return custom_gmin;
    }
    return 0;
}

void ExperimentConfig::validate() const {
    if (distances.empty()) {
        throw std::invalid_argument("At least one code distance is required.");
    }
    for (int d : distances) {
        if (d < 1 || d % 2 == 0) {
            throw std::invalid_argument("Code distances must be positive and odd.");
        }
    }
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Physical error rate p must lie in [0, 1].");
    }
    for (double w : omegas) {
        if (!(std::abs(w) <= std::numbers::pi)) {
            throw std::invalid_argument("Defect angles must lie in [-pi, pi].");
        }
    }
    if (shots < 1) {
        throw std::invalid_argument("shots must be positive.");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be positive.");
    }
    if (!(confidence > 0 && confidence < 1)) {
        throw std::invalid_argument("Confidence level must lie in (0, 1).");
    }
    if (custom_gmin < 0) {
        throw std::invalid_argument("g_min must be non-negative.");
    }
}

void ShotTally::merge(const ShotTally &other) {
    shots += other.shots;
    failures += other.failures;
    for (int g = 0; g <= kMaxGap; g++) {
        gap_shots[g] += other.gap_shots[g];
        gap_failures[g] += other.gap_failures[g];
    }
}

int64_t ShotTally::accepted(int gmin) const {
    int64_t total = 0;
    for (int g = std::max(0, std::min(gmin, kMaxGap + 1)); g <= kMaxGap; g++) {
        total += gap_shots[g];
    }
    return total;
}

int64_t ShotTally::accepted_failures(int gmin) const {
    int64_t total = 0;
    for (int g = std::max(0, std::min(gmin, kMaxGap + 1)); g <= kMaxGap; g++) {
        total += gap_failures[g];
    }
    return total;
}

MemoryExperiment::MemoryExperiment(int d, double p, int defect_round)
    : d_(d),
      p_(p),
      defect_round_(defect_round < 0 ? (d - 1) / 2 : defect_round),
      circuit_(std::make_shared<const SyndromeCircuit>(build_rotated_surface_code(d), d + 1)),
      graph_(std::make_unique<DetectionGraph>(circuit_)) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Physical error rate p must lie in [0, 1].");
    }
    if (defect_round_ >= circuit_->rounds()) {
        throw std::invalid_argument("Defect round is outside the schedule.");
    }
}

void MemoryExperiment::run_block(double omega, int64_t block, int64_t count, uint64_t seed, ShotTally &out) const {
    std::seed_seq seq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)block, (uint32_t)(block >> 32)};
    std::mt19937_64 rng(seq);
    double s = std::sin(omega / 2);
    double q = s * s;
    NoiseSampler sampler(*circuit_, p_);
    MatchingDecoder decoder(*graph_);
    SyndromeBuffer buffer(*circuit_);
    Syndrome syndrome;
    auto add = [&](int site) { buffer.add(site); };
    for (int64_t k = 0; k < count; k++) {
        sampler.sample(rng, add);
        sampler.sample_defect(rng, q, defect_round_, add);
        buffer.take(syndrome);
        GapResult g = decoder.gap(syndrome.detectors);
        bool failed = (g.chosen_class == 1) != syndrome.observable;
        int bucket = std::min(g.gap, ShotTally::kMaxGap);
        out.shots++;
        out.failures += failed;
        out.gap_shots[bucket]++;
        out.gap_failures[bucket] += failed;
    }
}

ShotTally MemoryExperiment::run(double omega, int64_t first_shot, int64_t count, uint64_t seed, int workers) const {
    if (first_shot % kBlockShots != 0) {
        throw std::invalid_argument("first_shot must be a multiple of the block size.");
    }
    if (!(std::abs(omega) <= std::numbers::pi)) {
        throw std::invalid_argument("Defect angle omega must lie in [-pi, pi].");
    }
    int64_t first_block = first_shot / kBlockShots;
    int64_t num_blocks = (count + kBlockShots - 1) / kBlockShots;
    auto block_size = [&](int64_t b) { return std::min(kBlockShots, count - b * kBlockShots); };
    workers = (int)std::max<int64_t>(1, std::min<int64_t>(workers, num_blocks));
    std::vector<ShotTally> tallies(workers);
    auto work = [&](int w) {
        for (int64_t b = w; b < num_blocks; b += workers) {
            run_block(omega, first_block + b, block_size(b), seed, tallies[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; w++) {
            threads.emplace_back(work, w);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    ShotTally total;
    for (const auto &t : tallies) {
        total.merge(t);
    }
    return total;
}

RateEstimate estimate_logical_rate(const ExperimentConfig &cfg, int d, double omega) {
    cfg.validate();
    MemoryExperiment exp(d, cfg.p, cfg.defect_round);
    uint64_t seed = derive_seed(cfg.seed, {1, (uint64_t)d, omega_tag(omega)});
    ShotTally t = exp.run(omega, 0, cfg.shots, seed, cfg.workers);
    RateEstimate out = wilson_interval(t.failures, t.shots, cfg.confidence);
    out.seed = seed;
    return out;
}

RateEstimate gap_rejection_rate(const ExperimentConfig &cfg, int d, int g_min) {
    cfg.validate();
    if (g_min < 0) {
        throw std::invalid_argument("g_min must be non-negative.");
    }
    MemoryExperiment exp(d, cfg.p, cfg.defect_round);
    uint64_t seed = derive_seed(cfg.seed, {2, (uint64_t)d});
    ShotTally t = exp.run(0.0, 0, cfg.shots, seed, cfg.workers);
    RateEstimate out = wilson_interval(t.shots - t.accepted(g_min), t.shots, cfg.confidence);
    out.accepted = t.accepted(g_min);
    out.seed = seed;
    return out;
}

RateEstimate postselected_rate(const ExperimentConfig &cfg, int d, double omega, int g_min) {
    cfg.validate();
    if (g_min < 0) {
        throw std::invalid_argument("g_min must be non-negative.");
    }
    MemoryExperiment exp(d, cfg.p, cfg.defect_round);
    uint64_t seed = derive_seed(cfg.seed, {3, (uint64_t)d, omega_tag(omega)});
    ShotTally total;
    int64_t chunk = std::max<int64_t>(MemoryExperiment::kBlockShots,
                                      (cfg.shots + MemoryExperiment::kBlockShots - 1) /
                                          MemoryExperiment::kBlockShots * MemoryExperiment::kBlockShots);
    int64_t min_attempts = (int64_t)std::ceil(10.0 / cfg.acceptance_floor);
    while (total.accepted(g_min) < cfg.shots) {
        int64_t accepted = total.accepted(g_min);
        if (total.shots >= min_attempts && accepted < cfg.acceptance_floor * total.shots) {
            throw std::runtime_error("Post-selection acceptance " + std::to_string((double)accepted / total.shots) +
                                     " fell below the floor at d=" + std::to_string(d) +
                                     ", omega=" + std::to_string(omega) + ", g_min=" + std::to_string(g_min) + ".");
        }
        int64_t next = chunk;
        if (accepted > 0) {
            double acc = (double)accepted / total.shots;
            next = (int64_t)std::ceil((cfg.shots - accepted) / acc * 1.05);
            next = std::max<int64_t>(MemoryExperiment::kBlockShots, next);
            next = (next + MemoryExperiment::kBlockShots - 1) / MemoryExperiment::kBlockShots *
                   MemoryExperiment::kBlockShots;
        }
        total.merge(exp.run(omega, total.shots, next, seed, cfg.workers));
    }
    RateEstimate out = wilson_interval(total.accepted_failures(g_min), total.accepted(g_min), cfg.confidence);
    out.shots = total.shots;
    out.accepted = total.accepted(g_min);
    out.seed = seed;
    return out;
}

namespace {

double log_rate(int64_t failures, int64_t shots) {
    return std::log((failures + 0.5) / (shots + 1.0));
}

struct Line {
    double a;
    double b;
};

Line fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    double n = (double)x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < x.size(); k++) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    double den = n * sxx - sx * sx;
    double b = den == 0 ? 0 : (n * sxy - sx * sy) / den;
    return {(sy - b * sx) / n, b};
}

// Crossing of two curves sampled on a shared angle grid; NaN if none.
double pair_crossing(const std::vector<double> &omega, const std::vector<double> &small,
                     const std::vector<double> &large) {
    size_t n = omega.size();
    for (size_t i = 0; i + 1 < n; i++) {
        double d0 = large[i] - small[i];
        double d1 = large[i + 1] - small[i + 1];
        if (!(d0 < 0 && d1 >= 0)) {
            continue;
        }
        size_t lo = i > 0 ? i - 1 : i;
        size_t hi = std::min(n - 1, i + 2);
        std::vector<double> x(omega.begin() + lo, omega.begin() + hi + 1);
        Line ls = fit_line(x, std::vector<double>(small.begin() + lo, small.begin() + hi + 1));
        Line ll = fit_line(x, std::vector<double>(large.begin() + lo, large.begin() + hi + 1));
        if (ll.b != ls.b) {
            double w = (ls.a - ll.a) / (ll.b - ls.b);
            if (w >= omega[lo] && w <= omega[hi]) {
                return w;
            }
        }
        return omega[i] + (omega[i + 1] - omega[i]) * (-d0) / (d1 - d0);
    }
    return std::nan("");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Curves {
    std::vector<int> ds;
    std::vector<double> omegas;
    // logs[di][wi]
    std::vector<std::vector<double>> logs;
};

Curves build_curves(const std::vector<CurvePoint> &points) {
    Curves c;
    for (const auto &p : points) {
        if (std::find(c.ds.begin(), c.ds.end(), p.d) == c.ds.end()) {
            c.ds.push_back(p.d);
        }
        if (std::find(c.omegas.begin(), c.omegas.end(), p.omega) == c.omegas.end()) {
            c.omegas.push_back(p.omega);
        }
    }
    std::sort(c.ds.begin(), c.ds.end());
    std::sort(c.omegas.begin(), c.omegas.end());
    c.logs.assign(c.ds.size(), std::vector<double>(c.omegas.size(), std::nan("")));
    for (const auto &p : points) {
        size_t di = std::find(c.ds.begin(), c.ds.end(), p.d) - c.ds.begin();
        size_t wi = std::find(c.omegas.begin(), c.omegas.end(), p.omega) - c.omegas.begin();
        c.logs[di][wi] = log_rate(p.failures, p.shots);
    }
    for (const auto &row : c.logs) {
        for (double v : row) {
            if (std::isnan(v)) {
                throw std::invalid_argument("Every distance needs a point at every angle.");
            }
        }
    }
    return c;
}

std::vector<PairCrossing> all_crossings(const Curves &c) {
    std::vector<PairCrossing> out;
    for (size_t i = 0; i < c.ds.size(); i++) {
        for (size_t j = i + 1; j < c.ds.size(); j++) {
            double w = pair_crossing(c.omegas, c.logs[i], c.logs[j]);
            if (!std::isnan(w)) {
                out.push_back({c.ds[i], c.ds[j], w});
            }
        }
    }
    return out;
}

}  // namespace

ThresholdResult analyse_crossing(const std::vector<CurvePoint> &points, int bootstrap, uint64_t seed) {
    ThresholdResult out;
    out.points = points;
    Curves curves = build_curves(points);
    if (curves.ds.size() < 2) {
        throw std::invalid_argument("A crossing needs at least two distances.");
    }
    out.crossings = all_crossings(curves);
    if (out.crossings.empty()) {
        return out;
    }
    std::vector<double> ws;
    for (const auto &c : out.crossings) {
        ws.push_back(c.omega);
    }
    out.found = true;
    out.omega_th = median(ws);
    double s = std::sin(out.omega_th / 2);
    out.q_th = s * s;

    std::mt19937_64 rng(seed);
    std::vector<double> samples;
    for (int b = 0; b < bootstrap; b++) {
        std::vector<CurvePoint> resampled = points;
        for (auto &p : resampled) {
            double rate = (double)p.failures / p.shots;
            p.failures = std::binomial_distribution<int64_t>(p.shots, rate)(rng);
        }
        auto cs = all_crossings(build_curves(resampled));
        if (cs.empty()) {
            continue;
        }
        std::vector<double> bw;
        for (const auto &c : cs) {
            bw.push_back(c.omega);
        }
        samples.push_back(median(bw));
    }
    if (samples.size() * 2 < (size_t)bootstrap || samples.empty()) {
        out.ci_lo = out.ci_hi = std::nan("");
        return out;
    }
    std::sort(samples.begin(), samples.end());
    auto pct = [&](double f) { return samples[(size_t)std::floor(f * (samples.size() - 1))]; };
    out.ci_lo = std::min(out.omega_th, pct(0.025));
    out.ci_hi = std::max(out.omega_th, pct(0.975));
    return out;
}

ThresholdResult threshold_scan(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.distances.size() < 2) {
        throw std::invalid_argument("Threshold scans need at least two distances.");
    }
    std::vector<CurvePoint> points;
    for (int d : cfg.distances) {
        MemoryExperiment exp(d, cfg.p, cfg.defect_round);
        for (double w : cfg.omegas) {
            uint64_t seed = derive_seed(cfg.seed, {1, (uint64_t)d, omega_tag(w)});
            ShotTally t = exp.run(w, 0, cfg.shots, seed, cfg.workers);
            points.push_back({d, w, t.failures, t.shots});
        }
    }
    return analyse_crossing(points, 200, derive_seed(cfg.seed, {4}));
}

GapAngleResult gap_angle_distribution(const ExperimentConfig &cfg, int d) {
    cfg.validate();
    constexpr int64_t kMinReliableAccepted = 25;
    GapAngleResult out;
    out.d = d;
    out.g_min = cfg.gmin(d);
    out.omegas = cfg.omegas;
    std::sort(out.omegas.begin(), out.omegas.end());
    if (out.omegas.size() < 3 || out.omegas.front() != 0.0) {
        throw std::invalid_argument("p_gap needs at least three angles starting at 0.");
    }
    MemoryExperiment exp(d, cfg.p, cfg.defect_round);
    std::vector<double> xs;
    std::vector<double> logs;
    for (double w : out.omegas) {
        if (w < 0) {
            throw std::invalid_argument("p_gap angles must lie in [0, pi].");
        }
        uint64_t seed = derive_seed(cfg.seed, {5, (uint64_t)d, omega_tag(w)});
        ShotTally t = exp.run(w, 0, cfg.shots, seed, cfg.workers);
        RateEstimate acc = wilson_interval(t.accepted(out.g_min), t.shots, cfg.confidence);
        acc.accepted = t.accepted(out.g_min);
        acc.seed = seed;
        out.acceptance.push_back(acc);
        // Acceptance revives near pi, where the defect acts as a logical
        // operator; the reliable region ends at the first significant rise.
        bool rising = !xs.empty() && acc.ci_lo > out.acceptance[xs.size() - 1].rate;
        if (acc.accepted >= kMinReliableAccepted && !rising && xs.size() == out.acceptance.size() - 1) {
            xs.push_back(w);
            logs.push_back(std::log(acc.rate));
        }
    }
    if (xs.size() < 3) {
        throw std::invalid_argument("Fewer than three reliable angles for the Gaussian tail fit.");
    }
    out.last_reliable = xs.back();
    std::vector<double> x2;
    std::vector<double> y;
    for (size_t k = xs.size() - 3; k < xs.size(); k++) {
        x2.push_back(xs[k] * xs[k]);
        y.push_back(logs[k]);
    }
    Line tail = fit_line(x2, y);
    out.tail_a = tail.a;
    out.tail_b = -tail.b;
    if (out.last_reliable < std::numbers::pi && !(out.tail_b > 0)) {
        throw std::invalid_argument("Gaussian tail fit is not normalisable.");
    }

    size_t reliable = xs.size();
    auto acceptance_at = [&](double w) {
        w = std::abs(w);
        if (w > out.last_reliable) {
            return std::exp(out.tail_a - out.tail_b * w * w);
        }
        size_t k = std::upper_bound(out.omegas.begin(), out.omegas.begin() + reliable, w) - out.omegas.begin();
        if (k >= reliable) {
            return out.acceptance[reliable - 1].rate;
        }
        double t = (w - out.omegas[k - 1]) / (out.omegas[k] - out.omegas[k - 1]);
        return out.acceptance[k - 1].rate * (1 - t) + out.acceptance[k].rate * t;
    };
    out.density = AngleDistribution::tabulate(acceptance_at);
    out.density.normalize();
    return out;
}

void write_rate_csv(const std::string &path, const std::vector<RateRow> &rows) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("Cannot open " + path + " for writing.");
    }
    f << "d,p,omega,g_min,shots,accepted,failures,rate,ci_lo,ci_hi,seed\n";
    f.precision(10);
    for (const auto &r : rows) {
        const auto &e = r.estimate;
        f << r.d << ',' << r.p << ',' << r.omega << ',' << r.g_min << ',' << e.shots << ',' << e.accepted << ','
          << e.failures << ',' << e.rate << ',' << e.ci_lo << ',' << e.ci_hi << ',' << e.seed << '\n';
    }
}

nlohmann::json config_to_json(const ExperimentConfig &cfg) {
    const char *rule = cfg.gap_rule == GapRule::kNone     ? "none"
                       : cfg.gap_rule == GapRule::kDPlus1 ? "(d+1)/2"
                       : cfg.gap_rule == GapRule::kDPlus3 ? "(d+3)/2"
                                                          : "custom";
    return {{"distances", cfg.distances},
            {"p", cfg.p},
            {"omegas", cfg.omegas},
            {"shots", cfg.shots},
            {"gap_rule", rule},
            {"custom_gmin", cfg.custom_gmin},
            {"seed", cfg.seed},
            {"confidence", cfg.confidence},
            {"workers", cfg.workers},
            {"defect_round", cfg.defect_round},
            {"acceptance_floor", cfg.acceptance_floor}};
}

}  // namespace snakes
