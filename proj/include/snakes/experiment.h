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

#ifndef SNAKES_EXPERIMENT_H
#define SNAKES_EXPERIMENT_H

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "snakes/angle_distribution.h"
#include "snakes/decoder.h"
#include "snakes/detection_graph.h"

namespace snakes {

struct RateEstimate {
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    int64_t shots = 0;
    /// Shots passing post-selection (equal to shots when none is applied).
    int64_t accepted = 0;
    int64_t failures = 0;
    uint64_t seed = 0;
};

/// Wilson score interval for successes out of trials.
RateEstimate wilson_interval(int64_t successes, int64_t trials, double confidence = 0.95);

enum class GapRule { kNone, kDPlus1, kDPlus3, kCustom };

struct ExperimentConfig {
    std::vector<int> distances = {3, 5, 7};
    double p = 1e-3;
    std::vector<double> omegas;
    int64_t shots = 10000;
    GapRule gap_rule = GapRule::kDPlus1;
    int custom_gmin = 0;
    uint64_t seed = 1;
    double confidence = 0.95;
    int workers = 1;
    /// Noisy round hit by the defect; -1 selects the middle noisy round.
    int defect_round = -1;
    /// Post-selection aborts when the acceptance probability drops below this.
    double acceptance_floor = 1e-4;

    ExperimentConfig();
    int gmin(int d) const;
    void validate() const;
};

/// 13 angles on [0, pi], denser around 0.3.
std::vector<double> default_omega_grid();

/// Counts per complementary-gap value.  Gaps above kMaxGap are pooled.
struct ShotTally {
    static constexpr int kMaxGap = 64;
    int64_t shots = 0;
    int64_t failures = 0;
    std::vector<int64_t> gap_shots = std::vector<int64_t>(kMaxGap + 1, 0);
    std::vector<int64_t> gap_failures = std::vector<int64_t>(kMaxGap + 1, 0);

    void merge(const ShotTally &other);
    int64_t accepted(int gmin) const;
    int64_t accepted_failures(int gmin) const;
};

/// Memory experiment over d noisy rounds plus a noiseless readout, with an
/// optional defect round.  Shots are grouped into fixed blocks whose
/// random streams derive from (seed, block index), so tallies do not
/// depend on the number of workers.
class MemoryExperiment {
   public:
    static constexpr int64_t kBlockShots = 1024;

    MemoryExperiment(int d, double p, int defect_round = -1);

    int distance() const {
        return d_;
    }
    double p() const {
        return p_;
    }
    int defect_round() const {
        return defect_round_;
    }
    const SyndromeCircuit &circuit() const {
        return *circuit_;
    }
    const DetectionGraph &graph() const {
        return *graph_;
    }

    /// Runs shots [first_shot, first_shot + count); first_shot must be a
    /// multiple of kBlockShots.
    ShotTally run(double omega, int64_t first_shot, int64_t count, uint64_t seed, int workers = 1) const;

   private:
    void run_block(double omega, int64_t block, int64_t count, uint64_t seed, ShotTally &out) const;

    int d_;
    double p_;
    int defect_round_;
    std::shared_ptr<const SyndromeCircuit> circuit_;
    std::unique_ptr<DetectionGraph> graph_;
};

/// Seed for one experiment point, mixed from the master seed and tags.
uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> tags);

RateEstimate estimate_logical_rate(const ExperimentConfig &cfg, int d, double omega);
/// Fraction of defect-free shots with complementary gap below g_min.
RateEstimate gap_rejection_rate(const ExperimentConfig &cfg, int d, int g_min);
/// Logical error rate conditioned on gap >= g_min.  Shots are redrawn until
/// cfg.shots of them are accepted.  Throws std::runtime_error when the
/// acceptance probability falls below cfg.acceptance_floor.
RateEstimate postselected_rate(const ExperimentConfig &cfg, int d, double omega, int g_min);

struct CurvePoint {
    int d;
    double omega;
    int64_t failures;
    int64_t shots;
};

struct PairCrossing {
    int d_small;
    int d_large;
    double omega;
};

struct ThresholdResult {
    bool found = false;
    double omega_th = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    /// Dephasing threshold sin^2(omega_th / 2).
    double q_th = 0;
    std::vector<PairCrossing> crossings;
    std::vector<CurvePoint> points;
};

/// Crossing of the log-rate curves: per pair of distances, straight lines
/// fitted to log(rate) around the first sign change of their difference are
/// intersected; the median over pairs is reported with a parametric
/// bootstrap interval.
ThresholdResult analyse_crossing(const std::vector<CurvePoint> &points, int bootstrap, uint64_t seed);
ThresholdResult threshold_scan(const ExperimentConfig &cfg);

struct GapAngleResult {
    int d = 0;
    int g_min = 0;
    std::vector<double> omegas;
    std::vector<RateEstimate> acceptance;
    /// Largest sampled angle with enough accepted shots.
    double last_reliable = 0;
    /// Tail model log p = tail_a - tail_b * omega^2 (unnormalised).
    double tail_a = 0;
    double tail_b = 0;
    AngleDistribution density;
};

/// p_gap(omega): acceptance probability under a uniform prior, normalised on
/// [-pi, pi], with Gaussian tails past the last reliable grid point.
GapAngleResult gap_angle_distribution(const ExperimentConfig &cfg, int d);

struct RateRow {
    int d;
    double p;
    double omega;
    int g_min;
    RateEstimate estimate;
};

void write_rate_csv(const std::string &path, const std::vector<RateRow> &rows);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

}  // namespace snakes

#endif
