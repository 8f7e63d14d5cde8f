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

#include "snakes/surgery.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace snakes {

namespace {

constexpr double kNormTolerance = 1e-12;

void check_normalised(const PureState &s) {
    if (std::abs(s.norm() - 1) > kNormTolerance) {
        throw std::invalid_argument("Input state is not normalised.");
    }
}

void check_angle(double phi) {
    if (!(phi >= -std::numbers::pi && phi <= std::numbers::pi)) {
        throw std::invalid_argument("Defect angle must lie in [-pi, pi].");
    }
}

// Supplies the outcome of measurement number k given P(outcome = 0).
using Chooser = std::function<int(int k, double p0)>;

Chooser fixed_outcomes(const std::vector<int> &outcomes, int expected) {
    if ((int)outcomes.size() != expected) {
        throw std::invalid_argument("Expected " + std::to_string(expected) + " measurement outcomes.");
    }
    for (int m : outcomes) {
        if (m != 0 && m != 1) {
            throw std::invalid_argument("Measurement outcomes must be 0 or 1.");
        }
    }
    return [outcomes](int k, double) { return outcomes[k]; };
}

Chooser sampled_outcomes(uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](int, double p0) { return std::uniform_real_distribution<double>(0, 1)(*rng) < p0 ? 0 : 1; };
}

class Recorder {
public:
    Recorder(PureState &state, ProtocolTrace &trace, Chooser choose)
        : state_(state), trace_(trace), choose_(std::move(choose)) {}

    int measure_z(int q, const std::string &action) {
        PureState probe = state_;
        double p0 = probe.measure_z(q, 0);
        int m = choose_(count_++, p0);
        trace_.probability *= state_.measure_z(q, m);
        trace_.steps.push_back({action, {q}, m});
        return m;
    }

    int measure_xx(int a, int b, const std::string &action) {
        PureState probe = state_;
        double p0 = probe.measure_xx(a, b, 0);
        int m = choose_(count_++, p0);
        trace_.probability *= state_.measure_xx(a, b, m);
        trace_.steps.push_back({action, {a, b}, m});
        return m;
    }

    void note(const std::string &action, std::vector<int> qubits, int outcome = -1) {
        trace_.steps.push_back({action, std::move(qubits), outcome});
    }

private:
    PureState &state_;
    ProtocolTrace &trace_;
    Chooser choose_;
    int count_ = 0;
};

// Grows the snake on qubit tail into tail + head and splits it, leaving
// a|++> + b|--> once the Z frame update for a -1 merge outcome is applied.
void grow_and_split(PureState &s, Recorder &rec, int tail, int head) {
    rec.note("grow", {tail, head});
    int m = rec.measure_xx(tail, head, "merge_xx");
    rec.note("split", {tail, head});
    if (m) {
        s.apply_z(head);
        rec.note("correct_z", {head}, m);
    }
}

void shuttle(PureState &s, Recorder &rec, int head, double phi) {
    rec.note("shuttle", {head});
    if (phi != 0) {
        s.apply_rz(head, phi);
    }
}

ProtocolRun single_snake(const PureState &psi, bool defect_flag, double phi_err, Chooser choose) {
    if (psi.num_qubits() != 1) {
        throw std::invalid_argument("Single-snake protocol takes a one-qubit logical state.");
    }
    check_normalised(psi);
    check_angle(phi_err);
    ProtocolRun run{psi.tensor(PureState(1)), {}};
    run.trace.phi_err = phi_err;
    Recorder rec(run.state, run.trace, std::move(choose));
    grow_and_split(run.state, rec, 0, 1);
    shuttle(run.state, rec, 1, phi_err);
    rec.note("detect_flag", {}, defect_flag ? 1 : 0);
    int measured = defect_flag ? 1 : 0;
    int kept = 1 - measured;
    int m = rec.measure_z(measured, defect_flag ? "measure_head" : "measure_tail");
    if (m) {
        run.state.apply_x(kept);
        rec.note("correct_x", {kept}, m);
    }
    run.state = run.state.drop_qubit(measured, m);
    return run;
}

ProtocolRun interacting(const PureState &psi1, const PureState &psi2, bool success_flag, double phi_err,
                        Chooser choose, bool literal_success_rule = false) {
    if (psi1.num_qubits() != 1 || psi2.num_qubits() != 1) {
        throw std::invalid_argument("Interacting protocol takes two one-qubit logical states.");
    }
    check_normalised(psi1);
    check_normalised(psi2);
    check_angle(phi_err);
    // Qubits: 0 tail1, 1 head1, 2 tail2, 3 head2.
    ProtocolRun run{psi1.tensor(PureState(1)).tensor(psi2).tensor(PureState(1)), {}};
    run.trace.phi_err = phi_err;
    Recorder rec(run.state, run.trace, std::move(choose));
    grow_and_split(run.state, rec, 0, 1);
    grow_and_split(run.state, rec, 2, 3);
    shuttle(run.state, rec, 1, phi_err);
    shuttle(run.state, rec, 3, phi_err);
    run.state.apply_cnot(1, 3);
    rec.note("cnot", {1, 3});
    rec.note("detect_flag", {}, success_flag ? 0 : 1);
    if (success_flag) {
        int m1 = rec.measure_z(0, "measure_tail");
        int m2 = rec.measure_z(2, "measure_tail");
        if (m1) {
            run.state.apply_x(1);
        }
        // The tail outcome of snake 1 propagates through the head CNOT.
        int flip2 = literal_success_rule ? m2 : (m1 + m2) % 2;
        if (flip2) {
            run.state.apply_x(3);
        }
        rec.note("correct_x1x2", {1, 3}, 2 * m1 + flip2);
        run.state = run.state.drop_qubit(2, m2).drop_qubit(0, m1);
    } else {
        int m1 = rec.measure_z(1, "measure_head");
        int m2 = rec.measure_z(3, "measure_head");
        if (m1) {
            run.state.apply_x(0);
        }
        if ((m1 + m2) % 2) {
            run.state.apply_x(2);
        }
        rec.note("correct_x1x2", {0, 2}, 2 * m1 + (m1 + m2) % 2);
        run.state = run.state.drop_qubit(3, m2).drop_qubit(1, m1);
    }
    return run;
}

}  // namespace

PureState::PureState(int num_qubits) : n_(num_qubits) {
    if (num_qubits < 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("PureState supports 0 to 12 qubits.");
    }
    amp_.assign(size_t{1} << n_, 0);
    amp_[0] = 1;
}

PureState PureState::qubit(cplx a, cplx b) {
    PureState s(1);
    s.amp_ = {a, b};
    check_normalised(s);
    return s;
}

PureState PureState::from_amplitudes(std::vector<cplx> amp) {
    int n = 0;
    while ((size_t{1} << n) < amp.size()) {
        n++;
    }
    if (amp.empty() || (size_t{1} << n) != amp.size()) {
        throw std::invalid_argument("Amplitude count must be a power of two.");
    }
    PureState s(n);
    s.amp_ = std::move(amp);
    check_normalised(s);
    return s;
}

PureState PureState::plus_minus(cplx a, cplx b) {
    double r = std::numbers::sqrt2 / 2;
    return qubit(r * (a + b), r * (a - b));
}

double PureState::norm() const {
    double sum = 0;
    for (auto &z : amp_) {
        sum += std::norm(z);
    }
    return std::sqrt(sum);
}

void PureState::normalise() {
    double n = norm();
    if (n == 0) {
        throw std::runtime_error("Cannot normalise the zero vector.");
    }
    for (auto &z : amp_) {
        z /= n;
    }
}

PureState PureState::tensor(const PureState &other) const {
    if (n_ + other.n_ > kMaxQubits) {
        throw std::invalid_argument("PureState supports 0 to 12 qubits.");
    }
    PureState out(n_ + other.n_);
    for (size_t hi = 0; hi < other.amp_.size(); hi++) {
        for (size_t lo = 0; lo < amp_.size(); lo++) {
            out.amp_[(hi << n_) | lo] = other.amp_[hi] * amp_[lo];
        }
    }
    return out;
}

void PureState::check_qubit(int q) const {
    if (q < 0 || q >= n_) {
        throw std::invalid_argument("Qubit index out of range.");
    }
}

void PureState::apply_x(int q) {
    check_qubit(q);
    size_t bit = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & bit)) {
            std::swap(amp_[i], amp_[i | bit]);
        }
    }
}

void PureState::apply_z(int q) {
    check_qubit(q);
    size_t bit = size_t{1} << q;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (i & bit) {
            amp_[i] = -amp_[i];
        }
    }
}

void PureState::apply_h(int q) {
    check_qubit(q);
    size_t bit = size_t{1} << q;
    double r = std::numbers::sqrt2 / 2;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (!(i & bit)) {
            cplx a = amp_[i], b = amp_[i | bit];
            amp_[i] = r * (a + b);
            amp_[i | bit] = r * (a - b);
        }
    }
}

void PureState::apply_rz(int q, double phi) {
    check_qubit(q);
    size_t bit = size_t{1} << q;
    cplx lo = std::polar(1.0, -phi / 2), hi = std::polar(1.0, phi / 2);
    for (size_t i = 0; i < amp_.size(); i++) {
        amp_[i] *= (i & bit) ? hi : lo;
    }
}

void PureState::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("CNOT needs distinct qubits.");
    }
    size_t c = size_t{1} << control, t = size_t{1} << target;
    for (size_t i = 0; i < amp_.size(); i++) {
        if ((i & c) && !(i & t)) {
            std::swap(amp_[i], amp_[i | t]);
        }
    }
}

double PureState::measure_z(int q, int outcome) {
    check_qubit(q);
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("Measurement outcome must be 0 or 1.");
    }
    size_t bit = size_t{1} << q;
    double p = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        if (((i & bit) != 0) != (outcome == 1)) {
            amp_[i] = 0;
        } else {
            p += std::norm(amp_[i]);
        }
    }
    if (p > 0) {
        normalise();
    }
    return p;
}

double PureState::measure_xx(int a, int b, int outcome) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        throw std::invalid_argument("XX measurement needs distinct qubits.");
    }
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("Measurement outcome must be 0 or 1.");
    }
    // (1 + s XX) / 2 with s = (-1)^outcome.
    size_t flip = (size_t{1} << a) | (size_t{1} << b);
    double s = outcome ? -1 : 1;
    std::vector<cplx> out(amp_.size());
    double p = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        out[i] = 0.5 * (amp_[i] + s * amp_[i ^ flip]);
        p += std::norm(out[i]);
    }
    amp_ = std::move(out);
    if (p > 0) {
        normalise();
    }
    return p;
}

PureState PureState::drop_qubit(int q, int value) const {
    check_qubit(q);
    size_t bit = size_t{1} << q;
    PureState out(n_ - 1);
    double leaked = 0;
    for (size_t i = 0; i < amp_.size(); i++) {
        bool set = (i & bit) != 0;
        if (set != (value == 1)) {
            leaked += std::norm(amp_[i]);
            continue;
        }
        size_t low = i & (bit - 1);
        size_t high = (i >> (q + 1)) << q;
        out.amp_[high | low] = amp_[i];
    }
    if (leaked > 1e-20) {
        throw std::runtime_error("Dropped qubit is not in the requested Z eigenstate.");
    }
    return out;
}

double fidelity(const PureState &a, const PureState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("Fidelity needs states on the same number of qubits.");
    }
    cplx overlap = 0;
    for (size_t i = 0; i < a.amplitudes().size(); i++) {
        overlap += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return std::norm(overlap);
}

PureState random_qubit_state(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    cplx a(g(rng), g(rng)), b(g(rng), g(rng));
    double n = std::sqrt(std::norm(a) + std::norm(b));
    return PureState::qubit(a / n, b / n);
}

ProtocolRun single_snake_branch(const PureState &psi, bool defect_flag, double phi_err,
                                const std::vector<int> &outcomes) {
    return single_snake(psi, defect_flag, phi_err, fixed_outcomes(outcomes, 2));
}

ProtocolRun run_single_snake_protocol(const PureState &psi, bool defect_flag, double phi_err, uint64_t seed) {
    return single_snake(psi, defect_flag, phi_err, sampled_outcomes(seed));
}

ProtocolRun interacting_branch(const PureState &psi1, const PureState &psi2, bool success_flag, double phi_err,
                               const std::vector<int> &outcomes) {
    return interacting(psi1, psi2, success_flag, phi_err, fixed_outcomes(outcomes, 4));
}

ProtocolRun interacting_branch_literal(const PureState &psi1, const PureState &psi2, double phi_err,
                                      const std::vector<int> &outcomes) {
    return interacting(psi1, psi2, true, phi_err, fixed_outcomes(outcomes, 4), true);
}

ProtocolRun run_interacting_protocol(const PureState &psi1, const PureState &psi2, bool success_flag, double phi_err,
                                     uint64_t seed) {
    return interacting(psi1, psi2, success_flag, phi_err, sampled_outcomes(seed));
}

PureState hydra_state(int k_heads, const PureState &psi) {
    if (k_heads < 1 || k_heads > 10) {
        throw std::invalid_argument("A hydra has 1 to 10 heads.");
    }
    if (psi.num_qubits() != 1) {
        throw std::invalid_argument("Hydra input must be a one-qubit state.");
    }
    check_normalised(psi);
    // Coefficients in the X basis.
    double r = std::numbers::sqrt2 / 2;
    cplx a = r * (psi.amplitudes()[0] + psi.amplitudes()[1]);
    cplx b = r * (psi.amplitudes()[0] - psi.amplitudes()[1]);
    int n = k_heads + 1;
    PureState plus(n), minus(n);
    for (int q = 0; q < n; q++) {
        plus.apply_h(q);
        minus.apply_x(q);
        minus.apply_h(q);
    }
    std::vector<cplx> amp(plus.amplitudes().size());
    for (size_t i = 0; i < amp.size(); i++) {
        amp[i] = a * plus.amplitudes()[i] + b * minus.amplitudes()[i];
    }
    return PureState::from_amplitudes(std::move(amp));
}

std::vector<std::vector<int>> all_outcomes(int measurements) {
    if (measurements < 0 || measurements > 20) {
        throw std::invalid_argument("Outcome enumeration supports up to 20 measurements.");
    }
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << measurements); mask++) {
        std::vector<int> o(measurements);
        for (int k = 0; k < measurements; k++) {
            o[k] = (mask >> k) & 1;
        }
        out.push_back(o);
    }
    return out;
}

std::vector<SurgeryCheck> verify_surgery(const std::vector<uint64_t> &state_seeds, const std::vector<double> &angles) {
    if (state_seeds.empty() || angles.empty()) {
        throw std::invalid_argument("Surgery verification needs at least one state and one angle.");
    }
    std::vector<PureState> states;
    for (uint64_t seed : state_seeds) {
        states.push_back(random_qubit_state(seed));
    }
    std::vector<SurgeryCheck> out(4);
    out[0].protocol = "teleport_back";
    out[1].protocol = "teleport_forward";
    out[2].protocol = "interacting_success";
    out[3].protocol = "interacting_failure";
    auto record = [](SurgeryCheck &c, double f) {
        c.branches++;
        c.min_fidelity = std::min(c.min_fidelity, f);
    };
    auto close = [](SurgeryCheck &c, double total) { c.probability_error = std::max(c.probability_error, std::abs(total - 1)); };

    for (size_t i = 0; i < states.size(); i++) {
        const PureState &psi = states[i];
        const PureState &other = states[(i + 1) % states.size()];
        for (double phi : angles) {
            double back = 0, fwd = 0, fail = 0;
            for (const auto &o : all_outcomes(2)) {
                auto b = single_snake_branch(psi, true, phi, o);
                record(out[0], fidelity(b.state, psi));
                back += b.trace.probability;
                auto f = single_snake_branch(psi, false, phi, o);
                PureState target = psi;
                target.apply_rz(0, o[1] ? -phi : phi);
                record(out[1], fidelity(f.state, target));
                fwd += f.trace.probability;
            }
            for (const auto &o : all_outcomes(4)) {
                auto r = interacting_branch(psi, other, false, phi, o);
                record(out[3], fidelity(r.state, psi.tensor(other)));
                fail += r.trace.probability;
            }
            close(out[0], back);
            close(out[1], fwd);
            close(out[3], fail);
        }
        PureState target = psi.tensor(other);
        target.apply_cnot(0, 1);
        double ok = 0;
        for (const auto &o : all_outcomes(4)) {
            auto r = interacting_branch(psi, other, true, 0, o);
            record(out[2], fidelity(r.state, target));
            ok += r.trace.probability;
        }
        close(out[2], ok);
    }
    return out;
}

}  // namespace snakes
