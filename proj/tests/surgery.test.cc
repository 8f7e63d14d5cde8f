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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace snakes;

namespace {

constexpr double kTol = 1e-10;
const double kPi = std::numbers::pi;

using Matrix = std::vector<std::vector<cplx>>;

Matrix identity(size_t n) {
    Matrix m(n, std::vector<cplx>(n, 0));
    for (size_t i = 0; i < n; i++) {
        m[i][i] = 1;
    }
    return m;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    size_t na = a.size(), nb = b.size();
    Matrix out(na * nb, std::vector<cplx>(na * nb, 0));
    for (size_t i = 0; i < na; i++)
        for (size_t j = 0; j < na; j++)
            for (size_t k = 0; k < nb; k++)
                for (size_t l = 0; l < nb; l++) out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return out;
}

// Operator on n qubits with op on qubit q; qubit 0 is the least significant
// so the Kronecker order runs from the top qubit down.
Matrix embed(const Matrix &op, int q, int n) {
    Matrix out = identity(1);
    for (int k = n - 1; k >= 0; k--) {
        out = kron(out, k == q ? op : identity(2));
    }
    return out;
}

Matrix mul(const Matrix &a, const Matrix &b) {
    size_t n = a.size();
    Matrix out(n, std::vector<cplx>(n, 0));
    for (size_t i = 0; i < n; i++)
        for (size_t k = 0; k < n; k++)
            for (size_t j = 0; j < n; j++) out[i][j] += a[i][k] * b[k][j];
    return out;
}

std::vector<cplx> matvec(const Matrix &m, const std::vector<cplx> &v) {
    std::vector<cplx> out(v.size(), 0);
    for (size_t i = 0; i < v.size(); i++)
        for (size_t j = 0; j < v.size(); j++) out[i] += m[i][j] * v[j];
    return out;
}

const Matrix X{{0, 1}, {1, 0}};
const Matrix Z{{1, 0}, {0, -1}};
const Matrix Hd{{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}, {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}};
const Matrix P0{{1, 0}, {0, 0}};
const Matrix P1{{0, 0}, {0, 1}};

void expect_amplitudes(const PureState &s, const std::vector<cplx> &v) {
    ASSERT_EQ(s.amplitudes().size(), v.size());
    for (size_t i = 0; i < v.size(); i++) {
        EXPECT_NEAR(std::abs(s.amplitudes()[i] - v[i]), 0, 1e-12) << i;
    }
}

PureState random_state(int n, uint64_t seed) {
    PureState s = random_qubit_state(seed);
    for (int k = 1; k < n; k++) {
        s = s.tensor(random_qubit_state(seed * 31 + k));
    }
    // Entangle a little so the checks are not product-only.
    if (n > 1) {
        s.apply_h(0);
        s.apply_cnot(0, n - 1);
        s.apply_rz(n - 1, 0.37);
    }
    return s;
}

std::vector<PureState> five_states() {
    std::vector<PureState> out;
    for (uint64_t seed : {11, 22, 33, 44, 55}) {
        out.push_back(random_qubit_state(seed));
    }
    return out;
}

std::vector<double> eight_angles() {
    return {-kPi, -2.0, -0.7, -0.1, 0.0, 0.62, 2.7, kPi};
}

// Z eigen-decomposition of Rz via projectors.
Matrix rz(double phi) {
    return {{std::polar(1.0, -phi / 2), 0}, {0, std::polar(1.0, phi / 2)}};
}

PureState cnot_of(const PureState &a, const PureState &b) {
    PureState s = a.tensor(b);
    s.apply_cnot(0, 1);
    return s;
}

}  // namespace

TEST(pure_state, gates_match_matrices) {
    int n = 3;
    for (int q = 0; q < n; q++) {
        for (auto [name, op] : std::vector<std::pair<std::string, Matrix>>{{"x", X}, {"z", Z}, {"h", Hd}, {"rz", rz(0.9)}}) {
            PureState s = random_state(n, 5 + q);
            auto expected = matvec(embed(op, q, n), s.amplitudes());
            if (name == "x") s.apply_x(q);
            if (name == "z") s.apply_z(q);
            if (name == "h") s.apply_h(q);
            if (name == "rz") s.apply_rz(q, 0.9);
            expect_amplitudes(s, expected);
        }
    }
    for (int c = 0; c < n; c++) {
        for (int t = 0; t < n; t++) {
            if (c == t) continue;
            PureState s = random_state(n, 77);
            Matrix cnot = embed(P0, c, n);
            auto flip = mul(embed(P1, c, n), embed(X, t, n));
            for (size_t i = 0; i < cnot.size(); i++)
                for (size_t j = 0; j < cnot.size(); j++) cnot[i][j] += flip[i][j];
            auto expected = matvec(cnot, s.amplitudes());
            s.apply_cnot(c, t);
            expect_amplitudes(s, expected);
        }
    }
}

TEST(pure_state, xx_measurement_matches_projector) {
    int n = 3;
    for (int outcome : {0, 1}) {
        PureState s = random_state(n, 9);
        Matrix xx = mul(embed(X, 0, n), embed(X, 2, n));
        Matrix proj = identity(8);
        double sign = outcome ? -1 : 1;
        for (size_t i = 0; i < 8; i++)
            for (size_t j = 0; j < 8; j++) proj[i][j] = 0.5 * (proj[i][j] + sign * xx[i][j]);
        auto v = matvec(proj, s.amplitudes());
        double p = 0;
        for (auto &z : v) p += std::norm(z);
        for (auto &z : v) z /= std::sqrt(p);
        EXPECT_NEAR(s.measure_xx(0, 2, outcome), p, 1e-12);
        expect_amplitudes(s, v);
    }
    PureState s = random_state(n, 9);
    PureState t = s;
    EXPECT_NEAR(s.measure_xx(1, 2, 0) + t.measure_xx(1, 2, 1), 1, 1e-12);
}

TEST(pure_state, tensor_and_drop) {
    PureState a = random_qubit_state(1), b = random_qubit_state(2);
    PureState ab = a.tensor(b);
    EXPECT_NEAR(std::abs(ab.amplitudes()[2] - a.amplitudes()[0] * b.amplitudes()[1]), 0, 1e-15);
    PureState s = a.tensor(PureState(1)).tensor(b);
    EXPECT_NEAR(fidelity(s.drop_qubit(1, 0), ab), 1, 1e-12);
    EXPECT_THROW(s.drop_qubit(1, 1), std::runtime_error);
    EXPECT_THROW(PureState(13), std::invalid_argument);
    EXPECT_THROW(PureState(7).tensor(PureState(6)), std::invalid_argument);
    EXPECT_THROW(PureState::qubit(1, 1), std::invalid_argument);
    EXPECT_THROW(PureState::from_amplitudes({1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(PureState(2).apply_x(2), std::invalid_argument);
    EXPECT_THROW(PureState(2).apply_cnot(1, 1), std::invalid_argument);
}

TEST(surgery, merge_split_both_outcomes) {
    cplx a(0.6, 0.1), b(0.0, 0.0);
    b = std::sqrt(1 - std::norm(a));
    PureState psi = PureState::plus_minus(a, b);
    PureState pp = PureState::plus_minus(1, 0), mm = PureState::plus_minus(0, 1);
    auto combo = [&](const PureState &x0, const PureState &x1, const PureState &y0, const PureState &y1) {
        std::vector<cplx> v(4);
        auto u = x0.tensor(x1), w = y0.tensor(y1);
        for (int i = 0; i < 4; i++) v[i] = a * u.amplitudes()[i] + b * w.amplitudes()[i];
        return PureState::from_amplitudes(v);
    };
    for (int m : {0, 1}) {
        PureState s = psi.tensor(PureState(1));
        EXPECT_NEAR(s.measure_xx(0, 1, m), 0.5, 1e-12);
        PureState raw = m == 0 ? combo(pp, pp, mm, mm) : combo(pp, mm, mm, pp);
        EXPECT_NEAR(fidelity(s, raw), 1, 1e-12);
        if (m) s.apply_z(1);
        EXPECT_NEAR(fidelity(s, combo(pp, pp, mm, mm)), 1, 1e-12);
    }
}

TEST(surgery, single_snake_examples) {
    PureState plus = PureState::plus_minus(1, 0);
    for (auto o : all_outcomes(2)) {
        EXPECT_NEAR(fidelity(single_snake_branch(plus, false, 0, o).state, plus), 1, kTol);
    }
    PureState psi = PureState::plus_minus(0.6, 0.8);
    double total = 0;
    for (auto o : all_outcomes(2)) {
        auto run = single_snake_branch(psi, true, kPi, o);
        EXPECT_NEAR(fidelity(run.state, psi), 1, kTol);
        EXPECT_NEAR(run.trace.probability, 0.25, 1e-12);
        total += run.trace.probability;
    }
    EXPECT_NEAR(total, 1, 1e-12);
}

TEST(surgery, teleport_back_all_branches) {
    for (const auto &psi : five_states()) {
        for (double phi : eight_angles()) {
            double total = 0;
            for (auto o : all_outcomes(2)) {
                auto run = single_snake_branch(psi, true, phi, o);
                EXPECT_GE(fidelity(run.state, psi), 1 - kTol) << phi;
                total += run.trace.probability;
            }
            EXPECT_NEAR(total, 1, 1e-12);
        }
    }
}

TEST(surgery, teleport_forward_all_branches) {
    for (const auto &psi : five_states()) {
        for (double phi : eight_angles()) {
            // The head carries the defect rotation when nothing is flagged;
            // the X correction for tail outcome 1 conjugates it to Rz(-phi).
            double total = 0;
            std::vector<double> to_input;
            for (auto o : all_outcomes(2)) {
                auto run = single_snake_branch(psi, false, phi, o);
                PureState expected = psi;
                expected.apply_rz(0, o[1] ? -phi : phi);
                EXPECT_GE(fidelity(run.state, expected), 1 - kTol);
                to_input.push_back(fidelity(run.state, psi));
                total += run.trace.probability;
            }
            for (double f : to_input) {
                EXPECT_NEAR(f, to_input[0], 1e-12);
            }
            EXPECT_NEAR(total, 1, 1e-12);
        }
        for (auto o : all_outcomes(2)) {
            EXPECT_GE(fidelity(single_snake_branch(psi, false, 0, o).state, psi), 1 - kTol);
        }
    }
}

TEST(surgery, single_snake_trace) {
    auto run = single_snake_branch(random_qubit_state(3), true, 1.0, {1, 1});
    std::vector<std::string> actions;
    for (auto &s : run.trace.steps) actions.push_back(s.action);
    std::vector<std::string> expected{"grow",        "merge_xx",     "split",    "correct_z",
                                      "shuttle",     "detect_flag", "measure_head", "correct_x"};
    EXPECT_EQ(actions, expected);
    EXPECT_EQ(run.trace.steps[6].qubits, std::vector<int>{1});
    EXPECT_EQ(run.trace.steps.back().qubits, std::vector<int>{0});
    EXPECT_DOUBLE_EQ(run.trace.phi_err, 1.0);
    auto quiet = single_snake_branch(random_qubit_state(3), false, 0, {0, 0});
    EXPECT_EQ(quiet.trace.steps.size(), 6u);
}

TEST(surgery, interacting_examples) {
    PureState plus = PureState::plus_minus(1, 0);
    for (auto o : all_outcomes(4)) {
        auto run = interacting_branch(plus, plus, true, 0, o);
        EXPECT_NEAR(fidelity(run.state, plus.tensor(plus)), 1, kTol);
    }
    PureState a = random_qubit_state(101), b = random_qubit_state(202);
    for (auto o : all_outcomes(4)) {
        auto run = interacting_branch(a, b, false, 2.7, o);
        EXPECT_NEAR(fidelity(run.state, a.tensor(b)), 1, kTol);
    }
}

TEST(surgery, interacting_success_all_branches) {
    auto states = five_states();
    for (size_t i = 0; i < states.size(); i++) {
        const auto &a = states[i];
        const auto &b = states[(i + 2) % states.size()];
        PureState target = cnot_of(a, b);
        double total = 0;
        double first = -1;
        for (auto o : all_outcomes(4)) {
            auto run = interacting_branch(a, b, true, 0, o);
            double f = fidelity(run.state, target);
            EXPECT_GE(f, 1 - kTol);
            if (first < 0) first = f;
            EXPECT_NEAR(f, first, 1e-12);
            total += run.trace.probability;
        }
        EXPECT_NEAR(total, 1, 1e-12);
    }
}

TEST(surgery, interacting_failure_all_branches) {
    auto states = five_states();
    for (size_t i = 0; i < states.size(); i++) {
        const auto &a = states[i];
        const auto &b = states[(i + 1) % states.size()];
        for (double phi : eight_angles()) {
            double total = 0;
            for (auto o : all_outcomes(4)) {
                auto run = interacting_branch(a, b, false, phi, o);
                EXPECT_GE(fidelity(run.state, a.tensor(b)), 1 - kTol) << phi;
                total += run.trace.probability;
            }
            EXPECT_NEAR(total, 1, 1e-12);
        }
    }
}

TEST(surgery, interacting_corrections_follow_rule) {
    for (auto o : all_outcomes(4)) {
        auto fail = interacting_branch(random_qubit_state(5), random_qubit_state(6), false, 0.3, o);
        auto ok = interacting_branch(random_qubit_state(5), random_qubit_state(6), true, 0, o);
        int m1 = o[2], m2 = o[3];
        EXPECT_EQ(fail.trace.steps.back().outcome, 2 * m1 + (m1 + m2) % 2);
        EXPECT_EQ(ok.trace.steps.back().outcome, 2 * m1 + (m1 + m2) % 2);
    }
}

TEST(surgery, head_correction_without_m1_fails) {
    PureState a = random_qubit_state(31), b = random_qubit_state(32);
    PureState target = cnot_of(a, b);
    for (auto o : all_outcomes(4)) {
        double f = fidelity(interacting_branch_literal(a, b, 0, o).state, target);
        if (o[2] == 0) {
            EXPECT_GE(f, 1 - kTol);
        } else {
            EXPECT_LT(f, 0.99);
        }
    }
}

TEST(surgery, sampled_runs_follow_a_branch) {
    PureState a = random_qubit_state(8), b = random_qubit_state(9);
    for (uint64_t seed = 0; seed < 20; seed++) {
        auto run = run_single_snake_protocol(a, seed % 2, 0.4, seed);
        std::vector<int> o;
        for (auto &s : run.trace.steps)
            if (s.action == "merge_xx" || s.action.rfind("measure", 0) == 0) o.push_back(s.outcome);
        auto branch = single_snake_branch(a, seed % 2, 0.4, o);
        EXPECT_NEAR(fidelity(run.state, branch.state), 1, 1e-12);
        auto again = run_single_snake_protocol(a, seed % 2, 0.4, seed);
        EXPECT_EQ(again.state.amplitudes(), run.state.amplitudes());

        auto two = run_interacting_protocol(a, b, seed % 2, 0.0, seed);
        EXPECT_GE(fidelity(two.state, seed % 2 ? cnot_of(a, b) : a.tensor(b)), 1 - kTol);
    }
}

TEST(surgery, rejects_bad_input) {
    PureState psi = random_qubit_state(1);
    std::vector<cplx> bad{0.9, 0.1};
    PureState two(2);
    EXPECT_THROW(single_snake_branch(two, true, 0, {0, 0}), std::invalid_argument);
    EXPECT_THROW(single_snake_branch(psi, true, 3.5, {0, 0}), std::invalid_argument);
    EXPECT_THROW(single_snake_branch(psi, true, 0, {0}), std::invalid_argument);
    EXPECT_THROW(single_snake_branch(psi, true, 0, {0, 2}), std::invalid_argument);
    EXPECT_THROW(interacting_branch(psi, psi, true, -4, {0, 0, 0, 0}), std::invalid_argument);
    EXPECT_THROW(PureState::from_amplitudes(bad), std::invalid_argument);
}

TEST(hydra, single_head_is_split_state) {
    PureState psi = random_qubit_state(4);
    PureState h = hydra_state(1, psi);
    PureState s = psi.tensor(PureState(1));
    s.measure_xx(0, 1, 0);
    EXPECT_NEAR(fidelity(h, s), 1, 1e-12);
}

TEST(hydra, stabilised_by_adjacent_xx) {
    PureState psi = random_qubit_state(12);
    for (int k : {1, 3, 10}) {
        PureState h = hydra_state(k, psi);
        EXPECT_EQ(h.num_qubits(), k + 1);
        EXPECT_NEAR(h.norm(), 1, 1e-12);
        for (int q = 0; q < k; q++) {
            PureState t = h;
            EXPECT_NEAR(t.measure_xx(q, q + 1, 0), 1, 1e-12);
        }
    }
}

TEST(hydra, trivial_beta_is_product) {
    PureState h = hydra_state(4, PureState::plus_minus(1, 0));
    PureState plus = PureState::plus_minus(1, 0);
    PureState prod = plus;
    for (int k = 0; k < 4; k++) prod = prod.tensor(plus);
    EXPECT_NEAR(fidelity(h, prod), 1, 1e-12);
}

TEST(hydra, measuring_extra_heads_leaves_single_head) {
    PureState psi = random_qubit_state(21);
    int k = 4;
    for (int mask = 0; mask < (1 << (k - 1)); mask++) {
        PureState h = hydra_state(k, psi);
        int parity = 0;
        // Measure heads 2..k (qubits), keep tail 0 and head 1.
        for (int q = k; q >= 2; q--) {
            int m = (mask >> (q - 2)) & 1;
            EXPECT_NEAR(h.measure_z(q, m), 0.5, 1e-12);
            h = h.drop_qubit(q, m);
            parity ^= m;
        }
        if (parity) h.apply_x(0);
        EXPECT_NEAR(fidelity(h, hydra_state(1, psi)), 1, 1e-12);
    }
    EXPECT_THROW(hydra_state(0), std::invalid_argument);
    EXPECT_THROW(hydra_state(11), std::invalid_argument);
}

TEST(surgery, verify_report_covers_every_branch) {
    auto checks = verify_surgery({11, 22, 33, 44, 55}, eight_angles());
    ASSERT_EQ(checks.size(), 4u);
    EXPECT_EQ(checks[0].branches, 5 * 8 * 4);
    EXPECT_EQ(checks[1].branches, 5 * 8 * 4);
    EXPECT_EQ(checks[2].branches, 5 * 16);
    EXPECT_EQ(checks[3].branches, 5 * 8 * 16);
    for (const auto &c : checks) {
        EXPECT_GE(c.min_fidelity, 1 - kTol) << c.protocol;
        EXPECT_LT(c.probability_error, 1e-12) << c.protocol;
    }
    EXPECT_THROW(verify_surgery({}, {0.0}), std::invalid_argument);
}
