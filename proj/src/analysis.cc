// Copyright 2026 The entfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entfilter/analysis.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "entfilter/errors.h"

namespace entfilter {

namespace {

constexpr double kConsistencyTolerance = 1e-9;

Eigen::Vector4cd kron(const Eigen::Vector2cd &a, const Eigen::Vector2cd &b) {
    Eigen::Vector4cd v;
    v << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
    return v;
}

const CorrectOutcomeRule &require_rule(Basis input, Basis output, std::optional<CorrectOutcomeRule> &storage) {
    storage = correct_outcome_rule(input, output);
    if (!storage) {
        std::ostringstream ss;
        ss << "no correct-outcome rule for " << basis_char(input) << "->" << basis_char(output);
        throw Error(ErrorKind::UndefinedFidelity, ss.str());
    }
    return *storage;
}

}  // namespace

char basis_char(Basis basis) {
    switch (basis) {
    case Basis::Z:
        return 'Z';
    case Basis::X:
        return 'X';
    case Basis::Y:
        return 'Y';
    }
    return '?';
}

std::optional<Basis> parse_basis(std::string_view text) {
    if (text == "Z" || text == "z") {
        return Basis::Z;
    }
    if (text == "X" || text == "x") {
        return Basis::X;
    }
    if (text == "Y" || text == "y") {
        return Basis::Y;
    }
    return std::nullopt;
}

std::array<Eigen::Vector2cd, 2> single_qubit_basis(Basis basis) {
    const double r = 1 / std::sqrt(2.0);
    const Complex i(0, 1);
    switch (basis) {
    case Basis::Z:
        return {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
    case Basis::X:
        return {Eigen::Vector2cd(r, r), Eigen::Vector2cd(r, -r)};
    case Basis::Y:
        return {Eigen::Vector2cd(r, r * i), Eigen::Vector2cd(r, -r * i)};
    }
    throw validation_error("unknown basis");
}

std::array<Eigen::Vector4cd, 4> two_qubit_basis(Basis basis) {
    auto b = single_qubit_basis(basis);
    return {kron(b[0], b[0]), kron(b[0], b[1]), kron(b[1], b[0]), kron(b[1], b[1])};
}

std::array<std::string, 4> two_qubit_labels(Basis basis) {
    const char *names = basis == Basis::Z ? "HV" : basis == Basis::X ? "PM" : "RL";
    std::array<std::string, 4> labels;
    for (int k = 0; k < 4; ++k) {
        labels[static_cast<std::size_t>(k)] = {names[(k >> 1) & 1], names[k & 1]};
    }
    return labels;
}

std::optional<CorrectOutcomeRule> correct_outcome_rule(Basis input, Basis output) {
    CorrectOutcomeRule rule;
    auto set = [&rule](int in, std::initializer_list<int> outs) {
        for (int o : outs) {
            rule.correct[static_cast<std::size_t>(in)][static_cast<std::size_t>(o)] = true;
        }
    };
    if (input == Basis::Z && output == Basis::Z) {
        set(0, {0});
        set(3, {3});
        return rule;
    }
    if (input == Basis::X && (output == Basis::Y || output == Basis::X)) {
        // Parallel and antiparallel groups of output states.
        std::initializer_list<int> same = {0, 3};
        std::initializer_list<int> opposite = {1, 2};
        const bool circular = output == Basis::Y;
        for (int in : {0, 3}) {
            set(in, circular ? same : opposite);
        }
        for (int in : {1, 2}) {
            set(in, circular ? opposite : same);
        }
        return rule;
    }
    return std::nullopt;
}

TruthTable truth_table(const HeraldedMap &map, Basis input, Basis output) {
    TruthTable t{input, output, Eigen::Matrix4d::Zero()};
    auto in = two_qubit_basis(input);
    auto out = two_qubit_basis(output);
    for (int k = 0; k < 4; ++k) {
        Eigen::Vector4cd transmitted = map.matrix * in[static_cast<std::size_t>(k)];
        for (int l = 0; l < 4; ++l) {
            t.entries(k, l) = std::norm(out[static_cast<std::size_t>(l)].dot(transmitted));
        }
    }
    return t;
}

TruthTable truth_table(const std::array<TwoQubitDensityMatrix, 4> &outputs, Basis input, Basis output) {
    TruthTable t{input, output, Eigen::Matrix4d::Zero()};
    auto out = two_qubit_basis(output);
    for (int k = 0; k < 4; ++k) {
        const Eigen::Matrix4cd &rho = outputs[static_cast<std::size_t>(k)].matrix;
        for (int l = 0; l < 4; ++l) {
            const auto &v = out[static_cast<std::size_t>(l)];
            t.entries(k, l) = std::max(0.0, v.dot(rho * v).real());
        }
    }
    return t;
}

double fidelity_from_table(const TruthTable &table, FidelityPooling pooling) {
    if ((table.entries.array() < 0).any()) {
        throw validation_error("truth table entries must be non-negative");
    }
    std::optional<CorrectOutcomeRule> storage;
    const CorrectOutcomeRule &rule = require_rule(table.input, table.output, storage);

    double correct_total = 0;
    double total = 0;
    double ratio_sum = 0;
    int rows = 0;
    for (int k = 0; k < 4; ++k) {
        double row_correct = 0;
        const double row_total = table.entries.row(k).sum();
        for (int l = 0; l < 4; ++l) {
            if (rule.correct[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]) {
                row_correct += table.entries(k, l);
            }
        }
        correct_total += row_correct;
        total += row_total;
        if (row_total > 0) {
            ratio_sum += row_correct / row_total;
            rows++;
        }
    }
    if (!(total > 0)) {
        throw Error(ErrorKind::UndefinedFidelity, "truth table has zero total transmission");
    }
    return pooling == FidelityPooling::Pooled ? correct_total / total : ratio_sum / rows;
}

ProcessReport process_report(double f_zz, double f_xy, double f_xx) {
    for (double f : {f_zz, f_xy, f_xx}) {
        if (!(f >= 0 && f <= 1)) {
            std::ostringstream ss;
            ss << "fidelity " << f << " lies outside [0, 1]";
            throw validation_error(ss.str());
        }
    }
    ProcessReport r;
    r.f_zz = f_zz;
    r.f_xy = f_xy;
    r.f_xx = f_xx;
    r.process_fidelity = (f_zz + f_xy + f_xx - 1) / 2;
    r.eta_zz = f_zz - r.process_fidelity;
    r.eta_xy = f_xy - r.process_fidelity;
    r.eta_xx = f_xx - r.process_fidelity;
    r.entanglement_capability = 2 * r.process_fidelity - 1;

    std::ostringstream ss;
    auto check = [&](const char *name, double value) {
        if (value < -kConsistencyTolerance) {
            if (!ss.str().empty()) {
                ss << "; ";
            }
            ss << name << " = " << value << " < 0";
        }
    };
    check("F_p", r.process_fidelity);
    check("eta_zz", r.eta_zz);
    check("eta_xy", r.eta_xy);
    check("eta_xx", r.eta_xx);
    if (!ss.str().empty()) {
        r.consistent = false;
        r.warning = "fidelities are inconsistent with the polarization-preserving process model: " + ss.str();
    }
    return r;
}

std::array<Eigen::Matrix4cd, 4> error_operators() {
    const double s = std::sqrt(2.0);
    std::array<Eigen::Matrix4cd, 4> ops;
    for (auto &op : ops) {
        op.setZero();
    }
    ops[0](0, 0) = s;
    ops[0](3, 3) = -s;
    ops[1](0, 0) = s;
    ops[1](3, 3) = s;
    ops[2](1, 1) = s;
    ops[2](2, 2) = s;
    ops[3](1, 1) = s;
    ops[3](2, 2) = -s;
    return ops;
}

Eigen::Matrix4cd apply_process(const Eigen::Matrix4cd &chi, const Eigen::Matrix4cd &rho) {
    auto ops = error_operators();
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            if (chi(n, m) != Complex(0)) {
                out += chi(n, m) * ops[static_cast<std::size_t>(n)] * rho * ops[static_cast<std::size_t>(m)].adjoint();
            }
        }
    }
    return out;
}

std::array<TwoQubitDensityMatrix, 4> process_outputs(const Eigen::Matrix4cd &chi, Basis input) {
    std::array<TwoQubitDensityMatrix, 4> out;
    auto in = two_qubit_basis(input);
    for (std::size_t k = 0; k < 4; ++k) {
        out[k].matrix = apply_process(chi, in[k] * in[k].adjoint());
    }
    return out;
}

double averaged_fidelity(const std::array<TwoQubitDensityMatrix, 4> &outputs, Basis input, Basis output) {
    std::optional<CorrectOutcomeRule> storage;
    const CorrectOutcomeRule &rule = require_rule(input, output, storage);
    auto out = two_qubit_basis(output);
    double correct = 0;
    double total = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        total += outputs[k].trace();
        for (std::size_t l = 0; l < 4; ++l) {
            if (rule.correct[k][l]) {
                correct += out[l].dot(outputs[k].matrix * out[l]).real();
            }
        }
    }
    if (!(total > 0)) {
        throw Error(ErrorKind::UndefinedFidelity, "process transmits no weight");
    }
    return correct / total;
}

double chi_fidelity(const Eigen::Matrix4cd &chi, Basis input, Basis output) {
    std::optional<CorrectOutcomeRule> storage;
    const CorrectOutcomeRule &rule = require_rule(input, output, storage);
    auto ops = error_operators();
    auto in = two_qubit_basis(input);
    auto out = two_qubit_basis(output);
    Complex sum = 0;
    for (std::size_t n = 0; n < 4; ++n) {
        for (std::size_t m = 0; m < 4; ++m) {
            Complex inner = 0;
            for (std::size_t k = 0; k < 4; ++k) {
                for (std::size_t l = 0; l < 4; ++l) {
                    if (rule.correct[k][l]) {
                        inner += out[l].dot(ops[n] * in[k]) * in[k].dot(ops[m].adjoint() * out[l]);
                    }
                }
            }
            sum += chi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) * inner / 4.0;
        }
    }
    return sum.real();
}

AssumptionCheck assumption_check(const TruthTable &zz, double threshold) {
    AssumptionCheck check;
    check.threshold = threshold;
    const double total = zz.entries.sum();
    if (total > 0) {
        double off = total - zz.entries.diagonal().sum();
        check.leakage = std::max(0.0, off) / total;
    }
    check.holds = check.leakage < threshold;
    return check;
}

double concurrence(const TwoQubitDensityMatrix &rho) {
    const double tr = rho.trace();
    if (!(tr > 0)) {
        throw validation_error("concurrence of a state with zero trace");
    }
    const Eigen::Matrix4cd r = rho.matrix / tr;
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(r * tilde, false);
    std::array<double, 4> lambda;
    for (int k = 0; k < 4; ++k) {
        lambda[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, solver.eigenvalues()[k].real()));
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

}  // namespace entfilter
