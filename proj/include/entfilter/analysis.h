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

#ifndef ENTFILTER_ANALYSIS_H
#define ENTFILTER_ANALYSIS_H

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "entfilter/engine.h"
#include "entfilter/filter.h"

namespace entfilter {

/// Z = {H, V}, X = {P, M} (diagonal/antidiagonal), Y = {R, L} (circular).
enum class Basis { Z, X, Y };

char basis_char(Basis basis);
std::optional<Basis> parse_basis(std::string_view text);

std::array<Eigen::Vector2cd, 2> single_qubit_basis(Basis basis);
/// Product states ordered |00>, |01>, |10>, |11>; the first factor is photon 1.
std::array<Eigen::Vector4cd, 4> two_qubit_basis(Basis basis);
std::array<std::string, 4> two_qubit_labels(Basis basis);

/// Entry (i, j) is the weight of output state j for input state i.
/// Probabilities when simulated, raw counts when loaded from data.
struct TruthTable {
    Basis input = Basis::Z;
    Basis output = Basis::Z;
    Eigen::Matrix4d entries = Eigen::Matrix4d::Zero();
};

/// Which outputs count as correct for each input of a measurement setting.
struct CorrectOutcomeRule {
    std::array<std::array<bool, 4>, 4> correct{};
};

/// Rules exist for Z->Z, X->Y and X->X.
std::optional<CorrectOutcomeRule> correct_outcome_rule(Basis input, Basis output);

TruthTable truth_table(const HeraldedMap &map, Basis input, Basis output);
/// `outputs[i]` is the unnormalized heralded output for the i-th input basis state.
TruthTable truth_table(const std::array<TwoQubitDensityMatrix, 4> &outputs, Basis input, Basis output);

enum class FidelityPooling {
    /// Correct weight over total transmitted weight.
    Pooled,
    /// Mean over transmitting inputs of each row's correct fraction.
    PerInput,
};

double fidelity_from_table(const TruthTable &table, FidelityPooling pooling = FidelityPooling::Pooled);

struct ProcessReport {
    double f_zz = 0;
    double f_xy = 0;
    double f_xx = 0;
    /// F_p = (f_zz + f_xy + f_xx - 1) / 2.
    double process_fidelity = 0;
    double eta_zz = 0;
    double eta_xy = 0;
    double eta_xx = 0;
    /// C = 2 F_p - 1; positive values certify an entangling operation.
    double entanglement_capability = 0;
    /// False when F_p or an eta is negative; `warning` says which.
    bool consistent = true;
    std::string warning;
};

/// Throws a validation error for fidelities outside [0, 1].
ProcessReport process_report(double f_zz, double f_xy, double f_xx);

enum class ErrorOperator { Ideal = 0, Szz = 1, Sxy = 2, Sxx = 3 };

/// S0, Szz, Sxy, Sxx in the HH, HV, VH, VV basis. Each has Hilbert-Schmidt norm squared 4.
std::array<Eigen::Matrix4cd, 4> error_operators();

/// rho -> sum_mn chi_mn S_m rho S_n^dag.
Eigen::Matrix4cd apply_process(const Eigen::Matrix4cd &chi, const Eigen::Matrix4cd &rho);

/// Outputs of the process for each basis state of `input`.
std::array<TwoQubitDensityMatrix, 4> process_outputs(const Eigen::Matrix4cd &chi, Basis input);

/// Fraction of transmitted weight found in correct outcomes, pooled over the four inputs.
double averaged_fidelity(const std::array<TwoQubitDensityMatrix, 4> &outputs, Basis input, Basis output);

/// Closed-form double sum over error operators, averaged over the input basis states.
double chi_fidelity(const Eigen::Matrix4cd &chi, Basis input, Basis output);

struct AssumptionCheck {
    /// Off-diagonal fraction of the Z->Z table.
    double leakage = 0;
    double threshold = 0.05;
    bool holds = true;
};

AssumptionCheck assumption_check(const TruthTable &zz, double threshold = 0.05);

/// Wootters concurrence of a two-qubit state; the argument is normalized first.
double concurrence(const TwoQubitDensityMatrix &rho);

}  // namespace entfilter

#endif
