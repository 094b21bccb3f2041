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

#include "entfilter/engine.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "entfilter/errors.h"

namespace entfilter {

namespace {

double factorial(int n) {
    double r = 1;
    for (int k = 2; k <= n; k++) {
        r *= k;
    }
    return r;
}

std::vector<Eigen::Index> repeated_modes(const OccupationVector &occ) {
    std::vector<Eigen::Index> out;
    for (std::size_t m = 0; m < occ.counts.size(); m++) {
        for (int c = 0; c < occ.counts[m]; c++) {
            out.push_back(static_cast<Eigen::Index>(m));
        }
    }
    return out;
}

std::vector<int> path_counts(const PhotonModes &modes, const ModeRegistry &reg) {
    std::vector<int> counts(reg.num_paths(), 0);
    for (auto m : modes) {
        counts[reg.path_of(m)]++;
    }
    return counts;
}

}  // namespace

double TwoQubitDensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double TwoQubitDensityMatrix::min_eigenvalue() const {
    Eigen::Matrix4cd h = (matrix + matrix.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::normalized() const {
    double t = trace();
    if (!(t > 0)) {
        throw validation_error("cannot normalize a density matrix with zero trace");
    }
    return TwoQubitDensityMatrix{matrix / t};
}

FockState evolve(const FockState &state, const Circuit &circuit) {
    require_same_registry(state.registry(), *circuit.registry, "evolve");
    return apply_mode_unitary(state, compose_circuit(circuit));
}

Complex permanent(const Eigen::MatrixXcd &matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw validation_error("permanent of a non-square matrix");
    }
    const auto n = static_cast<int>(matrix.rows());
    if (n == 0) {
        return 1;
    }
    if (n > 30) {
        throw validation_error("permanent size too large");
    }
    // Ryser: per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij.
    // Subsets are visited in Gray-code order so each step adds or removes one column.
    std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{0});
    Complex total = 0;
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; k++) {
        int j = std::countr_zero(k);
        std::uint64_t bit = std::uint64_t{1} << j;
        gray ^= bit;
        double sign = (gray & bit) ? 1.0 : -1.0;
        for (int i = 0; i < n; i++) {
            row_sums[static_cast<std::size_t>(i)] += sign * matrix(i, j);
        }
        Complex prod = 1;
        for (const auto &s : row_sums) {
            prod *= s;
        }
        int parity = std::popcount(gray) & 1;
        total += ((parity ^ (n & 1)) ? -1.0 : 1.0) * prod;
    }
    return total;
}

Complex amplitude_permanent(const OccupationVector &input, const OccupationVector &output, const ModeUnitary &unitary) {
    const auto n_modes = unitary.registry().num_modes();
    if (input.counts.size() != n_modes || output.counts.size() != n_modes) {
        throw validation_error("occupation vector length does not match the unitary");
    }
    if (input.total() != output.total()) {
        std::ostringstream ss;
        ss << "photon-number mismatch: input has " << input.total() << ", output has " << output.total();
        throw validation_error(ss.str());
    }
    auto cols = repeated_modes(input);
    auto rows = repeated_modes(output);
    Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); r++) {
        for (std::size_t c = 0; c < cols.size(); c++) {
            sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = unitary.matrix()(rows[r], cols[c]);
        }
    }
    double norm = 1;
    for (int c : input.counts) {
        norm *= factorial(c);
    }
    for (int c : output.counts) {
        norm *= factorial(c);
    }
    return permanent(sub) / std::sqrt(norm);
}

bool herald_accepts(const HeraldSpec &spec, const ModeRegistry &registry, std::span<const int> counts) {
    for (const auto &d : spec.detectors) {
        int c = counts[registry.path_index(d.path)];
        bool fired = d.model == DetectorModel::Threshold ? c >= d.count : c == d.count;
        if (!fired) {
            return false;
        }
    }
    for (const auto &o : spec.outputs) {
        if (counts[registry.path_index(o)] < 1) {
            return false;
        }
    }
    return true;
}

HeraldResult herald(const FockState &state, const HeraldSpec &spec) {
    const ModeRegistry &reg = state.registry();
    validate_herald(spec, reg);

    std::vector<bool> is_detector_path(reg.num_paths(), false);
    for (const auto &d : spec.detectors) {
        is_detector_path[reg.path_index(d.path)] = true;
    }

    // Amplitudes sharing a detector-mode occupation stay coherent; distinct occupations do not.
    std::map<std::uint64_t, FockState> branches;
    for (const auto &[key, amp] : state.raw_terms()) {
        PhotonModes modes(key);
        auto counts = path_counts(modes, reg);
        if (!herald_accepts(spec, reg, counts)) {
            continue;
        }
        std::array<std::uint8_t, kMaxPhotons> det{};
        std::array<std::uint8_t, kMaxPhotons> rest{};
        std::size_t nd = 0;
        std::size_t nr = 0;
        for (auto m : modes) {
            if (is_detector_path[reg.path_of(m)]) {
                det[nd++] = m;
            } else {
                rest[nr++] = m;
            }
        }
        auto det_key = PhotonModes::encode({det.data(), nd});
        auto it = branches.try_emplace(det_key, state.registry_ptr()).first;
        it->second.add(PhotonModes::encode({rest.data(), nr}), amp);
    }

    HeraldResult result;
    for (auto &[det_key, branch_state] : branches) {
        branch_state.prune();
        double w = branch_state.norm_squared();
        if (branch_state.empty()) {
            continue;
        }
        result.probability += w;
        result.branches.push_back(HeraldBranch{branch_state.occupation(det_key), std::move(branch_state), w});
    }
    std::sort(result.branches.begin(), result.branches.end(),
              [](const HeraldBranch &a, const HeraldBranch &b) { return a.detector_occupation < b.detector_occupation; });
    return result;
}

OutputDensity output_density_matrix(const HeraldResult &result, std::string_view output1, std::string_view output2) {
    OutputDensity out{TwoQubitDensityMatrix{}, 0};
    if (result.branches.empty()) {
        return out;
    }
    const ModeRegistry &reg = result.branches.front().state.registry();
    const std::size_t p1 = reg.path_index(output1);
    const std::size_t p2 = reg.path_index(output2);
    if (p1 == p2) {
        throw configuration_error("output paths must differ");
    }

    for (const auto &branch : result.branches) {
        // Environment = internal labels of the two output photons plus every other occupied mode.
        std::map<std::vector<std::size_t>, Eigen::Vector4cd> by_environment;
        for (const auto &[key, amp] : branch.state.raw_terms()) {
            PhotonModes modes(key);
            int n1 = 0;
            int n2 = 0;
            std::size_t pol1 = 0;
            std::size_t pol2 = 0;
            std::vector<std::size_t> env(2, 0);
            for (auto m : modes) {
                std::size_t path = reg.path_of(m);
                if (path == p1) {
                    n1++;
                    pol1 = static_cast<std::size_t>(reg.pol_of(m));
                    env[0] = reg.internal_of(m);
                } else if (path == p2) {
                    n2++;
                    pol2 = static_cast<std::size_t>(reg.pol_of(m));
                    env[1] = reg.internal_of(m);
                } else {
                    env.push_back(m);
                }
            }
            if (n1 != 1 || n2 != 1) {
                std::ostringstream ss;
                ss << "heralded term has " << n1 << " photon(s) in '" << output1 << "' and " << n2 << " in '"
                   << output2 << "'; exactly one each is required";
                throw contract_error(ss.str());
            }
            auto [it, inserted] = by_environment.try_emplace(env, Eigen::Vector4cd::Zero());
            it->second[static_cast<Eigen::Index>(2 * pol1 + pol2)] += amp;
        }
        for (const auto &[env, v] : by_environment) {
            out.rho.matrix += v * v.adjoint();
        }
    }
    out.probability = out.rho.trace();
    return out;
}

std::map<std::vector<int>, double> path_count_distribution(const FockState &state) {
    std::map<std::vector<int>, double> dist;
    for (const auto &[key, amp] : state.raw_terms()) {
        dist[path_counts(PhotonModes(key), state.registry())] += std::norm(amp);
    }
    return dist;
}

double hom_coincidence(double overlap) {
    if (!(overlap >= 0 && overlap <= 1)) {
        throw validation_error("overlap must lie in [0, 1]");
    }
    auto reg = make_registry({"x", "y"}, 2);
    Eigen::VectorXcd second(2);
    second << overlap, std::sqrt(std::max(0.0, 1 - overlap * overlap));
    second.normalize();
    std::vector<PhotonInput> photons{
        {"x", Polarization::H, InternalState::basis(2, 0)},
        {"y", Polarization::H, InternalState(second)},
    };
    Circuit circuit{reg, {beam_splitter("x", "y", 0.5, 0.5)}, {"x", "y"}};
    HeraldSpec spec{{{"x", DetectorModel::Threshold, 1}, {"y", DetectorModel::Threshold, 1}}, {}};
    return herald(evolve(make_fock_input(photons, reg), circuit), spec).probability;
}

}  // namespace entfilter
