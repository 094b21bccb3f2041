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

#include "entfilter/noise.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "entfilter/errors.h"

namespace entfilter {

namespace {

void require_visibility(double v, const char *name) {
    if (!(v >= 0 && v <= 1)) {
        std::ostringstream ss;
        ss << name << " = " << v << " lies outside [0, 1]";
        throw validation_error(ss.str());
    }
}

InternalState embed(const Eigen::Vector4d &column, std::size_t dim) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (int k = 0; k < 4; ++k) {
        v[k] = column[k];
    }
    v.normalize();
    return InternalState(v);
}

}  // namespace

Eigen::Matrix4d visibility_gram(const VisibilityParams &params) {
    require_visibility(params.v_same, "v_same");
    require_visibility(params.v_cross, "v_cross");
    const double same = std::sqrt(params.v_same);
    const double cross = std::sqrt(params.v_cross);
    Eigen::Matrix4d g;
    g << 1, same, cross, cross,  //
        same, 1, cross, cross,   //
        cross, cross, 1, same,   //
        cross, cross, same, 1;
    return g;
}

PhotonEnsemble internal_states_from_visibilities(const VisibilityParams &params, std::size_t internal_dim) {
    if (internal_dim < 4) {
        throw configuration_error("the visibility model needs an internal dimension of at least 4");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(visibility_gram(params));
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kValidationTolerance) {
        std::ostringstream ss;
        ss << "visibilities (v_same=" << params.v_same << ", v_cross=" << params.v_cross
           << ") are infeasible: overlap Gram matrix has eigenvalue " << min_eig;
        throw InfeasibleVisibilities(ss.str(), min_eig);
    }
    Eigen::Vector4d root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::Matrix4d x = solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
    return {embed(x.col(0), internal_dim), embed(x.col(1), internal_dim), embed(x.col(2), internal_dim),
            embed(x.col(3), internal_dim)};
}

CircuitDocument noisy_filter_circuit(const NoiseOptions &options) {
    CircuitDocument doc = build_filter_circuit(options.variant, options.internal_dim);
    if (options.splitter_reflectance_error != 0) {
        for (auto &element : doc.circuit.elements) {
            if (auto *bs = std::get_if<BeamSplitter>(&element.kind)) {
                if (bs->reflectance_h > 0 && bs->reflectance_h < 1) {
                    bs->reflectance_h = std::clamp(bs->reflectance_h + options.splitter_reflectance_error, 0.0, 1.0);
                }
            }
        }
    }
    for (auto &detector : doc.herald.detectors) {
        detector.model = options.detector;
        detector.count = 1;
    }
    return doc;
}

std::array<TwoQubitDensityMatrix, 4> conditional_outputs(const CircuitDocument &doc, const PhotonEnsemble &photons,
                                                         Basis input) {
    std::array<TwoQubitDensityMatrix, 4> out;
    auto states = two_qubit_basis(input);
    for (std::size_t k = 0; k < 4; ++k) {
        FockState in = filter_input(doc.circuit.registry, states[k], photons);
        HeraldResult result = herald(evolve(in, doc.circuit), doc.herald);
        out[k] = output_density_matrix(result, kOutput1, kOutput2).rho;
    }
    return out;
}

NoisyTruthTables simulate_noisy_truth_tables(const VisibilityParams &params, const NoiseOptions &options) {
    const PhotonEnsemble photons = internal_states_from_visibilities(params, options.internal_dim);
    const CircuitDocument doc = noisy_filter_circuit(options);
    NoisyTruthTables t;
    t.z_outputs = conditional_outputs(doc, photons, Basis::Z);
    t.x_outputs = conditional_outputs(doc, photons, Basis::X);
    t.zz = truth_table(t.z_outputs, Basis::Z, Basis::Z);
    t.xy = truth_table(t.x_outputs, Basis::X, Basis::Y);
    t.xx = truth_table(t.x_outputs, Basis::X, Basis::X);
    return t;
}

BackgroundResult background_double_pair(const VisibilityParams &params, const NoiseOptions &options) {
    const PhotonEnsemble photons = internal_states_from_visibilities(params, options.internal_dim);
    const CircuitDocument doc = noisy_filter_circuit(options);
    const std::string a1(kAncilla1), a2(kAncilla2);
    std::vector<PhotonInput> inputs{
        {a1, Polarization::H, photons.a1},
        {a1, Polarization::H, photons.s1},
        {a2, Polarization::H, photons.a2},
        {a2, Polarization::H, photons.s2},
    };
    HeraldResult result = herald(evolve(make_fock_input(inputs, doc.circuit.registry), doc.circuit), doc.herald);
    OutputDensity density = output_density_matrix(result, kOutput1, kOutput2);

    BackgroundResult bg;
    bg.probability = density.probability;
    for (int k = 0; k < 4; ++k) {
        bg.weights[k] = std::max(0.0, density.rho.matrix(k, k).real());
    }
    if (bg.probability > 0) {
        bg.distribution = bg.weights / bg.probability;
    }
    return bg;
}

}  // namespace entfilter
