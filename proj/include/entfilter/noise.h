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

#ifndef ENTFILTER_NOISE_H
#define ENTFILTER_NOISE_H

#include <array>

#include <Eigen/Dense>

#include "entfilter/analysis.h"
#include "entfilter/engine.h"
#include "entfilter/errors.h"
#include "entfilter/filter.h"

namespace entfilter {

/// Hong-Ou-Mandel visibilities. `v_same` applies to s1-s2 and a1-a2, `v_cross` to every other pair.
struct VisibilityParams {
    double v_same = 0.96;
    double v_cross = 0.85;
};

struct NoiseOptions {
    FilterVariant variant = FilterVariant::Ppbs;
    DetectorModel detector = DetectorModel::Threshold;
    /// Added to the H reflectance of every partially transmitting splitter. Off by default.
    double splitter_reflectance_error = 0;
    std::size_t internal_dim = 4;
};

class InfeasibleVisibilities : public Error {
   public:
    InfeasibleVisibilities(const std::string &message, double min_eigenvalue)
        : Error(ErrorKind::InfeasibleVisibilities, message), min_eigenvalue_(min_eigenvalue) {
    }
    double min_eigenvalue() const {
        return min_eigenvalue_;
    }

   private:
    double min_eigenvalue_;
};

/// Overlap Gram matrix in the order s1, s2, a1, a2. Overlaps are sqrt(visibility).
Eigen::Matrix4d visibility_gram(const VisibilityParams &params);

/// Real internal states whose Gram matrix is visibility_gram(params).
PhotonEnsemble internal_states_from_visibilities(const VisibilityParams &params, std::size_t internal_dim = 4);

/// Built, calibrated filter with the options' detector model and splitter error applied.
CircuitDocument noisy_filter_circuit(const NoiseOptions &options);

/// Heralded, unnormalized output for each basis state of `input`.
std::array<TwoQubitDensityMatrix, 4> conditional_outputs(const CircuitDocument &doc, const PhotonEnsemble &photons,
                                                         Basis input);

struct NoisyTruthTables {
    TruthTable zz;
    TruthTable xy;
    TruthTable xx;
    std::array<TwoQubitDensityMatrix, 4> z_outputs;
    std::array<TwoQubitDensityMatrix, 4> x_outputs;
};

NoisyTruthTables simulate_noisy_truth_tables(const VisibilityParams &params, const NoiseOptions &options = {});

struct BackgroundResult {
    double probability = 0;
    /// Heralded weight of HH, HV, VH, VV.
    Eigen::Vector4d weights = Eigen::Vector4d::Zero();
    /// weights / probability, or zero when nothing is heralded.
    Eigen::Vector4d distribution = Eigen::Vector4d::Zero();
};

/// Two photons at each ancilla input, none at the signal inputs. The second photon at a1 (a2)
/// carries the internal state of s1 (s2), modeling a second pair from the same sources.
BackgroundResult background_double_pair(const VisibilityParams &params, const NoiseOptions &options = {});

}  // namespace entfilter

#endif
