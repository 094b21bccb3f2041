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

#ifndef ENTFILTER_ENGINE_H
#define ENTFILTER_ENGINE_H

#include <map>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "entfilter/elements.h"
#include "entfilter/fock.h"
#include "entfilter/mode_unitary.h"

namespace entfilter {

/// Conditional state for one distinguishable detector outcome.
struct HeraldBranch {
    /// Full occupation of the detector modes (polarization and internal labels included).
    OccupationVector detector_occupation;
    /// Sub-normalized state of the remaining modes; detector modes are left empty.
    FockState state;
    double weight;
};

struct HeraldResult {
    double probability = 0;
    /// Sorted by detector occupation. Branches are mutually incoherent.
    std::vector<HeraldBranch> branches;
};

/// 4x4 matrix over the polarizations of two output paths, basis order {HH, HV, VH, VV}.
struct TwoQubitDensityMatrix {
    Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();

    double trace() const {
        return matrix.trace().real();
    }
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Trace-one copy; throws a validation error for a zero matrix.
    TwoQubitDensityMatrix normalized() const;
};

struct OutputDensity {
    TwoQubitDensityMatrix rho;
    double probability;
};

FockState evolve(const FockState &state, const Circuit &circuit);

/// Permanent by Ryser's formula with Gray-code subset ordering.
Complex permanent(const Eigen::MatrixXcd &matrix);

/// Transition amplitude <out| U |in> from the permanent of the repeated-row/column submatrix.
Complex amplitude_permanent(const OccupationVector &input, const OccupationVector &output, const ModeUnitary &unitary);

/// True when the per-path photon counts satisfy every detector and output requirement.
bool herald_accepts(const HeraldSpec &spec, const ModeRegistry &registry, std::span<const int> path_counts);

HeraldResult herald(const FockState &state, const HeraldSpec &spec);

/// Traces out internal labels and any unmonitored modes of the heralded branches.
///
/// Every contributing term must hold exactly one photon in each output path; anything else is a
/// physics-contract violation (the herald spec must pre-filter such events).
OutputDensity output_density_matrix(const HeraldResult &result, std::string_view output1, std::string_view output2);

/// Probability of every per-path photon-count pattern (summed over polarization and internal labels).
std::map<std::vector<int>, double> path_count_distribution(const FockState &state);

/// Two-detector coincidence probability for one photon in each input of a 50/50 splitter whose
/// internal states overlap by `overlap`. Simulated, not evaluated in closed form.
double hom_coincidence(double overlap);

}  // namespace entfilter

#endif
