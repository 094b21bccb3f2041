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

#ifndef ENTFILTER_FILTER_H
#define ENTFILTER_FILTER_H

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "entfilter/elements.h"
#include "entfilter/engine.h"

namespace entfilter {

enum class FilterVariant {
    /// Polarization-neutral splitters with PBS routing of the V components.
    Original,
    /// Partially polarizing splitters only.
    Ppbs,
};

const char *variant_name(FilterVariant variant);
std::optional<FilterVariant> parse_variant(std::string_view text);

// External ports shared by both variants.
inline constexpr std::string_view kSignal1 = "s1";
inline constexpr std::string_view kSignal2 = "s2";
inline constexpr std::string_view kAncilla1 = "a1";
inline constexpr std::string_view kAncilla2 = "a2";
inline constexpr std::string_view kDetector1 = "D1";
inline constexpr std::string_view kDetector2 = "D2";
inline constexpr std::string_view kOutput1 = "o1";
inline constexpr std::string_view kOutput2 = "o2";

/// Internal states of the two signal photons (s1, s2) and the two ancillas (a1, a2).
struct PhotonEnsemble {
    InternalState s1;
    InternalState s2;
    InternalState a1;
    InternalState a2;
};

/// Every photon in internal basis state 0.
PhotonEnsemble ideal_ensemble(std::size_t internal_dim);

/// Signal photons in the two-qubit polarization state `signal` (basis HH, HV, VH, VV),
/// plus one H ancilla at each of a1 and a2.
FockState filter_input(const RegistryPtr &registry, const Eigen::Vector4cd &signal, const PhotonEnsemble &photons);

/// The ideal heralded operator (|HH><HH| - |VV><VV|) / 4.
Eigen::Matrix4cd ideal_filter_operator();

/// Builds the calibrated filter. The herald is the four-fold coincidence D1, D2, o1, o2.
/// Both variants end with a V phase of pi on o1; calibrate_phases leaves them unchanged.
CircuitDocument build_filter_circuit(FilterVariant variant, std::size_t internal_dim = 4);

/// Conditional amplitude operator on the signal polarizations, basis {HH, HV, VH, VV}.
struct HeraldedMap {
    Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
    /// Herald probability of each basis input.
    std::array<double, 4> success_probability{};
    /// Largest deviation of the superposition inputs from linear prediction.
    double linearity_residual = 0;

    double success_probability_for(const Eigen::Vector4cd &input) const {
        return (matrix * input).squaredNorm();
    }
};

/// Reconstructs the map from the four basis inputs and the six pairwise superpositions,
/// using indistinguishable photons.
HeraldedMap heralded_map(const CircuitDocument &doc);

/// Appends a phase shifter on o1 so that <HH|M|HH> is real positive and <VV|M|VV> real negative.
/// Returns the circuit unchanged when it is already calibrated.
CircuitDocument calibrate_phases(const CircuitDocument &doc);

/// Herald probability (D1 and D2 fire, the photon reaches o1 or o2) for a single H signal photon
/// with both ancillas present. `ancilla_overlap` is the internal-state overlap between the signal
/// photon and the ancillas.
double single_photon_blocking_check(const CircuitDocument &doc, std::string_view signal_path = kSignal1,
                                    double ancilla_overlap = 1.0);

}  // namespace entfilter

#endif
