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

#ifndef ENTFILTER_ELEMENTS_H
#define ENTFILTER_ELEMENTS_H

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entfilter/fock.h"
#include "entfilter/mode_unitary.h"

namespace entfilter {

// Conventions (fixed globally):
//  * Beam splitters are symmetric with reflection phase i. Per polarization p,
//    (a, b) -> (sqrt(1-R_p) a + i sqrt(R_p) b, i sqrt(R_p) a + sqrt(1-R_p) b).
//  * A PBS is the beam splitter with R_H = 0, R_V = 1.
//  * HWP(theta) has Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]], so HWP(pi/8) maps H to P.
//  * QWP(theta) = R(theta) diag(1, i) R(-theta) with R the real rotation.
//  * Angles are radians in memory and degrees in circuit files.

struct BeamSplitter {
    double reflectance_h;
    double reflectance_v;
    bool operator==(const BeamSplitter &) const = default;
};
struct PolarizingBeamSplitter {
    bool operator==(const PolarizingBeamSplitter &) const = default;
};
struct HalfWavePlate {
    double angle;
    bool operator==(const HalfWavePlate &) const = default;
};
struct QuarterWavePlate {
    double angle;
    bool operator==(const QuarterWavePlate &) const = default;
};
struct PhaseShift {
    double phase_h;
    double phase_v;
    bool operator==(const PhaseShift &) const = default;
};
struct PathSwap {
    bool operator==(const PathSwap &) const = default;
};

using ElementKind =
    std::variant<BeamSplitter, PolarizingBeamSplitter, HalfWavePlate, QuarterWavePlate, PhaseShift, PathSwap>;

/// An optical element bound to one or two spatial paths.
struct Element {
    ElementKind kind;
    std::vector<std::string> paths;

    bool operator==(const Element &) const = default;
};

/// Number of paths an element kind binds (1 or 2).
std::size_t port_count(const ElementKind &kind);
/// Short name used in circuit files ("bs", "pbs", "hwp", "qwp", "phase", "swap").
std::string_view kind_name(const ElementKind &kind);

/// R_H != R_V beam splitter (neither neutral nor a PBS element).
bool is_partially_polarizing(const Element &element);
/// Beam splitter with identical reflectance for both polarizations.
bool is_polarization_neutral_splitter(const Element &element);
bool is_pbs(const Element &element);

Element beam_splitter(std::string a, std::string b, double reflectance_h, double reflectance_v);
Element pbs(std::string a, std::string b);
Element half_wave_plate(std::string path, double angle);
Element quarter_wave_plate(std::string path, double angle);
Element phase_shift(std::string path, double phase_h, double phase_v);
Element path_swap(std::string a, std::string b);

enum class DetectorModel { Threshold, NumberResolving };

/// Threshold: fires on >= 1 photon. Number-resolving: fires on exactly `count` photons.
struct DetectorBinding {
    std::string path;
    DetectorModel model = DetectorModel::Threshold;
    int count = 1;
    bool operator==(const DetectorBinding &) const = default;
};

/// Detector pattern signalling success, plus the monitored output paths (each >= 1 photon).
struct HeraldSpec {
    std::vector<DetectorBinding> detectors;
    std::vector<std::string> outputs;
    bool operator==(const HeraldSpec &) const = default;
};

struct Circuit {
    RegistryPtr registry;
    std::vector<Element> elements;
    std::vector<std::string> inputs;

    bool operator==(const Circuit &other) const;
};

/// A circuit together with its herald, as stored in a circuit-description file.
struct CircuitDocument {
    Circuit circuit;
    HeraldSpec herald;
    bool operator==(const CircuitDocument &) const = default;
};

/// Throws configuration/validation errors for unbound paths, bad arity or parameters.
void validate_element(const Element &element, const ModeRegistry &registry);
void validate_circuit(const Circuit &circuit);
void validate_herald(const HeraldSpec &spec, const ModeRegistry &registry);

/// Path x polarization matrix of an element, indexed by (path_idx * 2 + pol).
Eigen::MatrixXcd element_physical_matrix(const Element &element, const ModeRegistry &registry);
ModeUnitary element_unitary(const Element &element, const RegistryPtr &registry);
ModeUnitary compose_circuit(const Circuit &circuit);

}  // namespace entfilter

#endif
