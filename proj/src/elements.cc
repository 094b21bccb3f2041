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

#include "entfilter/elements.h"

#include <cmath>
#include <set>
#include <sstream>

#include "entfilter/errors.h"

namespace entfilter {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void require_reflectance(double r, const char *which) {
    if (!(r >= 0 && r <= 1)) {
        std::ostringstream ss;
        ss << "beam splitter reflectance " << which << "=" << r << " outside [0, 1]";
        throw validation_error(ss.str());
    }
}

void require_finite(double v, const char *what) {
    if (!std::isfinite(v)) {
        throw validation_error(std::string(what) + " must be finite");
    }
}

void set_block(Eigen::MatrixXcd &m, std::size_t path, const Eigen::Matrix2cd &jones) {
    auto base = static_cast<Eigen::Index>(2 * path);
    m.block(base, base, 2, 2) = jones;
}

}  // namespace

std::size_t port_count(const ElementKind &kind) {
    return std::visit(Overloaded{
                          [](const BeamSplitter &) { return std::size_t{2}; },
                          [](const PolarizingBeamSplitter &) { return std::size_t{2}; },
                          [](const PathSwap &) { return std::size_t{2}; },
                          [](const auto &) { return std::size_t{1}; },
                      },
                      kind);
}

std::string_view kind_name(const ElementKind &kind) {
    return std::visit(Overloaded{
                          [](const BeamSplitter &) { return std::string_view("bs"); },
                          [](const PolarizingBeamSplitter &) { return std::string_view("pbs"); },
                          [](const HalfWavePlate &) { return std::string_view("hwp"); },
                          [](const QuarterWavePlate &) { return std::string_view("qwp"); },
                          [](const PhaseShift &) { return std::string_view("phase"); },
                          [](const PathSwap &) { return std::string_view("swap"); },
                      },
                      kind);
}

bool is_partially_polarizing(const Element &element) {
    const auto *bs = std::get_if<BeamSplitter>(&element.kind);
    return bs != nullptr && bs->reflectance_h != bs->reflectance_v;
}

bool is_polarization_neutral_splitter(const Element &element) {
    const auto *bs = std::get_if<BeamSplitter>(&element.kind);
    return bs != nullptr && bs->reflectance_h == bs->reflectance_v;
}

bool is_pbs(const Element &element) {
    return std::holds_alternative<PolarizingBeamSplitter>(element.kind);
}

Element beam_splitter(std::string a, std::string b, double reflectance_h, double reflectance_v) {
    return Element{BeamSplitter{reflectance_h, reflectance_v}, {std::move(a), std::move(b)}};
}
Element pbs(std::string a, std::string b) {
    return Element{PolarizingBeamSplitter{}, {std::move(a), std::move(b)}};
}
Element half_wave_plate(std::string path, double angle) {
    return Element{HalfWavePlate{angle}, {std::move(path)}};
}
Element quarter_wave_plate(std::string path, double angle) {
    return Element{QuarterWavePlate{angle}, {std::move(path)}};
}
Element phase_shift(std::string path, double phase_h, double phase_v) {
    return Element{PhaseShift{phase_h, phase_v}, {std::move(path)}};
}
Element path_swap(std::string a, std::string b) {
    return Element{PathSwap{}, {std::move(a), std::move(b)}};
}

bool Circuit::operator==(const Circuit &other) const {
    bool same_registry = registry == other.registry || (registry && other.registry && *registry == *other.registry);
    return same_registry && elements == other.elements && inputs == other.inputs;
}

void validate_element(const Element &element, const ModeRegistry &registry) {
    std::size_t arity = port_count(element.kind);
    if (element.paths.size() != arity) {
        std::ostringstream ss;
        ss << "element '" << kind_name(element.kind) << "' binds " << arity << " path(s), got "
           << element.paths.size();
        throw configuration_error(ss.str());
    }
    for (const auto &p : element.paths) {
        registry.path_index(p);
    }
    if (arity == 2 && element.paths[0] == element.paths[1]) {
        throw configuration_error("element '" + std::string(kind_name(element.kind)) +
                                  "' must bind two distinct paths, got '" + element.paths[0] + "' twice");
    }
    std::visit(Overloaded{
                   [](const BeamSplitter &bs) {
                       require_reflectance(bs.reflectance_h, "rh");
                       require_reflectance(bs.reflectance_v, "rv");
                   },
                   [](const HalfWavePlate &w) { require_finite(w.angle, "wave plate angle"); },
                   [](const QuarterWavePlate &w) { require_finite(w.angle, "wave plate angle"); },
                   [](const PhaseShift &p) {
                       require_finite(p.phase_h, "phase");
                       require_finite(p.phase_v, "phase");
                   },
                   [](const auto &) {},
               },
               element.kind);
}

void validate_circuit(const Circuit &circuit) {
    if (!circuit.registry) {
        throw configuration_error("circuit has no mode registry");
    }
    for (const auto &e : circuit.elements) {
        validate_element(e, *circuit.registry);
    }
    std::set<std::string> seen;
    for (const auto &p : circuit.inputs) {
        circuit.registry->path_index(p);
        if (!seen.insert(p).second) {
            throw configuration_error("input path '" + p + "' listed twice");
        }
    }
}

void validate_herald(const HeraldSpec &spec, const ModeRegistry &registry) {
    std::set<std::string> detector_paths;
    for (const auto &d : spec.detectors) {
        registry.path_index(d.path);
        if (!detector_paths.insert(d.path).second) {
            throw configuration_error("detector on path '" + d.path + "' declared twice");
        }
        if (d.count < (d.model == DetectorModel::Threshold ? 1 : 0)) {
            throw validation_error("detector on path '" + d.path + "' has invalid count");
        }
    }
    std::set<std::string> output_paths;
    for (const auto &o : spec.outputs) {
        registry.path_index(o);
        if (detector_paths.contains(o)) {
            throw configuration_error("path '" + o + "' is both a detector and an output");
        }
        if (!output_paths.insert(o).second) {
            throw configuration_error("output path '" + o + "' declared twice");
        }
    }
}

Eigen::MatrixXcd element_physical_matrix(const Element &element, const ModeRegistry &registry) {
    validate_element(element, registry);
    auto p = static_cast<Eigen::Index>(2 * registry.num_paths());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(p, p);
    const Complex i{0, 1};

    auto splitter = [&](double rh, double rv) {
        auto a = static_cast<Eigen::Index>(registry.path_index(element.paths[0]));
        auto b = static_cast<Eigen::Index>(registry.path_index(element.paths[1]));
        double refl[2] = {rh, rv};
        for (Eigen::Index pol = 0; pol < 2; pol++) {
            double t = std::sqrt(1 - refl[pol]);
            double r = std::sqrt(refl[pol]);
            Eigen::Index ma = 2 * a + pol;
            Eigen::Index mb = 2 * b + pol;
            m(ma, ma) = t;
            m(mb, mb) = t;
            m(ma, mb) = i * r;
            m(mb, ma) = i * r;
        }
    };

    std::visit(Overloaded{
                   [&](const BeamSplitter &bs) { splitter(bs.reflectance_h, bs.reflectance_v); },
                   [&](const PolarizingBeamSplitter &) { splitter(0, 1); },
                   [&](const HalfWavePlate &w) {
                       double c = std::cos(2 * w.angle);
                       double s = std::sin(2 * w.angle);
                       Eigen::Matrix2cd j;
                       j << c, s, s, -c;
                       set_block(m, registry.path_index(element.paths[0]), j);
                   },
                   [&](const QuarterWavePlate &w) {
                       double c = std::cos(w.angle);
                       double s = std::sin(w.angle);
                       Eigen::Matrix2cd rot;
                       rot << c, -s, s, c;
                       Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
                       d(0, 0) = 1;
                       d(1, 1) = i;
                       set_block(m, registry.path_index(element.paths[0]), rot * d * rot.transpose());
                   },
                   [&](const PhaseShift &ps) {
                       Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
                       d(0, 0) = std::polar(1.0, ps.phase_h);
                       d(1, 1) = std::polar(1.0, ps.phase_v);
                       set_block(m, registry.path_index(element.paths[0]), d);
                   },
                   [&](const PathSwap &) {
                       auto a = static_cast<Eigen::Index>(registry.path_index(element.paths[0]));
                       auto b = static_cast<Eigen::Index>(registry.path_index(element.paths[1]));
                       for (Eigen::Index pol = 0; pol < 2; pol++) {
                           m(2 * a + pol, 2 * a + pol) = 0;
                           m(2 * b + pol, 2 * b + pol) = 0;
                           m(2 * a + pol, 2 * b + pol) = 1;
                           m(2 * b + pol, 2 * a + pol) = 1;
                       }
                   },
               },
               element.kind);
    return m;
}

ModeUnitary element_unitary(const Element &element, const RegistryPtr &registry) {
    return ModeUnitary::from_physical(registry, element_physical_matrix(element, *registry));
}

ModeUnitary compose_circuit(const Circuit &circuit) {
    validate_circuit(circuit);
    auto p = static_cast<Eigen::Index>(2 * circuit.registry->num_paths());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(p, p);
    for (const auto &e : circuit.elements) {
        total = element_physical_matrix(e, *circuit.registry) * total;
    }
    return ModeUnitary::from_physical(circuit.registry, total);
}

}  // namespace entfilter
