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

#include "entfilter/filter.h"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "entfilter/errors.h"

namespace entfilter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLinearityTolerance = 1e-9;

using Environment = std::vector<std::size_t>;

std::string str(std::string_view s) {
    return std::string(s);
}

// Heralded amplitudes on the output polarizations, one vector per environment configuration.
std::map<Environment, Eigen::Vector4cd> conditional_amplitudes(const HeraldResult &result) {
    std::map<Environment, Eigen::Vector4cd> out;
    for (const auto &branch : result.branches) {
        const ModeRegistry &reg = branch.state.registry();
        const std::size_t p1 = reg.path_index(kOutput1);
        const std::size_t p2 = reg.path_index(kOutput2);
        for (const auto &[key, amp] : branch.state.raw_terms()) {
            PhotonModes modes(key);
            int n1 = 0;
            int n2 = 0;
            std::size_t pol1 = 0;
            std::size_t pol2 = 0;
            Environment env(2, 0);
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
                throw contract_error("heralded term without exactly one photon in each output");
            }
            auto [it, inserted] = out.try_emplace(env, Eigen::Vector4cd::Zero());
            it->second[static_cast<Eigen::Index>(2 * pol1 + pol2)] += amp;
        }
    }
    return out;
}

double wrap_phase(double phi) {
    return std::remainder(phi, 2 * kPi) + 0.0;
}

}  // namespace

const char *variant_name(FilterVariant variant) {
    return variant == FilterVariant::Original ? "original" : "ppbs";
}

std::optional<FilterVariant> parse_variant(std::string_view text) {
    if (text == "original") {
        return FilterVariant::Original;
    }
    if (text == "ppbs") {
        return FilterVariant::Ppbs;
    }
    return std::nullopt;
}

PhotonEnsemble ideal_ensemble(std::size_t internal_dim) {
    auto e0 = InternalState::basis(internal_dim, 0);
    return {e0, e0, e0, e0};
}

FockState filter_input(const RegistryPtr &registry, const Eigen::Vector4cd &signal, const PhotonEnsemble &photons) {
    if (std::abs(signal.norm() - 1) > kValidationTolerance) {
        throw validation_error("signal polarization state must have unit norm");
    }
    FockState total(registry);
    for (int k = 0; k < 4; ++k) {
        if (signal[k] == Complex(0)) {
            continue;
        }
        const Polarization p1 = (k & 2) ? Polarization::V : Polarization::H;
        const Polarization p2 = (k & 1) ? Polarization::V : Polarization::H;
        std::vector<PhotonInput> photons_k{
            {str(kSignal1), p1, photons.s1},
            {str(kSignal2), p2, photons.s2},
            {str(kAncilla1), Polarization::H, photons.a1},
            {str(kAncilla2), Polarization::H, photons.a2},
        };
        total = total + make_fock_input(photons_k, registry).scaled(signal[k]);
    }
    total.prune();
    return total;
}

Eigen::Matrix4cd ideal_filter_operator() {
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    s(0, 0) = 0.25;
    s(3, 3) = -0.25;
    return s;
}

CircuitDocument build_filter_circuit(FilterVariant variant, std::size_t internal_dim) {
    const std::string s1 = str(kSignal1), s2 = str(kSignal2), a1 = str(kAncilla1), a2 = str(kAncilla2);
    const std::string o1 = str(kOutput1), o2 = str(kOutput2);
    // Unmonitored ports: l1/l2 absorb the attenuated V light, v1/v2 carry V around the interferometer.
    std::vector<std::string> paths{s1, s2, a1, a2, str(kDetector1), str(kDetector2), o1, o2, "l1", "l2"};
    if (variant == FilterVariant::Original) {
        paths.insert(paths.end(), {"v1", "v2"});
    }
    auto reg = make_registry(paths, internal_dim);
    Circuit c{reg, {}, {s1, s2, a1, a2}};

    if (variant == FilterVariant::Ppbs) {
        c.elements = {
            beam_splitter(s1, s2, 0.5, 1.0),
            beam_splitter(s1, a1, 0.5, 0.0),
            beam_splitter(s2, a2, 0.5, 0.0),
            beam_splitter(s1, s2, 0.5, 1.0),
        };
    } else {
        c.elements = {
            pbs(s1, "v1"),
            pbs(s2, "v2"),
            beam_splitter(s1, s2, 0.5, 0.5),
            beam_splitter(s1, a1, 0.5, 0.5),
            beam_splitter(s2, a2, 0.5, 0.5),
            beam_splitter(s1, s2, 0.5, 0.5),
            pbs(s1, "v1"),
            pbs(s2, "v2"),
        };
    }
    // V amplitude 1/sqrt2 per arm, matching the H arms.
    c.elements.push_back(beam_splitter(s1, "l1", 0.0, 0.5));
    c.elements.push_back(beam_splitter(s2, "l2", 0.0, 0.5));
    c.elements.push_back(path_swap(a1, str(kDetector1)));
    c.elements.push_back(path_swap(a2, str(kDetector2)));
    c.elements.push_back(path_swap(s1, o1));
    c.elements.push_back(path_swap(s2, o2));
    c.elements.push_back(phase_shift(o1, 0.0, kPi));

    HeraldSpec spec{{{str(kDetector1), DetectorModel::Threshold, 1}, {str(kDetector2), DetectorModel::Threshold, 1}},
                    {o1, o2}};
    CircuitDocument doc{std::move(c), std::move(spec)};
    validate_circuit(doc.circuit);
    validate_herald(doc.herald, *reg);
    return doc;
}

HeraldedMap heralded_map(const CircuitDocument &doc) {
    const RegistryPtr &reg = doc.circuit.registry;
    const PhotonEnsemble photons = ideal_ensemble(reg->internal_dim());

    auto run = [&](const Eigen::Vector4cd &signal, double *probability) {
        HeraldResult result = herald(evolve(filter_input(reg, signal, photons), doc.circuit), doc.herald);
        if (probability != nullptr) {
            *probability = result.probability;
        }
        return conditional_amplitudes(result);
    };

    std::map<Environment, std::array<Eigen::Vector4cd, 4>> columns;
    std::vector<std::pair<std::pair<int, int>, std::map<Environment, Eigen::Vector4cd>>> pairs;
    HeraldedMap map;

    for (int k = 0; k < 4; ++k) {
        Eigen::Vector4cd e = Eigen::Vector4cd::Zero();
        e[k] = 1;
        for (const auto &[env, v] : run(e, &map.success_probability[static_cast<std::size_t>(k)])) {
            auto [it, inserted] = columns.try_emplace(env);
            if (inserted) {
                it->second.fill(Eigen::Vector4cd::Zero());
            }
            it->second[static_cast<std::size_t>(k)] = v;
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            Eigen::Vector4cd e = Eigen::Vector4cd::Zero();
            e[i] = e[j] = 1 / std::sqrt(2.0);
            pairs.push_back({{i, j}, run(e, nullptr)});
            for (const auto &[env, v] : pairs.back().second) {
                auto [it, inserted] = columns.try_emplace(env);
                if (inserted) {
                    it->second.fill(Eigen::Vector4cd::Zero());
                }
            }
        }
    }

    if (columns.size() > 1) {
        std::ostringstream ss;
        ss << "heralded output is spread over " << columns.size()
           << " distinguishable detector/environment configurations; the conditional map is not a pure operator";
        throw Error(ErrorKind::CoherenceLoss, ss.str());
    }
    if (columns.empty()) {
        return map;
    }
    const Environment env = columns.begin()->first;
    for (int k = 0; k < 4; ++k) {
        map.matrix.col(k) = columns.begin()->second[static_cast<std::size_t>(k)];
    }

    for (const auto &[ij, amplitudes] : pairs) {
        Eigen::Vector4cd predicted = (map.matrix.col(ij.first) + map.matrix.col(ij.second)) / std::sqrt(2.0);
        auto it = amplitudes.find(env);
        Eigen::Vector4cd observed = it == amplitudes.end() ? Eigen::Vector4cd::Zero() : it->second;
        map.linearity_residual = std::max(map.linearity_residual, (observed - predicted).cwiseAbs().maxCoeff());
    }
    if (map.linearity_residual > kLinearityTolerance) {
        std::ostringstream ss;
        ss << "heralded map fails linearity check (residual " << map.linearity_residual << ")";
        throw contract_error(ss.str());
    }
    return map;
}

CircuitDocument calibrate_phases(const CircuitDocument &doc) {
    HeraldedMap map = heralded_map(doc);
    const Complex hh = map.matrix(0, 0);
    const Complex vv = map.matrix(3, 3);
    if (std::abs(hh) < kValidationTolerance || std::abs(vv) < kValidationTolerance) {
        throw Error(ErrorKind::DegenerateCircuit,
                    "cannot calibrate phases: the HH or VV diagonal element of the heralded map vanishes");
    }
    const double phase_h = wrap_phase(-std::arg(hh));
    const double phase_v = wrap_phase(kPi - std::arg(vv));
    if (std::abs(phase_h) < kValidationTolerance && std::abs(phase_v) < kValidationTolerance) {
        return doc;
    }
    CircuitDocument out = doc;
    out.circuit.elements.push_back(phase_shift(str(kOutput1), phase_h, phase_v));
    return out;
}

double single_photon_blocking_check(const CircuitDocument &doc, std::string_view signal_path,
                                    double ancilla_overlap) {
    if (!(ancilla_overlap >= 0 && ancilla_overlap <= 1)) {
        throw validation_error("ancilla overlap must lie in [0, 1]");
    }
    const RegistryPtr &reg = doc.circuit.registry;
    const std::size_t d = reg->internal_dim();
    if (ancilla_overlap < 1 && d < 2) {
        throw validation_error("partial distinguishability needs an internal dimension of at least 2");
    }
    Eigen::VectorXcd sig = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    sig[0] = ancilla_overlap;
    if (d > 1) {
        sig[1] = std::sqrt(std::max(0.0, 1 - ancilla_overlap * ancilla_overlap));
    }
    sig.normalize();
    std::vector<PhotonInput> photons{
        {str(signal_path), Polarization::H, InternalState(sig)},
        {str(kAncilla1), Polarization::H, InternalState::basis(d, 0)},
        {str(kAncilla2), Polarization::H, InternalState::basis(d, 0)},
    };
    FockState out = evolve(make_fock_input(photons, reg), doc.circuit);

    std::vector<std::size_t> outputs;
    for (const auto &o : doc.herald.outputs) {
        outputs.push_back(reg->path_index(o));
    }
    double p = 0;
    for (const auto &[counts, weight] : path_count_distribution(out)) {
        bool detectors_fire = herald_accepts(HeraldSpec{doc.herald.detectors, {}}, *reg, counts);
        int in_outputs = 0;
        for (auto o : outputs) {
            in_outputs += counts[o];
        }
        if (detectors_fire && in_outputs >= 1) {
            p += weight;
        }
    }
    return p;
}

}  // namespace entfilter
