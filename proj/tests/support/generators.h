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

#ifndef ENTFILTER_TESTS_SUPPORT_GENERATORS_H
#define ENTFILTER_TESTS_SUPPORT_GENERATORS_H

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entfilter/elements.h"
#include "entfilter/fock.h"

namespace entfilter::testing {

class Gen {
   public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {
    }

    int integer(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }
    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    double angle() {
        return real(-std::numbers::pi, std::numbers::pi);
    }
    std::complex<double> gaussian_complex() {
        std::normal_distribution<double> n;
        return {n(rng_), n(rng_)};
    }
    std::mt19937_64 &engine() {
        return rng_;
    }

   private:
    std::mt19937_64 rng_;
};

inline std::vector<std::string> path_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        names.push_back("p" + std::to_string(i));
    }
    return names;
}

// Splitter reflectances sometimes land exactly on 0, 1/2 or 1.
inline double reflectance(Gen &g) {
    switch (g.integer(0, 4)) {
    case 0:
        return 0.0;
    case 1:
        return 0.5;
    case 2:
        return 1.0;
    default:
        return g.real(0, 1);
    }
}

inline Element random_element(Gen &g, const std::vector<std::string> &paths) {
    const int n = static_cast<int>(paths.size());
    const std::string a = paths[static_cast<std::size_t>(g.integer(0, n - 1))];
    std::string b = a;
    if (n > 1) {
        while (b == a) {
            b = paths[static_cast<std::size_t>(g.integer(0, n - 1))];
        }
    }
    int kind = g.integer(0, 5);
    if (n == 1 && (kind == 0 || kind == 1 || kind == 5)) {
        kind = 2;
    }
    switch (kind) {
    case 0:
        return beam_splitter(a, b, reflectance(g), reflectance(g));
    case 1:
        return pbs(a, b);
    case 2:
        return half_wave_plate(a, g.angle());
    case 3:
        return quarter_wave_plate(a, g.angle());
    case 4:
        return phase_shift(a, g.angle(), g.angle());
    default:
        return path_swap(a, b);
    }
}

inline Circuit random_circuit(Gen &g, int num_paths, int num_elements, std::size_t internal_dim) {
    auto names = path_names(num_paths);
    Circuit c{make_registry(names, internal_dim), {}, {}};
    for (int i = 0; i < num_elements; ++i) {
        c.elements.push_back(random_element(g, c.registry->paths()));
    }
    return c;
}

inline std::vector<PhotonInput> random_photons(Gen &g, const ModeRegistry &reg, int count) {
    std::vector<PhotonInput> photons;
    for (int i = 0; i < count; ++i) {
        const auto &path = reg.paths()[static_cast<std::size_t>(g.integer(0, static_cast<int>(reg.num_paths()) - 1))];
        auto pol = g.integer(0, 1) ? Polarization::V : Polarization::H;
        auto k = static_cast<std::size_t>(g.integer(0, static_cast<int>(reg.internal_dim()) - 1));
        photons.push_back({path, pol, InternalState::basis(reg.internal_dim(), k)});
    }
    return photons;
}

inline Eigen::MatrixXcd random_unitary(Gen &g, int n) {
    Eigen::MatrixXcd z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            z(i, j) = g.gaussian_complex();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// Random normalized superposition of a few basis states with `photons` photons.
inline FockState random_state(Gen &g, const RegistryPtr &reg, int photons, int terms) {
    FockState s(reg);
    const int modes = static_cast<int>(reg->num_modes());
    for (int t = 0; t < terms; ++t) {
        OccupationVector occ{std::vector<int>(static_cast<std::size_t>(modes), 0)};
        for (int p = 0; p < photons; ++p) {
            occ.counts[static_cast<std::size_t>(g.integer(0, modes - 1))]++;
        }
        s.add(occ, g.gaussian_complex());
    }
    return s.normalized();
}

}  // namespace entfilter::testing

#endif
