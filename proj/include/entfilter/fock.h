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

#ifndef ENTFILTER_FOCK_H
#define ENTFILTER_FOCK_H

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace entfilter {

using Complex = std::complex<double>;

/// Amplitudes below this magnitude are dropped from sparse states.
constexpr double kPruneThreshold = 1e-15;
/// Tolerance used when validating norms and unitarity.
constexpr double kValidationTolerance = 1e-12;
/// Largest photon number a FockState can hold.
constexpr std::size_t kMaxPhotons = 8;
/// Largest registry size a FockState can index.
constexpr std::size_t kMaxModes = 255;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char polarization_char(Polarization pol);
std::optional<Polarization> parse_polarization(std::string_view text);

struct ModeId {
    std::string path;
    Polarization pol;
    std::size_t internal;

    bool operator==(const ModeId &other) const = default;
};

/// Canonical ordering of all optical modes of a circuit.
///
/// Modes are ordered by spatial path (lexicographic), then polarization (H before V),
/// then internal label. The internal labels span an orthonormal basis of the photons'
/// unobserved degrees of freedom (spectrum, arrival time) and are never touched by
/// optical elements.
class ModeRegistry {
   public:
    ModeRegistry(std::vector<std::string> paths, std::size_t internal_dim = 4);

    std::size_t num_paths() const {
        return paths_.size();
    }
    std::size_t num_modes() const {
        return paths_.size() * 2 * internal_dim_;
    }
    std::size_t internal_dim() const {
        return internal_dim_;
    }
    const std::vector<std::string> &paths() const {
        return paths_;
    }

    bool has_path(std::string_view path) const;
    /// Throws a configuration error for unknown paths.
    std::size_t path_index(std::string_view path) const;

    std::size_t index(std::size_t path_idx, Polarization pol, std::size_t internal) const {
        return (path_idx * 2 + static_cast<std::size_t>(pol)) * internal_dim_ + internal;
    }
    std::size_t index(std::string_view path, Polarization pol, std::size_t internal) const;

    std::size_t path_of(std::size_t mode) const {
        return mode / (2 * internal_dim_);
    }
    Polarization pol_of(std::size_t mode) const {
        return static_cast<Polarization>((mode / internal_dim_) % 2);
    }
    std::size_t internal_of(std::size_t mode) const {
        return mode % internal_dim_;
    }
    ModeId mode(std::size_t index) const;

    bool operator==(const ModeRegistry &other) const = default;

   private:
    std::vector<std::string> paths_;
    std::size_t internal_dim_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(std::vector<std::string> paths, std::size_t internal_dim = 4);

/// Normalized vector in the internal (distinguishability) space.
class InternalState {
   public:
    /// Throws a validation error unless the vector has unit norm within 1e-12.
    explicit InternalState(Eigen::VectorXcd coefficients);

    static InternalState basis(std::size_t dim, std::size_t k);

    std::size_t dim() const {
        return static_cast<std::size_t>(coefficients_.size());
    }
    const Eigen::VectorXcd &coefficients() const {
        return coefficients_;
    }
    Complex overlap(const InternalState &other) const {
        return coefficients_.dot(other.coefficients_);
    }

   private:
    Eigen::VectorXcd coefficients_;
};

struct PhotonInput {
    std::string path;
    Polarization pol;
    InternalState internal;
};

struct OccupationVector {
    std::vector<int> counts;

    int total() const;
    auto operator<=>(const OccupationVector &other) const = default;
};

/// Sorted list of the mode index of every photon in a Fock basis state. A mode
/// holding n photons appears n times.
class PhotonModes {
   public:
    PhotonModes() = default;
    explicit PhotonModes(std::uint64_t key);

    std::size_t size() const {
        return size_;
    }
    std::size_t operator[](std::size_t i) const {
        return modes_[i];
    }
    const std::uint8_t *begin() const {
        return modes_.data();
    }
    const std::uint8_t *end() const {
        return modes_.data() + size_;
    }

    /// Packs an ascending mode list into the hash key used by FockState.
    static std::uint64_t encode(std::span<const std::uint8_t> sorted_modes);

   private:
    std::array<std::uint8_t, kMaxPhotons> modes_{};
    std::size_t size_ = 0;
};

/// Sparse superposition of Fock basis states over a mode registry.
class FockState {
   public:
    explicit FockState(RegistryPtr registry);

    static FockState vacuum(RegistryPtr registry);
    static FockState basis_state(RegistryPtr registry, const OccupationVector &occupation);

    const ModeRegistry &registry() const {
        return *registry_;
    }
    const RegistryPtr &registry_ptr() const {
        return registry_;
    }

    std::size_t num_terms() const {
        return terms_.size();
    }
    bool empty() const {
        return terms_.empty();
    }
    double norm_squared() const;
    Complex amplitude(const OccupationVector &occupation) const;

    /// Adds `amplitude` to the coefficient of `occupation`.
    void add(const OccupationVector &occupation, Complex amplitude);
    void add(std::uint64_t key, Complex amplitude);

    OccupationVector occupation(std::uint64_t key) const;
    std::uint64_t key(const OccupationVector &occupation) const;

    /// Terms in canonical (lexicographic occupation) order.
    std::vector<std::pair<OccupationVector, Complex>> terms() const;
    /// Raw terms keyed by packed photon-mode lists; iteration order is unspecified.
    const std::unordered_map<std::uint64_t, Complex> &raw_terms() const {
        return terms_;
    }

    FockState scaled(Complex factor) const;
    FockState normalized() const;
    void prune();

    friend FockState operator+(const FockState &a, const FockState &b);

   private:
    RegistryPtr registry_;
    std::unordered_map<std::uint64_t, Complex> terms_;
};

class ModeUnitary;

/// Applies one creation operator per photon to the vacuum and normalizes.
FockState make_fock_input(std::span<const PhotonInput> photons, const RegistryPtr &registry);

/// Conjugate-linear in the first argument.
Complex inner_product(const FockState &a, const FockState &b);

/// Substitutes a^dag_j -> sum_k U_kj a^dag_k in every term.
FockState apply_mode_unitary(const FockState &state, const ModeUnitary &unitary);

void require_same_registry(const ModeRegistry &a, const ModeRegistry &b, const char *context);

}  // namespace entfilter

#endif
