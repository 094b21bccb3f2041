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

#include "entfilter/fock.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "entfilter/errors.h"
#include "entfilter/mode_unitary.h"

namespace entfilter {

namespace {

double factorial(int n) {
    double r = 1;
    for (int k = 2; k <= n; k++) {
        r *= k;
    }
    return r;
}

/// sqrt(prod_m n_m!) for a sorted photon-mode list.
double occupation_factor(const PhotonModes &modes) {
    double r = 1;
    std::size_t i = 0;
    while (i < modes.size()) {
        std::size_t j = i;
        while (j < modes.size() && modes[j] == modes[i]) {
            j++;
        }
        r *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return std::sqrt(r);
}

struct SparseEntry {
    std::uint8_t mode;
    Complex value;
};
using SparseColumn = std::vector<SparseEntry>;

/// Expands prod_i (sum_k column_i[k] a^dag_k) into monomial coefficients.
///
/// Coefficients are accumulated per sorted mode list (monomial), before the
/// sqrt(prod m!) conversion to normalized Fock amplitudes.
class CreationProductExpander {
   public:
    explicit CreationProductExpander(std::unordered_map<std::uint64_t, Complex> &out) : out_(out) {
    }

    void expand(std::span<const SparseColumn *const> columns, Complex prefactor) {
        columns_ = columns;
        n_ = columns.size();
        recurse(0, prefactor);
    }

   private:
    void recurse(std::size_t depth, Complex coeff) {
        if (depth == n_) {
            std::array<std::uint8_t, kMaxPhotons> sorted = chosen_;
            std::sort(sorted.begin(), sorted.begin() + n_);
            out_[PhotonModes::encode({sorted.data(), n_})] += coeff;
            return;
        }
        for (const auto &e : *columns_[depth]) {
            chosen_[depth] = e.mode;
            recurse(depth + 1, coeff * e.value);
        }
    }

    std::unordered_map<std::uint64_t, Complex> &out_;
    std::span<const SparseColumn *const> columns_;
    std::size_t n_ = 0;
    std::array<std::uint8_t, kMaxPhotons> chosen_{};
};

/// Converts monomial coefficients into normalized-basis amplitudes in place.
void monomials_to_amplitudes(std::unordered_map<std::uint64_t, Complex> &terms) {
    for (auto &[key, amp] : terms) {
        amp *= occupation_factor(PhotonModes(key));
    }
}

}  // namespace

char polarization_char(Polarization pol) {
    return pol == Polarization::H ? 'H' : 'V';
}

std::optional<Polarization> parse_polarization(std::string_view text) {
    if (text == "H" || text == "h") {
        return Polarization::H;
    }
    if (text == "V" || text == "v") {
        return Polarization::V;
    }
    return std::nullopt;
}

ModeRegistry::ModeRegistry(std::vector<std::string> paths, std::size_t internal_dim)
    : paths_(std::move(paths)), internal_dim_(internal_dim) {
    if (internal_dim_ == 0) {
        throw validation_error("internal space dimension must be at least 1");
    }
    std::sort(paths_.begin(), paths_.end());
    for (std::size_t k = 0; k < paths_.size(); k++) {
        if (paths_[k].empty()) {
            throw configuration_error("empty path name");
        }
        if (k > 0 && paths_[k] == paths_[k - 1]) {
            throw configuration_error("duplicate path '" + paths_[k] + "'");
        }
    }
}

bool ModeRegistry::has_path(std::string_view path) const {
    return std::binary_search(paths_.begin(), paths_.end(), path);
}

std::size_t ModeRegistry::path_index(std::string_view path) const {
    auto it = std::lower_bound(paths_.begin(), paths_.end(), path);
    if (it == paths_.end() || *it != path) {
        throw configuration_error("unknown path '" + std::string(path) + "'");
    }
    return static_cast<std::size_t>(it - paths_.begin());
}

std::size_t ModeRegistry::index(std::string_view path, Polarization pol, std::size_t internal) const {
    if (internal >= internal_dim_) {
        throw configuration_error("internal label " + std::to_string(internal) + " out of range");
    }
    return index(path_index(path), pol, internal);
}

ModeId ModeRegistry::mode(std::size_t index) const {
    return ModeId{paths_.at(path_of(index)), pol_of(index), internal_of(index)};
}

RegistryPtr make_registry(std::vector<std::string> paths, std::size_t internal_dim) {
    return std::make_shared<const ModeRegistry>(std::move(paths), internal_dim);
}

InternalState::InternalState(Eigen::VectorXcd coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() == 0) {
        throw validation_error("internal state must have at least one coefficient");
    }
    double norm = coefficients_.norm();
    if (std::abs(norm - 1) > kValidationTolerance) {
        std::ostringstream ss;
        ss << "internal state is not normalized (norm " << norm << ")";
        throw validation_error(ss.str());
    }
}

InternalState InternalState::basis(std::size_t dim, std::size_t k) {
    if (k >= dim) {
        throw validation_error("internal basis index out of range");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(k)] = 1;
    return InternalState(std::move(v));
}

int OccupationVector::total() const {
    int t = 0;
    for (int c : counts) {
        t += c;
    }
    return t;
}

PhotonModes::PhotonModes(std::uint64_t key) {
    while (key != 0) {
        modes_[size_++] = static_cast<std::uint8_t>((key & 0xFF) - 1);
        key >>= 8;
    }
}

std::uint64_t PhotonModes::encode(std::span<const std::uint8_t> sorted_modes) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < sorted_modes.size(); i++) {
        key |= static_cast<std::uint64_t>(sorted_modes[i] + 1) << (8 * i);
    }
    return key;
}

FockState::FockState(RegistryPtr registry) : registry_(std::move(registry)) {
    if (!registry_) {
        throw configuration_error("FockState requires a registry");
    }
    if (registry_->num_modes() > kMaxModes) {
        throw configuration_error("registry has " + std::to_string(registry_->num_modes()) +
                                  " modes; at most " + std::to_string(kMaxModes) + " are supported");
    }
}

FockState FockState::vacuum(RegistryPtr registry) {
    FockState s(std::move(registry));
    s.terms_[0] = 1;
    return s;
}

FockState FockState::basis_state(RegistryPtr registry, const OccupationVector &occupation) {
    FockState s(std::move(registry));
    s.add(occupation, 1);
    return s;
}

double FockState::norm_squared() const {
    double n = 0;
    for (const auto &[k, a] : terms_) {
        n += std::norm(a);
    }
    return n;
}

std::uint64_t FockState::key(const OccupationVector &occupation) const {
    if (occupation.counts.size() != registry_->num_modes()) {
        throw validation_error("occupation vector length does not match the registry");
    }
    std::array<std::uint8_t, kMaxPhotons> modes{};
    std::size_t n = 0;
    for (std::size_t m = 0; m < occupation.counts.size(); m++) {
        if (occupation.counts[m] < 0) {
            throw validation_error("negative occupation");
        }
        for (int c = 0; c < occupation.counts[m]; c++) {
            if (n == kMaxPhotons) {
                throw validation_error("too many photons for a FockState");
            }
            modes[n++] = static_cast<std::uint8_t>(m);
        }
    }
    return PhotonModes::encode({modes.data(), n});
}

OccupationVector FockState::occupation(std::uint64_t key) const {
    OccupationVector occ{std::vector<int>(registry_->num_modes(), 0)};
    for (auto m : PhotonModes(key)) {
        occ.counts[m]++;
    }
    return occ;
}

Complex FockState::amplitude(const OccupationVector &occupation) const {
    auto it = terms_.find(key(occupation));
    return it == terms_.end() ? Complex{0} : it->second;
}

void FockState::add(const OccupationVector &occupation, Complex amplitude) {
    add(key(occupation), amplitude);
}

void FockState::add(std::uint64_t key, Complex amplitude) {
    terms_[key] += amplitude;
}

std::vector<std::pair<OccupationVector, Complex>> FockState::terms() const {
    std::vector<std::pair<OccupationVector, Complex>> out;
    out.reserve(terms_.size());
    for (const auto &[k, a] : terms_) {
        out.emplace_back(occupation(k), a);
    }
    std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    return out;
}

FockState FockState::scaled(Complex factor) const {
    FockState s(registry_);
    for (const auto &[k, a] : terms_) {
        s.terms_[k] = a * factor;
    }
    s.prune();
    return s;
}

FockState FockState::normalized() const {
    double n = std::sqrt(norm_squared());
    if (n == 0) {
        throw validation_error("cannot normalize the zero vector");
    }
    return scaled(1.0 / n);
}

void FockState::prune() {
    std::erase_if(terms_, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

FockState operator+(const FockState &a, const FockState &b) {
    require_same_registry(a.registry(), b.registry(), "state addition");
    FockState s = a;
    for (const auto &[k, amp] : b.terms_) {
        s.terms_[k] += amp;
    }
    s.prune();
    return s;
}

void require_same_registry(const ModeRegistry &a, const ModeRegistry &b, const char *context) {
    if (&a != &b && !(a == b)) {
        throw validation_error(std::string("registry mismatch in ") + context);
    }
}

FockState make_fock_input(std::span<const PhotonInput> photons, const RegistryPtr &registry) {
    if (photons.size() > kMaxPhotons) {
        throw validation_error("too many photons for a FockState");
    }
    FockState state(registry);
    std::vector<SparseColumn> operators;
    operators.reserve(photons.size());
    for (const auto &p : photons) {
        std::size_t path = registry->path_index(p.path);
        if (p.internal.dim() != registry->internal_dim()) {
            throw validation_error("internal state of photon at '" + p.path + "' has dimension " +
                                   std::to_string(p.internal.dim()) + ", registry expects " +
                                   std::to_string(registry->internal_dim()));
        }
        SparseColumn col;
        for (std::size_t k = 0; k < p.internal.dim(); k++) {
            Complex c = p.internal.coefficients()[static_cast<Eigen::Index>(k)];
            if (std::abs(c) > kPruneThreshold) {
                col.push_back({static_cast<std::uint8_t>(registry->index(path, p.pol, k)), c});
            }
        }
        operators.push_back(std::move(col));
    }
    std::vector<const SparseColumn *> ptrs;
    for (const auto &c : operators) {
        ptrs.push_back(&c);
    }

    std::unordered_map<std::uint64_t, Complex> terms;
    CreationProductExpander(terms).expand(ptrs, 1.0);
    monomials_to_amplitudes(terms);
    for (const auto &[k, a] : terms) {
        state.add(k, a);
    }
    state.prune();
    return state.normalized();
}

Complex inner_product(const FockState &a, const FockState &b) {
    require_same_registry(a.registry(), b.registry(), "inner product");
    const auto &small = a.num_terms() <= b.num_terms() ? a.raw_terms() : b.raw_terms();
    const auto &large = a.num_terms() <= b.num_terms() ? b.raw_terms() : a.raw_terms();
    bool a_is_small = a.num_terms() <= b.num_terms();
    Complex r = 0;
    for (const auto &[k, amp] : small) {
        auto it = large.find(k);
        if (it == large.end()) {
            continue;
        }
        r += a_is_small ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return r;
}

FockState apply_mode_unitary(const FockState &state, const ModeUnitary &unitary) {
    require_same_registry(state.registry(), unitary.registry(), "apply_mode_unitary");
    const Eigen::MatrixXcd &u = unitary.matrix();
    const auto n_modes = static_cast<std::size_t>(u.rows());

    std::vector<SparseColumn> columns(n_modes);
    std::vector<bool> built(n_modes, false);
    auto column = [&](std::size_t j) -> const SparseColumn * {
        if (!built[j]) {
            for (std::size_t k = 0; k < n_modes; k++) {
                Complex v = u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
                if (std::abs(v) > kPruneThreshold) {
                    columns[j].push_back({static_cast<std::uint8_t>(k), v});
                }
            }
            built[j] = true;
        }
        return &columns[j];
    };

    std::unordered_map<std::uint64_t, Complex> out;
    CreationProductExpander expander(out);
    std::vector<const SparseColumn *> ptrs;
    for (const auto &[key, amp] : state.raw_terms()) {
        PhotonModes modes(key);
        ptrs.clear();
        for (auto m : modes) {
            ptrs.push_back(column(m));
        }
        expander.expand(ptrs, amp / occupation_factor(modes));
    }
    monomials_to_amplitudes(out);

    FockState result(state.registry_ptr());
    for (const auto &[k, a] : out) {
        result.add(k, a);
    }
    result.prune();
    return result;
}

}  // namespace entfilter
