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

#include "entfilter/mode_unitary.h"

#include <sstream>

#include "entfilter/errors.h"

namespace entfilter {

double unitarity_error(const Eigen::MatrixXcd &matrix) {
    if (matrix.rows() != matrix.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::MatrixXcd d = matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
    return d.cwiseAbs().maxCoeff();
}

ModeUnitary::ModeUnitary(RegistryPtr registry, Eigen::MatrixXcd matrix)
    : registry_(std::move(registry)), matrix_(std::move(matrix)) {
    auto n = static_cast<Eigen::Index>(registry_->num_modes());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        std::ostringstream ss;
        ss << "mode unitary is " << matrix_.rows() << "x" << matrix_.cols() << ", registry has " << n << " modes";
        throw validation_error(ss.str());
    }
    double err = unitarity_error(matrix_);
    if (err > kValidationTolerance) {
        std::ostringstream ss;
        ss << "matrix is not unitary (max |U^dag U - I| = " << err << ")";
        throw validation_error(ss.str());
    }
}

ModeUnitary ModeUnitary::identity(RegistryPtr registry) {
    auto n = static_cast<Eigen::Index>(registry->num_modes());
    return ModeUnitary(std::move(registry), Eigen::MatrixXcd::Identity(n, n));
}

ModeUnitary ModeUnitary::from_physical(RegistryPtr registry, const Eigen::MatrixXcd &physical) {
    auto p = static_cast<Eigen::Index>(2 * registry->num_paths());
    if (physical.rows() != p || physical.cols() != p) {
        throw validation_error("physical matrix does not match 2 x number of paths");
    }
    auto d = static_cast<Eigen::Index>(registry->internal_dim());
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(p * d, p * d);
    for (Eigen::Index r = 0; r < p; r++) {
        for (Eigen::Index c = 0; c < p; c++) {
            if (physical(r, c) == Complex{0}) {
                continue;
            }
            for (Eigen::Index k = 0; k < d; k++) {
                full(r * d + k, c * d + k) = physical(r, c);
            }
        }
    }
    return ModeUnitary(std::move(registry), std::move(full));
}

Eigen::MatrixXcd ModeUnitary::physical() const {
    auto p = static_cast<Eigen::Index>(2 * registry_->num_paths());
    auto d = static_cast<Eigen::Index>(registry_->internal_dim());
    Eigen::MatrixXcd out(p, p);
    for (Eigen::Index r = 0; r < p; r++) {
        for (Eigen::Index c = 0; c < p; c++) {
            out(r, c) = matrix_(r * d, c * d);
        }
    }
    return out;
}

bool ModeUnitary::acts_trivially_on_internal(double tol) const {
    auto d = static_cast<Eigen::Index>(registry_->internal_dim());
    for (Eigen::Index r = 0; r < matrix_.rows(); r++) {
        for (Eigen::Index c = 0; c < matrix_.cols(); c++) {
            Complex expected = (r % d == c % d) ? matrix_((r / d) * d, (c / d) * d) : Complex{0};
            if (std::abs(matrix_(r, c) - expected) > tol) {
                return false;
            }
        }
    }
    return true;
}

ModeUnitary ModeUnitary::then(const ModeUnitary &next) const {
    require_same_registry(*registry_, next.registry(), "unitary composition");
    return ModeUnitary(registry_, next.matrix_ * matrix_);
}

}  // namespace entfilter
