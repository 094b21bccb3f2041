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

#ifndef ENTFILTER_MODE_UNITARY_H
#define ENTFILTER_MODE_UNITARY_H

#include <Eigen/Dense>

#include "entfilter/fock.h"

namespace entfilter {

/// Unitary acting on every mode of a registry.
///
/// Optical elements never touch internal labels, so every ModeUnitary is the lift of a
/// (2 * paths) x (2 * paths) "physical" matrix over path and polarization, tensored with
/// the identity on the internal space.
class ModeUnitary {
   public:
    /// Validates dimension and unitarity (max-abs deviation of U^dag U from I <= 1e-12).
    ModeUnitary(RegistryPtr registry, Eigen::MatrixXcd matrix);

    static ModeUnitary identity(RegistryPtr registry);
    /// Lifts a matrix indexed by (path_idx * 2 + pol) to the full registry.
    static ModeUnitary from_physical(RegistryPtr registry, const Eigen::MatrixXcd &physical);

    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }
    const ModeRegistry &registry() const {
        return *registry_;
    }
    const RegistryPtr &registry_ptr() const {
        return registry_;
    }

    /// The path x polarization block (internal label 0).
    Eigen::MatrixXcd physical() const;
    bool acts_trivially_on_internal(double tol = kValidationTolerance) const;

    /// Returns `next * this`, i.e. this element applied first.
    ModeUnitary then(const ModeUnitary &next) const;

   private:
    RegistryPtr registry_;
    Eigen::MatrixXcd matrix_;
};

double unitarity_error(const Eigen::MatrixXcd &matrix);

}  // namespace entfilter

#endif
