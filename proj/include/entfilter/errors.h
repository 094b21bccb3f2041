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

#ifndef ENTFILTER_ERRORS_H
#define ENTFILTER_ERRORS_H

#include <stdexcept>
#include <string>

namespace entfilter {

enum class ErrorKind {
    Configuration,      // unknown path/polarization, bad port wiring
    Validation,         // numeric precondition violated (norm, unitarity, range)
    Parse,              // circuit-description syntax or semantic error
    PhysicsContract,    // a physics-level postcondition did not hold
    InfeasibleVisibilities,
    DegenerateCircuit,
    CoherenceLoss,
    UndefinedFidelity,
};

const char *error_kind_name(ErrorKind kind);

/// Base class for every error raised by the library.
///
/// The kind is machine-readable so front ends can map it to exit codes.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {
    }
    ErrorKind kind() const {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

inline Error configuration_error(const std::string &msg) {
    return Error(ErrorKind::Configuration, msg);
}
inline Error validation_error(const std::string &msg) {
    return Error(ErrorKind::Validation, msg);
}
inline Error contract_error(const std::string &msg) {
    return Error(ErrorKind::PhysicsContract, msg);
}

}  // namespace entfilter

#endif
