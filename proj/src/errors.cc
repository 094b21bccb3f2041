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

#include "entfilter/errors.h"

namespace entfilter {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Configuration:
            return "configuration";
        case ErrorKind::Validation:
            return "validation";
        case ErrorKind::Parse:
            return "parse";
        case ErrorKind::PhysicsContract:
            return "physics-contract";
        case ErrorKind::InfeasibleVisibilities:
            return "infeasible-visibilities";
        case ErrorKind::DegenerateCircuit:
            return "degenerate-circuit";
        case ErrorKind::CoherenceLoss:
            return "coherence-loss";
        case ErrorKind::UndefinedFidelity:
            return "undefined-fidelity";
    }
    return "unknown";
}

}  // namespace entfilter
