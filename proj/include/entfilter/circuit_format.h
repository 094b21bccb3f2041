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

#ifndef ENTFILTER_CIRCUIT_FORMAT_H
#define ENTFILTER_CIRCUIT_FORMAT_H

#include <string>
#include <string_view>

#include "entfilter/elements.h"
#include "entfilter/errors.h"

namespace entfilter {

// Line-oriented circuit-description format. One directive per line; `#` starts a comment.
//
//   internal <d>                         internal-space dimension (optional, default 4)
//   path <name>                          declare a spatial path (before any use)
//   input <path>                         mark a path as a circuit input port
//   element <kind> <path> [<path2>] key=value ...
//   detector <path> threshold
//   detector <path> number <n>
//   output <path>
//
// Element kinds and their keys (angles in degrees, reflectances as decimals):
//   bs    <a> <b>  rh=<R_H> rv=<R_V>     (both required)
//   pbs   <a> <b>                        (R_H = 0, R_V = 1)
//   hwp   <p>      angle=<deg>
//   qwp   <p>      angle=<deg>
//   phase <p>      h=<deg> v=<deg>       (each defaults to 0)
//   swap  <a> <b>
// Unknown keys, repeated keys and undeclared paths are errors.

enum class ParseErrorCode {
    Syntax,
    UnknownDirective,
    UnknownElement,
    UnknownKey,
    DuplicateKey,
    MissingKey,
    BadValue,
    UnboundPath,
    DuplicatePath,
    DuplicateDirective,
    InvalidCircuit,
};

const char *parse_error_code_name(ParseErrorCode code);

class ParseError : public Error {
   public:
    ParseError(ParseErrorCode code, int line, int column, std::string subject, const std::string &detail);

    ParseErrorCode code() const {
        return code_;
    }
    int line() const {
        return line_;
    }
    int column() const {
        return column_;
    }
    /// The offending token (path name, key, element kind), if any.
    const std::string &subject() const {
        return subject_;
    }

   private:
    ParseErrorCode code_;
    int line_;
    int column_;
    std::string subject_;
};

CircuitDocument parse_circuit(std::string_view text);
std::string serialize_circuit(const CircuitDocument &doc);

CircuitDocument read_circuit_file(const std::string &filename);
void write_circuit_file(const std::string &filename, const CircuitDocument &doc);

/// Degrees-to-radians factor used by the parser.
double radians_from_degrees(double degrees);
/// Shortest decimal degree value that parses back to exactly `radians`, when one exists nearby.
double degrees_for_radians(double radians);

}  // namespace entfilter

#endif
