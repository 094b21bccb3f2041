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

#include "entfilter/circuit_format.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace entfilter {

namespace {

constexpr double kRadiansPerDegree = std::numbers::pi / 180.0;

struct Token {
    std::string_view text;
    int column;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') {
            break;
        }
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            i++;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') {
            j++;
        }
        out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
        i = j;
    }
    return out;
}

bool valid_path_name(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                  c == '-' || c == '.';
        if (!ok) {
            return false;
        }
    }
    return true;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

class Parser {
   public:
    CircuitDocument run(std::string_view text) {
        std::size_t start = 0;
        int line_no = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            line_no++;
            handle_line(line_no, tokenize(text.substr(start, end - start)));
            if (end == text.size()) {
                break;
            }
            start = end + 1;
        }
        return finish();
    }

   private:
    [[noreturn]] void fail(ParseErrorCode code, const Token &tok, std::string subject, const std::string &detail) {
        throw ParseError(code, line_, tok.column, std::move(subject), detail);
    }

    void require_declared(const Token &tok) {
        if (!declared_.contains(std::string(tok.text))) {
            fail(ParseErrorCode::UnboundPath, tok, std::string(tok.text),
                 "unbound path '" + std::string(tok.text) + "' (declare it with 'path' first)");
        }
    }

    void require_args(const std::vector<Token> &toks, std::size_t n, const char *usage) {
        if (toks.size() != n) {
            const Token &at = toks.size() > n ? toks[n] : toks.back();
            fail(ParseErrorCode::Syntax, at, std::string(toks[0].text), std::string("expected '") + usage + "'");
        }
    }

    void handle_line(int line_no, const std::vector<Token> &toks) {
        line_ = line_no;
        if (toks.empty()) {
            return;
        }
        last_content_line_ = line_no;
        std::string_view directive = toks[0].text;
        if (directive == "internal") {
            require_args(toks, 2, "internal <dimension>");
            if (internal_dim_) {
                fail(ParseErrorCode::DuplicateDirective, toks[0], "internal", "'internal' given more than once");
            }
            if (!declared_.empty()) {
                fail(ParseErrorCode::Syntax, toks[0], "internal", "'internal' must precede path declarations");
            }
            auto d = parse_int(toks[1].text);
            if (!d || *d < 1) {
                fail(ParseErrorCode::BadValue, toks[1], std::string(toks[1].text),
                     "internal dimension must be a positive integer");
            }
            internal_dim_ = static_cast<std::size_t>(*d);
        } else if (directive == "path") {
            require_args(toks, 2, "path <name>");
            std::string name(toks[1].text);
            if (!valid_path_name(name)) {
                fail(ParseErrorCode::BadValue, toks[1], name, "invalid path name '" + name + "'");
            }
            if (!declared_.insert(name).second) {
                fail(ParseErrorCode::DuplicatePath, toks[1], name, "path '" + name + "' declared twice");
            }
            path_order_.push_back(name);
        } else if (directive == "input") {
            require_args(toks, 2, "input <path>");
            require_declared(toks[1]);
            inputs_.emplace_back(toks[1].text);
        } else if (directive == "output") {
            require_args(toks, 2, "output <path>");
            require_declared(toks[1]);
            herald_.outputs.emplace_back(toks[1].text);
        } else if (directive == "detector") {
            handle_detector(toks);
        } else if (directive == "element") {
            handle_element(toks);
        } else {
            fail(ParseErrorCode::UnknownDirective, toks[0], std::string(directive),
                 "unknown directive '" + std::string(directive) + "'");
        }
    }

    void handle_detector(const std::vector<Token> &toks) {
        if (toks.size() < 3) {
            fail(ParseErrorCode::Syntax, toks.back(), "detector", "expected 'detector <path> threshold|number <n>'");
        }
        require_declared(toks[1]);
        DetectorBinding d;
        d.path = std::string(toks[1].text);
        if (toks[2].text == "threshold") {
            require_args(toks, 3, "detector <path> threshold");
            d.model = DetectorModel::Threshold;
            d.count = 1;
        } else if (toks[2].text == "number") {
            require_args(toks, 4, "detector <path> number <n>");
            auto n = parse_int(toks[3].text);
            if (!n || *n < 0) {
                fail(ParseErrorCode::BadValue, toks[3], std::string(toks[3].text),
                     "photon count must be a non-negative integer");
            }
            d.model = DetectorModel::NumberResolving;
            d.count = *n;
        } else {
            fail(ParseErrorCode::BadValue, toks[2], std::string(toks[2].text),
                 "detector model must be 'threshold' or 'number'");
        }
        herald_.detectors.push_back(std::move(d));
    }

    void handle_element(const std::vector<Token> &toks) {
        if (toks.size() < 3) {
            fail(ParseErrorCode::Syntax, toks.back(), "element", "expected 'element <kind> <path> ...'");
        }
        const Token &kind_tok = toks[1];
        std::string_view kind = kind_tok.text;
        std::size_t ports;
        std::set<std::string_view> allowed;
        if (kind == "bs") {
            ports = 2;
            allowed = {"rh", "rv"};
        } else if (kind == "pbs" || kind == "swap") {
            ports = 2;
        } else if (kind == "hwp" || kind == "qwp") {
            ports = 1;
            allowed = {"angle"};
        } else if (kind == "phase") {
            ports = 1;
            allowed = {"h", "v"};
        } else {
            fail(ParseErrorCode::UnknownElement, kind_tok, std::string(kind),
                 "unknown element kind '" + std::string(kind) + "'");
        }

        std::vector<std::string> paths;
        std::size_t k = 2;
        for (; k < toks.size() && toks[k].text.find('=') == std::string_view::npos; k++) {
            if (paths.size() == ports) {
                fail(ParseErrorCode::Syntax, toks[k], std::string(toks[k].text),
                     "element '" + std::string(kind) + "' takes " + std::to_string(ports) + " path(s)");
            }
            require_declared(toks[k]);
            paths.emplace_back(toks[k].text);
        }
        if (paths.size() != ports) {
            fail(ParseErrorCode::Syntax, toks.back(), std::string(kind),
                 "element '" + std::string(kind) + "' takes " + std::to_string(ports) + " path(s)");
        }
        if (ports == 2 && paths[0] == paths[1]) {
            fail(ParseErrorCode::InvalidCircuit, toks[3], paths[1], "element binds path '" + paths[1] + "' twice");
        }

        std::map<std::string_view, double> values;
        for (; k < toks.size(); k++) {
            const Token &t = toks[k];
            auto eq = t.text.find('=');
            if (eq == std::string_view::npos) {
                fail(ParseErrorCode::Syntax, t, std::string(t.text), "expected key=value");
            }
            std::string_view key = t.text.substr(0, eq);
            std::string_view val = t.text.substr(eq + 1);
            if (!allowed.contains(key)) {
                fail(ParseErrorCode::UnknownKey, t, std::string(key),
                     "unknown key '" + std::string(key) + "' for element '" + std::string(kind) + "'");
            }
            if (values.contains(key)) {
                fail(ParseErrorCode::DuplicateKey, t, std::string(key), "key '" + std::string(key) + "' repeated");
            }
            auto v = parse_double(val);
            if (!v) {
                fail(ParseErrorCode::BadValue, t, std::string(val),
                     "value '" + std::string(val) + "' for key '" + std::string(key) + "' is not a number");
            }
            values[key] = *v;
        }

        auto required = [&](std::string_view key) {
            auto it = values.find(key);
            if (it == values.end()) {
                fail(ParseErrorCode::MissingKey, kind_tok, std::string(key),
                     "element '" + std::string(kind) + "' requires key '" + std::string(key) + "'");
            }
            return it->second;
        };
        auto optional = [&](std::string_view key) {
            auto it = values.find(key);
            return it == values.end() ? 0.0 : it->second;
        };

        Element e;
        e.paths = std::move(paths);
        if (kind == "bs") {
            double rh = required("rh");
            double rv = required("rv");
            for (auto [key, r] : {std::pair{"rh", rh}, std::pair{"rv", rv}}) {
                if (r < 0 || r > 1) {
                    fail(ParseErrorCode::BadValue, kind_tok, key, std::string("reflectance ") + key + " outside [0, 1]");
                }
            }
            e.kind = BeamSplitter{rh, rv};
        } else if (kind == "pbs") {
            e.kind = PolarizingBeamSplitter{};
        } else if (kind == "swap") {
            e.kind = PathSwap{};
        } else if (kind == "hwp") {
            e.kind = HalfWavePlate{radians_from_degrees(required("angle"))};
        } else if (kind == "qwp") {
            e.kind = QuarterWavePlate{radians_from_degrees(required("angle"))};
        } else {
            e.kind = PhaseShift{radians_from_degrees(optional("h")), radians_from_degrees(optional("v"))};
        }
        elements_.push_back(std::move(e));
    }

    CircuitDocument finish() {
        CircuitDocument doc;
        doc.circuit.registry = make_registry(path_order_, internal_dim_.value_or(4));
        doc.circuit.elements = std::move(elements_);
        doc.circuit.inputs = std::move(inputs_);
        doc.herald = std::move(herald_);
        try {
            validate_circuit(doc.circuit);
            validate_herald(doc.herald, *doc.circuit.registry);
        } catch (const Error &e) {
            throw ParseError(ParseErrorCode::InvalidCircuit, last_content_line_, 1, "", e.what());
        }
        return doc;
    }

    int line_ = 0;
    int last_content_line_ = 0;
    std::optional<std::size_t> internal_dim_;
    std::set<std::string> declared_;
    std::vector<std::string> path_order_;
    std::vector<std::string> inputs_;
    std::vector<Element> elements_;
    HeraldSpec herald_;
};

}  // namespace

const char *parse_error_code_name(ParseErrorCode code) {
    switch (code) {
        case ParseErrorCode::Syntax:
            return "syntax";
        case ParseErrorCode::UnknownDirective:
            return "unknown-directive";
        case ParseErrorCode::UnknownElement:
            return "unknown-element";
        case ParseErrorCode::UnknownKey:
            return "unknown-key";
        case ParseErrorCode::DuplicateKey:
            return "duplicate-key";
        case ParseErrorCode::MissingKey:
            return "missing-key";
        case ParseErrorCode::BadValue:
            return "bad-value";
        case ParseErrorCode::UnboundPath:
            return "unbound-path";
        case ParseErrorCode::DuplicatePath:
            return "duplicate-path";
        case ParseErrorCode::DuplicateDirective:
            return "duplicate-directive";
        case ParseErrorCode::InvalidCircuit:
            return "invalid-circuit";
    }
    return "unknown";
}

ParseError::ParseError(ParseErrorCode code, int line, int column, std::string subject, const std::string &detail)
    : Error(ErrorKind::Parse,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                parse_error_code_name(code) + ": " + detail),
      code_(code),
      line_(line),
      column_(column),
      subject_(std::move(subject)) {
}

double radians_from_degrees(double degrees) {
    return degrees * kRadiansPerDegree;
}

double degrees_for_radians(double radians) {
    double guess = radians / kRadiansPerDegree;
    double best = guess;
    // Walk outwards from the naive quotient until the parser's product reproduces the input.
    double up = guess;
    double down = guess;
    for (int step = 0; step < 16; step++) {
        if (radians_from_degrees(up) == radians) {
            best = up;
            break;
        }
        if (radians_from_degrees(down) == radians) {
            best = down;
            break;
        }
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    }
    // Prefer a short decimal (e.g. 60 rather than 59.99999999999999) if it is exact too.
    for (int digits = 1; digits <= 15; digits++) {
        std::ostringstream ss;
        ss.precision(digits);
        ss << best;
        auto v = parse_double(ss.str());
        if (v && radians_from_degrees(*v) == radians) {
            return *v;
        }
    }
    return best;
}

CircuitDocument parse_circuit(std::string_view text) {
    return Parser().run(text);
}

std::string serialize_circuit(const CircuitDocument &doc) {
    validate_circuit(doc.circuit);
    validate_herald(doc.herald, *doc.circuit.registry);
    const auto &reg = *doc.circuit.registry;
    std::ostringstream out;
    out << "# entfilter circuit description\n";
    out << "internal " << reg.internal_dim() << "\n";
    for (const auto &p : reg.paths()) {
        out << "path " << p << "\n";
    }
    for (const auto &p : doc.circuit.inputs) {
        out << "input " << p << "\n";
    }
    for (const auto &e : doc.circuit.elements) {
        out << "element " << kind_name(e.kind);
        for (const auto &p : e.paths) {
            out << " " << p;
        }
        if (const auto *bs = std::get_if<BeamSplitter>(&e.kind)) {
            out << " rh=" << format_double(bs->reflectance_h) << " rv=" << format_double(bs->reflectance_v);
        } else if (const auto *w = std::get_if<HalfWavePlate>(&e.kind)) {
            out << " angle=" << format_double(degrees_for_radians(w->angle));
        } else if (const auto *q = std::get_if<QuarterWavePlate>(&e.kind)) {
            out << " angle=" << format_double(degrees_for_radians(q->angle));
        } else if (const auto *ps = std::get_if<PhaseShift>(&e.kind)) {
            out << " h=" << format_double(degrees_for_radians(ps->phase_h))
                << " v=" << format_double(degrees_for_radians(ps->phase_v));
        }
        out << "\n";
    }
    for (const auto &d : doc.herald.detectors) {
        out << "detector " << d.path;
        if (d.model == DetectorModel::Threshold) {
            out << " threshold\n";
        } else {
            out << " number " << d.count << "\n";
        }
    }
    for (const auto &o : doc.herald.outputs) {
        out << "output " << o << "\n";
    }
    return out.str();
}

CircuitDocument read_circuit_file(const std::string &filename) {
    std::ifstream in(filename);
    if (!in) {
        throw configuration_error("cannot open circuit file '" + filename + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

void write_circuit_file(const std::string &filename, const CircuitDocument &doc) {
    std::ofstream out(filename);
    if (!out) {
        throw configuration_error("cannot write circuit file '" + filename + "'");
    }
    out << serialize_circuit(doc);
}

}  // namespace entfilter
