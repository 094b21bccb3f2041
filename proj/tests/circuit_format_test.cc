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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "entfilter/circuit_format.h"
#include "entfilter/errors.h"
#include "entfilter/filter.h"
#include "support/generators.h"

namespace entfilter {
namespace {

ParseError parse_failure(std::string_view text) {
    try {
        parse_circuit(text);
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "expected a parse error for:\n" << text;
    return ParseError(ParseErrorCode::Syntax, 0, 0, "", "");
}

TEST(CircuitFormat, MinimalDocument) {
    CircuitDocument doc = parse_circuit("path x\n");
    EXPECT_EQ(doc.circuit.registry->paths(), std::vector<std::string>{"x"});
    EXPECT_EQ(doc.circuit.registry->internal_dim(), 4u);
    EXPECT_TRUE(doc.circuit.elements.empty());
    EXPECT_TRUE(doc.herald.detectors.empty());
}

TEST(CircuitFormat, FullDocument) {
    const char *text = R"(# two-port interferometer
internal 2
path x
path y   # trailing comment
input x
input y
element bs x y rh=0.5 rv=0.25
element hwp x angle=22.5
element qwp y angle=-45
element phase x v=90
element pbs x y
element swap x y
detector x threshold
detector y number 2
)";
    CircuitDocument doc = parse_circuit(text);
    ASSERT_EQ(doc.circuit.elements.size(), 6u);
    const auto &bs = std::get<BeamSplitter>(doc.circuit.elements[0].kind);
    EXPECT_EQ(bs.reflectance_h, 0.5);
    EXPECT_EQ(bs.reflectance_v, 0.25);
    EXPECT_DOUBLE_EQ(std::get<HalfWavePlate>(doc.circuit.elements[1].kind).angle, std::numbers::pi / 8);
    EXPECT_DOUBLE_EQ(std::get<QuarterWavePlate>(doc.circuit.elements[2].kind).angle, -std::numbers::pi / 4);
    const auto &ps = std::get<PhaseShift>(doc.circuit.elements[3].kind);
    EXPECT_EQ(ps.phase_h, 0.0);
    EXPECT_DOUBLE_EQ(ps.phase_v, std::numbers::pi / 2);
    EXPECT_EQ(doc.circuit.inputs, (std::vector<std::string>{"x", "y"}));
    ASSERT_EQ(doc.herald.detectors.size(), 2u);
    EXPECT_EQ(doc.herald.detectors[1].model, DetectorModel::NumberResolving);
    EXPECT_EQ(doc.herald.detectors[1].count, 2);
}

TEST(CircuitFormat, UnboundPathNamesThePath) {
    ParseError e = parse_failure("path p0\nelement bs p0 q9 rh=0.5 rv=0.5\n");
    EXPECT_EQ(e.code(), ParseErrorCode::UnboundPath);
    EXPECT_EQ(e.subject(), "q9");
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 15);
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("q9"), std::string::npos);
}

TEST(CircuitFormat, DistinctErrorCodes) {
    struct Case {
        const char *text;
        ParseErrorCode code;
        int line;
    };
    const Case cases[] = {
        {"path x\npath x\n", ParseErrorCode::DuplicatePath, 2},
        {"path x\nwidget x\n", ParseErrorCode::UnknownDirective, 2},
        {"path x\npath y\nelement mirror x y\n", ParseErrorCode::UnknownElement, 3},
        {"path x\npath y\nelement bs x y rh=0.5 rv=0.5 tilt=3\n", ParseErrorCode::UnknownKey, 3},
        {"path x\npath y\nelement bs x y rh=0.5 rh=0.5 rv=0\n", ParseErrorCode::DuplicateKey, 3},
        {"path x\npath y\nelement bs x y rh=0.5\n", ParseErrorCode::MissingKey, 3},
        {"path x\npath y\nelement bs x y rh=half rv=0\n", ParseErrorCode::BadValue, 3},
        {"path x\npath y\nelement bs x y rh=1.5 rv=0\n", ParseErrorCode::BadValue, 3},
        {"path x\npath y\nelement bs x y rh 0.5\n", ParseErrorCode::Syntax, 3},
        {"path x\npath y\nelement hwp x y angle=3\n", ParseErrorCode::Syntax, 3},
        {"path x\nelement swap x x\n", ParseErrorCode::InvalidCircuit, 2},
        {"internal 2\ninternal 3\npath x\n", ParseErrorCode::DuplicateDirective, 2},
        {"path x\ninternal 2\n", ParseErrorCode::Syntax, 2},
        {"internal 0\npath x\n", ParseErrorCode::BadValue, 1},
        {"path x\ndetector x maybe\n", ParseErrorCode::BadValue, 2},
        {"path x\ndetector x threshold\noutput x\n", ParseErrorCode::InvalidCircuit, 3},
    };
    for (const auto &c : cases) {
        ParseError e = parse_failure(c.text);
        EXPECT_EQ(e.code(), c.code) << c.text << " -> " << e.what();
        EXPECT_EQ(e.line(), c.line) << c.text;
    }
}

TEST(CircuitFormat, ErrorMessageCarriesLocation) {
    ParseError e = parse_failure("path x\n\n  element bs x z rh=0 rv=0\n");
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(CircuitFormat, BuiltInFilterRoundTrips) {
    for (auto variant : {FilterVariant::Ppbs, FilterVariant::Original}) {
        CircuitDocument doc = build_filter_circuit(variant);
        const std::string text = serialize_circuit(doc);
        CircuitDocument back = parse_circuit(text);
        EXPECT_TRUE(back == doc) << text;
        EXPECT_EQ(serialize_circuit(back), text);
    }
}

TEST(CircuitFormat, FileRoundTrip) {
    auto path = std::filesystem::temp_directory_path() / "entfilter_format_test.circ";
    CircuitDocument doc = build_filter_circuit(FilterVariant::Ppbs);
    write_circuit_file(path.string(), doc);
    EXPECT_TRUE(read_circuit_file(path.string()) == doc);
    std::filesystem::remove(path);
    EXPECT_THROW(read_circuit_file(path.string()), Error);
}

// Angles that are exactly representable as parsed degrees survive serialization bit for bit.
Element degree_exact(Element e) {
    auto snap = [](double &a) { a = radians_from_degrees(std::round(a * 180 / std::numbers::pi * 1e6) / 1e6); };
    if (auto *w = std::get_if<HalfWavePlate>(&e.kind)) {
        snap(w->angle);
    } else if (auto *q = std::get_if<QuarterWavePlate>(&e.kind)) {
        snap(q->angle);
    } else if (auto *p = std::get_if<PhaseShift>(&e.kind)) {
        snap(p->phase_h);
        snap(p->phase_v);
    }
    return e;
}

TEST(CircuitFormatProperty, RandomCircuitsRoundTrip) {
    testing::Gen g(77);
    for (int trial = 0; trial < 200; ++trial) {
        const int paths = g.integer(1, 8);
        Circuit c = testing::random_circuit(g, paths, g.integer(0, 12), static_cast<std::size_t>(g.integer(1, 4)));
        for (auto &e : c.elements) {
            e = degree_exact(e);
        }
        c.inputs = {c.registry->paths().front()};
        HeraldSpec spec;
        if (paths >= 3) {
            spec.detectors.push_back({c.registry->paths()[1], g.integer(0, 1) ? DetectorModel::Threshold : DetectorModel::NumberResolving,
                                      g.integer(1, 3)});
            spec.outputs.push_back(c.registry->paths()[2]);
        }
        if (spec.detectors.size() == 1 && spec.detectors[0].model == DetectorModel::Threshold) {
            spec.detectors[0].count = 1;
        }
        CircuitDocument doc{c, spec};
        const std::string text = serialize_circuit(doc);
        CircuitDocument back = parse_circuit(text);
        ASSERT_TRUE(back == doc) << text;
    }
}

TEST(CircuitFormatProperty, DegreeConversionIsNearlyExact) {
    testing::Gen g(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const double rad = g.angle();
        const double back = radians_from_degrees(degrees_for_radians(rad));
        EXPECT_NEAR(back, rad, 4e-16 * std::max(1.0, std::abs(rad)));
        const double deg = std::round(g.real(-360, 360) * 1000) / 1000;
        const double exact = radians_from_degrees(deg);
        EXPECT_EQ(radians_from_degrees(degrees_for_radians(exact)), exact);
    }
}

}  // namespace
}  // namespace entfilter
