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

#include "entfilter/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "entfilter/analysis.h"
#include "entfilter/circuit_format.h"
#include "entfilter/engine.h"
#include "entfilter/errors.h"
#include "entfilter/filter.h"
#include "entfilter/noise.h"

namespace entfilter {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { Table, Csv, Json };

struct RunConfig {
    FilterVariant variant = FilterVariant::Ppbs;
    VisibilityParams visibilities;
    bool ideal = false;
    DetectorModel detector = DetectorModel::Threshold;
    Format format = Format::Table;
    FidelityPooling pooling = FidelityPooling::Pooled;
    std::uint64_t seed = 1;
    std::optional<double> counts_duration;
    double rate = 0.5;
};

// Published experimental values, printed for comparison only.
constexpr double kReferenceFzz = 0.80;
constexpr double kReferenceFxy = 0.68;
constexpr double kReferenceFxx = 0.60;
constexpr double kReferenceFp = 0.54;
constexpr double kReferenceC = 0.08;

constexpr double kDisplayFloor = 1e-14;

double chop(double x) {
    return std::abs(x) < kDisplayFloor ? 0.0 : x;
}

std::string number(double x, int digits) {
    if (x == 0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string scalar_text(const Json &j, int digits = 10) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_number_float()) {
        return number(j.get<double>(), digits);
    }
    return j.dump();
}

bool is_grid(const Json &j) {
    return j.is_object() && j.contains("rows") && j.contains("columns") && j.contains("values");
}

template <typename Matrix>
Json grid(const std::array<std::string, 4> &rows, const std::array<std::string, 4> &columns, const Matrix &m) {
    Json values = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) {
            row.push_back(m(r, c));
        }
        values.push_back(row);
    }
    return Json{{"rows", rows}, {"columns", columns}, {"values", values}};
}

Json probability_grid(const TruthTable &t) {
    Eigen::Matrix4d m = t.entries.unaryExpr([](double x) { return chop(x); });
    return grid(two_qubit_labels(t.input), two_qubit_labels(t.output), m);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') {
            q += '"';
        }
        q += c;
    }
    return q + "\"";
}

void render_csv(const Json &j, const std::string &prefix, std::ostream &os) {
    if (is_grid(j)) {
        os << csv_field(prefix) << ",";
        for (const auto &c : j["columns"]) {
            os << "," << csv_field(c.get<std::string>());
        }
        os << "\n";
        for (std::size_t r = 0; r < j["rows"].size(); ++r) {
            os << csv_field(prefix) << "," << csv_field(j["rows"][r].get<std::string>());
            for (const auto &v : j["values"][r]) {
                os << "," << csv_field(scalar_text(v));
            }
            os << "\n";
        }
    } else if (j.is_object()) {
        for (const auto &[key, value] : j.items()) {
            render_csv(value, prefix.empty() ? key : prefix + "." + key, os);
        }
    } else if (j.is_array() && !j.empty() && j.front().is_object()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            render_csv(j[i], prefix + "." + std::to_string(i), os);
        }
    } else if (j.is_array()) {
        os << csv_field(prefix);
        for (const auto &v : j) {
            os << "," << csv_field(v.is_structured() ? v.dump() : scalar_text(v));
        }
        os << "\n";
    } else {
        os << csv_field(prefix) << "," << csv_field(scalar_text(j)) << "\n";
    }
}

void render_table(const Json &j, int indent, std::ostream &os) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto &[key, value] : j.items()) {
        if (is_grid(value)) {
            os << pad << key << ":\n";
            os << pad << "  " << std::string(6, ' ');
            for (const auto &c : value["columns"]) {
                os << std::setw(14) << c.get<std::string>();
            }
            os << "\n";
            for (std::size_t r = 0; r < value["rows"].size(); ++r) {
                os << pad << "  " << std::left << std::setw(6) << value["rows"][r].get<std::string>() << std::right;
                for (const auto &v : value["values"][r]) {
                    os << std::setw(14) << scalar_text(v, 6);
                }
                os << "\n";
            }
        } else if (value.is_object()) {
            os << pad << key << ":\n";
            render_table(value, indent + 2, os);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            os << pad << key << ":\n";
            for (const auto &item : value) {
                os << pad << "  -";
                for (const auto &[k, v] : item.items()) {
                    os << " " << k << "=" << scalar_text(v);
                }
                os << "\n";
            }
        } else if (value.is_array()) {
            os << pad << key << ":";
            for (const auto &v : value) {
                os << " " << (v.is_structured() ? v.dump() : scalar_text(v));
            }
            os << "\n";
        } else {
            os << pad << key << ": " << scalar_text(value) << "\n";
        }
    }
}

void render(const Json &report, Format format, std::ostream &os) {
    switch (format) {
    case Format::Json:
        os << report.dump(2) << "\n";
        break;
    case Format::Csv:
        os << "key,value\n";
        render_csv(report, "", os);
        break;
    case Format::Table:
        render_table(report, 0, os);
        break;
    }
}

VisibilityParams effective_visibilities(const RunConfig &cfg) {
    return cfg.ideal ? VisibilityParams{1.0, 1.0} : cfg.visibilities;
}

Json polarization_weights(const Eigen::Vector4d &w) {
    auto labels = two_qubit_labels(Basis::Z);
    Json j = Json::object();
    for (int k = 0; k < 4; ++k) {
        j[labels[static_cast<std::size_t>(k)]] = chop(w[k]);
    }
    return j;
}

Json process_json(const ProcessReport &r) {
    Json j{{"F_zz", r.f_zz},
           {"F_xy", r.f_xy},
           {"F_xx", r.f_xx},
           {"F_p", r.process_fidelity},
           {"eta_zz", r.eta_zz},
           {"eta_xy", r.eta_xy},
           {"eta_xx", r.eta_xx},
           {"C", r.entanglement_capability},
           {"consistent", r.consistent}};
    if (!r.consistent) {
        j["warning"] = r.warning;
    }
    return j;
}

Json reference_values() {
    return Json{{"note", "published experimental values; not simulator output"},
                {"F_zz", kReferenceFzz},
                {"F_xy", kReferenceFxy},
                {"F_xx", kReferenceFxx},
                {"F_p", kReferenceFp},
                {"C", kReferenceC}};
}

TruthTable synthetic_counts(const TruthTable &t, const RunConfig &cfg, std::mt19937_64 &rng) {
    TruthTable counts{t.input, t.output, Eigen::Matrix4d::Zero()};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const double mean = cfg.rate * *cfg.counts_duration * 16 * t.entries(r, c);
            if (mean > 0) {
                std::poisson_distribution<long long> poisson(mean);
                counts.entries(r, c) = static_cast<double>(poisson(rng));
            }
        }
    }
    return counts;
}

Json count_grid(const TruthTable &t) {
    Eigen::Matrix<long long, 4, 4> m = t.entries.cast<long long>();
    return grid(two_qubit_labels(t.input), two_qubit_labels(t.output), m);
}

Json cmd_herald_map(const RunConfig &cfg) {
    CircuitDocument doc = build_filter_circuit(cfg.variant);
    HeraldedMap map = heralded_map(doc);
    const auto labels = two_qubit_labels(Basis::Z);
    const double deviation = (map.matrix - ideal_filter_operator()).cwiseAbs().maxCoeff();
    Eigen::Matrix4d re = map.matrix.real().unaryExpr([](double x) { return chop(x); });
    Eigen::Matrix4d im = map.matrix.imag().unaryExpr([](double x) { return chop(x); });
    Json success = Json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        success[labels[k]] = chop(map.success_probability[k]);
    }
    return Json{{"command", "herald-map"},
                {"variant", variant_name(cfg.variant)},
                {"map_real", grid(labels, labels, re)},
                {"map_imag", grid(labels, labels, im)},
                {"success_probability", success},
                {"max_deviation_from_ideal", deviation},
                {"linearity_residual", map.linearity_residual}};
}

Json cmd_truth_tables(const RunConfig &cfg) {
    const VisibilityParams vis = effective_visibilities(cfg);
    NoiseOptions options;
    options.variant = cfg.variant;
    options.detector = cfg.detector;
    NoisyTruthTables t = simulate_noisy_truth_tables(vis, options);

    const double fzz = fidelity_from_table(t.zz, cfg.pooling);
    const double fxy = fidelity_from_table(t.xy, cfg.pooling);
    const double fxx = fidelity_from_table(t.xx, cfg.pooling);
    AssumptionCheck check = assumption_check(t.zz);

    Json report{{"command", "truth-tables"},
                {"variant", variant_name(cfg.variant)},
                {"v_same", vis.v_same},
                {"v_cross", vis.v_cross},
                {"pooling", cfg.pooling == FidelityPooling::Pooled ? "pooled" : "per-input"},
                {"tables", Json{{"Z->Z", probability_grid(t.zz)},
                                {"X->Y", probability_grid(t.xy)},
                                {"X->X", probability_grid(t.xx)}}},
                {"fidelities", Json{{"F_zz", fzz}, {"F_xy", fxy}, {"F_xx", fxx}}},
                {"process", process_json(process_report(fzz, fxy, fxx))},
                {"polarization_preservation",
                 Json{{"leakage", check.leakage}, {"threshold", check.threshold}, {"holds", check.holds}}}};

    if (cfg.counts_duration) {
        std::mt19937_64 rng(cfg.seed);
        TruthTable czz = synthetic_counts(t.zz, cfg, rng);
        TruthTable cxy = synthetic_counts(t.xy, cfg, rng);
        TruthTable cxx = synthetic_counts(t.xx, cfg, rng);
        const double gzz = fidelity_from_table(czz, cfg.pooling);
        const double gxy = fidelity_from_table(cxy, cfg.pooling);
        const double gxx = fidelity_from_table(cxx, cfg.pooling);
        report["synthetic_counts"] = Json{{"duration_s", *cfg.counts_duration},
                                          {"rate", cfg.rate},
                                          {"seed", cfg.seed},
                                          {"Z->Z", count_grid(czz)},
                                          {"X->Y", count_grid(cxy)},
                                          {"X->X", count_grid(cxx)},
                                          {"fidelities", Json{{"F_zz", gzz}, {"F_xy", gxy}, {"F_xx", gxx}}}};
    }
    report["reference"] = reference_values();
    return report;
}

TruthTable table_from_json(const Json &j, Basis input, Basis output, const std::string &name) {
    if (!j.is_array() || j.size() != 4) {
        throw validation_error("table '" + name + "' must be a 4x4 array");
    }
    TruthTable t{input, output, Eigen::Matrix4d::Zero()};
    for (int r = 0; r < 4; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != 4) {
            throw validation_error("table '" + name + "' must be a 4x4 array");
        }
        for (int c = 0; c < 4; ++c) {
            const Json &v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw validation_error("table '" + name + "' has a non-numeric entry");
            }
            t.entries(r, c) = v.get<double>();
        }
    }
    return t;
}

Json cmd_process_report(const RunConfig &cfg, const std::vector<double> &fidelities, const std::string &tables) {
    double fzz = 0, fxy = 0, fxx = 0;
    Json report{{"command", "process-report"}};
    if (!tables.empty()) {
        if (!fidelities.empty()) {
            throw validation_error("give either three fidelities or --tables, not both");
        }
        std::ifstream in(tables);
        if (!in) {
            throw validation_error("cannot open tables file '" + tables + "'");
        }
        Json doc = Json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorKind::Parse, "tables file '" + tables + "' is not a JSON object");
        }
        for (const char *key : {"zz", "xy", "xx"}) {
            if (!doc.contains(key)) {
                throw validation_error(std::string("tables file lacks '") + key + "'");
            }
        }
        fzz = fidelity_from_table(table_from_json(doc["zz"], Basis::Z, Basis::Z, "zz"), cfg.pooling);
        fxy = fidelity_from_table(table_from_json(doc["xy"], Basis::X, Basis::Y, "xy"), cfg.pooling);
        fxx = fidelity_from_table(table_from_json(doc["xx"], Basis::X, Basis::X, "xx"), cfg.pooling);
        report["source"] = tables;
    } else {
        if (fidelities.size() != 3) {
            throw validation_error("process-report needs three fidelities F_zz F_xy F_xx or --tables");
        }
        fzz = fidelities[0];
        fxy = fidelities[1];
        fxx = fidelities[2];
    }
    report["process"] = process_json(process_report(fzz, fxy, fxx));
    return report;
}

Json background_json(const BackgroundResult &bg) {
    return Json{{"probability", chop(bg.probability)},
                {"weights", polarization_weights(bg.weights)},
                {"distribution", polarization_weights(bg.distribution)}};
}

Json cmd_background(const RunConfig &cfg) {
    const VisibilityParams vis = effective_visibilities(cfg);
    NoiseOptions options;
    options.variant = cfg.variant;
    options.detector = DetectorModel::Threshold;
    BackgroundResult threshold = background_double_pair(vis, options);
    options.detector = DetectorModel::NumberResolving;
    BackgroundResult resolving = background_double_pair(vis, options);
    Json report{{"command", "background"},
                {"variant", variant_name(cfg.variant)},
                {"v_same", vis.v_same},
                {"v_cross", vis.v_cross},
                {"threshold", background_json(threshold)},
                {"number_resolving", background_json(resolving)}};
    if (cfg.counts_duration) {
        const BackgroundResult &sel = cfg.detector == DetectorModel::Threshold ? threshold : resolving;
        std::mt19937_64 rng(cfg.seed);
        const double mean = cfg.rate * *cfg.counts_duration * 16 * sel.probability;
        long long n = 0;
        if (mean > 0) {
            std::poisson_distribution<long long> poisson(mean);
            n = poisson(rng);
        }
        report["synthetic_counts"] =
            Json{{"duration_s", *cfg.counts_duration}, {"rate", cfg.rate}, {"seed", cfg.seed}, {"four_fold", n}};
    }
    return report;
}

std::vector<PhotonInput> parse_input_spec(const std::string &spec, const ModeRegistry &reg) {
    std::vector<PhotonInput> photons;
    std::stringstream items(spec);
    std::string item;
    while (std::getline(items, item, ',')) {
        std::vector<std::string> parts;
        std::stringstream fields(item);
        std::string field;
        while (std::getline(fields, field, ':')) {
            parts.push_back(field);
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw validation_error("input photon '" + item + "' must look like path:H or path:V:k");
        }
        if (!reg.has_path(parts[0])) {
            throw configuration_error("input photon refers to undeclared path '" + parts[0] + "'");
        }
        auto pol = parse_polarization(parts[1]);
        if (!pol) {
            throw configuration_error("unknown polarization '" + parts[1] + "'");
        }
        std::size_t k = 0;
        if (parts.size() == 3) {
            try {
                std::size_t used = 0;
                k = std::stoul(parts[2], &used);
                if (used != parts[2].size()) {
                    throw std::invalid_argument("trailing");
                }
            } catch (const std::exception &) {
                throw validation_error("bad internal label '" + parts[2] + "'");
            }
            if (k >= reg.internal_dim()) {
                throw validation_error("internal label " + parts[2] + " exceeds the internal dimension");
            }
        }
        photons.push_back({parts[0], *pol, InternalState::basis(reg.internal_dim(), k)});
    }
    if (photons.empty()) {
        throw validation_error("no input photons given");
    }
    return photons;
}

Json cmd_simulate(const std::string &file, const std::string &input_spec) {
    CircuitDocument doc = read_circuit_file(file);
    const ModeRegistry &reg = *doc.circuit.registry;
    auto photons = parse_input_spec(input_spec, reg);
    FockState out = evolve(make_fock_input(photons, doc.circuit.registry), doc.circuit);
    HeraldResult result = herald(out, doc.herald);

    Json outcomes = Json::array();
    for (const auto &[counts, p] : path_count_distribution(out)) {
        if (p < kDisplayFloor) {
            continue;
        }
        std::string label;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] > 0) {
                label += (label.empty() ? "" : " ") + reg.paths()[i] + "=" + std::to_string(counts[i]);
            }
        }
        outcomes.push_back(Json{{"paths", label}, {"probability", p}});
    }
    Json report{{"command", "simulate"},
                {"file", file},
                {"input", input_spec},
                {"photons", photons.size()},
                {"herald_probability", chop(result.probability)},
                {"outcomes", outcomes}};
    if (doc.herald.outputs.size() == 2 && result.probability > 0) {
        OutputDensity density = output_density_matrix(result, doc.herald.outputs[0], doc.herald.outputs[1]);
        Eigen::Vector4d w = density.rho.matrix.diagonal().real();
        report["output_polarization"] = polarization_weights(w);
    }
    return report;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse:
        return kExitParse;
    case ErrorKind::PhysicsContract:
    case ErrorKind::CoherenceLoss:
    case ErrorKind::DegenerateCircuit:
        return kExitPhysics;
    default:
        return kExitValidation;
    }
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact few-photon simulator for a heralded two-photon entanglement filter", "entfilter"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string variant = "ppbs", detector = "threshold", format = "table", pooling = "pooled";
    double counts = 0;

    app.add_option("--variant", variant, "Filter construction")->check(CLI::IsMember({"original", "ppbs"}));
    app.add_option("--v-same", cfg.visibilities.v_same, "Same-pair HOM visibility")->check(CLI::Range(0.0, 1.0));
    app.add_option("--v-cross", cfg.visibilities.v_cross, "Cross-pair HOM visibility")->check(CLI::Range(0.0, 1.0));
    app.add_flag("--ideal", cfg.ideal, "Indistinguishable photons");
    app.add_option("--detector", detector, "Herald detector model")->check(CLI::IsMember({"threshold", "number"}));
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--pooling", pooling, "Fidelity estimator")->check(CLI::IsMember({"pooled", "per-input"}));
    app.add_option("--seed", cfg.seed, "Seed for synthetic counts");
    auto *counts_opt =
        app.add_option("--counts", counts, "Emit synthetic Poisson counts for this duration (s)")->check(CLI::PositiveNumber);
    app.add_option("--rate", cfg.rate, "Four-fold rate (1/s) of a channel with success probability 1/16")
        ->check(CLI::PositiveNumber);

    auto *herald_map_cmd = app.add_subcommand("herald-map", "Heralded operator of the built-in filter");
    auto *tables_cmd = app.add_subcommand("truth-tables", "Z->Z, X->Y and X->X truth tables with fidelities");
    auto *process_cmd = app.add_subcommand("process-report", "Process fidelity from three truth-table fidelities");
    std::vector<double> fidelities;
    std::string tables_file;
    process_cmd->add_option("fidelities", fidelities, "F_zz F_xy F_xx");
    process_cmd->add_option("--tables", tables_file, "JSON file with 4x4 count tables zz, xy, xx");
    auto *background_cmd = app.add_subcommand("background", "Double-pair ancilla background channel");
    auto *simulate_cmd = app.add_subcommand("simulate", "Run a circuit-description file");
    std::string circuit_file, input_spec;
    simulate_cmd->add_option("file", circuit_file, "Circuit-description file")->required();
    simulate_cmd->add_option("--input", input_spec, "Photons as path:pol[:k], comma separated")->required();
    auto *export_cmd = app.add_subcommand("export", "Write the built-in filter as a circuit-description file");
    std::string export_file;
    export_cmd->add_option("file", export_file, "Destination (stdout when omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitValidation;
    }

    cfg.variant = *parse_variant(variant);
    cfg.detector = detector == "number" ? DetectorModel::NumberResolving : DetectorModel::Threshold;
    cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Table;
    cfg.pooling = pooling == "per-input" ? FidelityPooling::PerInput : FidelityPooling::Pooled;
    if (counts_opt->count() > 0) {
        cfg.counts_duration = counts;
    }

    std::ostringstream buffer;
    try {
        if (export_cmd->parsed()) {
            CircuitDocument doc = build_filter_circuit(cfg.variant);
            if (export_file.empty()) {
                buffer << serialize_circuit(doc);
            } else {
                write_circuit_file(export_file, doc);
            }
        } else {
            Json report;
            if (herald_map_cmd->parsed()) {
                report = cmd_herald_map(cfg);
            } else if (tables_cmd->parsed()) {
                report = cmd_truth_tables(cfg);
            } else if (process_cmd->parsed()) {
                report = cmd_process_report(cfg, fidelities, tables_file);
            } else if (background_cmd->parsed()) {
                report = cmd_background(cfg);
            } else if (simulate_cmd->parsed()) {
                report = cmd_simulate(circuit_file, input_spec);
            }
            render(report, cfg.format, buffer);
            if (report.contains("process") && report["process"].contains("warning")) {
                err << "warning: " << report["process"]["warning"].get<std::string>() << "\n";
            }
        }
    } catch (const Error &e) {
        err << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    out << buffer.str();
    return kExitOk;
}

}  // namespace entfilter
