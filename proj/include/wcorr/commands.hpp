// Copyright 2026 The wcorr Authors
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

#ifndef WCORR_COMMANDS_HPP
#define WCORR_COMMANDS_HPP

// Report builders behind the run, sweep, tables and oracle subcommands.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wcorr/bases.hpp"
#include "wcorr/conveyance.hpp"
#include "wcorr/estimator.hpp"
#include "wcorr/io.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

namespace detail {

inline Json complex_pairs(const std::vector<Complex> &values) {
    Json out = Json::array();
    for (auto z : values) {
        out.push_back(complex_json(z));
    }
    return out;
}

inline Json one_based(const std::vector<std::size_t> &indices) {
    Json out = Json::array();
    for (auto i : indices) {
        out.push_back(i + 1);
    }
    return out;
}

inline Json number_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

}  // namespace detail

inline BasisSet load_postselection_basis(const RunConfig &cfg, const Dims &dims) {
    if (cfg.postselection_basis == "hadamard") {
        detail::require_qubits(dims);
        return hadamard_mub(dims.size());
    }
    return parse_basis(read_file(cfg.postselection_basis));
}

/// Splits configured readings into conveyance outcomes and the broadcast reading.
inline CorrelationOptions options_for(const RunConfig &cfg, const Dims &dims, const std::vector<std::size_t> &readings,
                                      const BasisSet &basis) {
    CorrelationOptions opts;
    opts.backend = cfg.backend;
    opts.mode = cfg.mode;
    opts.pointer = PointerConfig{cfg.g, cfg.sigma};
    opts.skip_broadcast = cfg.skip_broadcast;
    opts.postselection = basis;
    const std::size_t n = dims.size();
    if (!readings.empty()) {
        if (readings.size() != n - 1 && readings.size() != n) {
            throw InvariantViolation("outcome-count", "expected " + std::to_string(n - 1) + " conveyance readings plus an optional broadcast reading, got " +
                                                          std::to_string(readings.size()));
        }
        opts.conveyance_outcomes.assign(readings.begin(), readings.begin() + static_cast<std::ptrdiff_t>(n - 1));
        if (readings.size() == n) {
            opts.broadcast_outcome = readings.back();
        }
    }
    return opts;
}

inline Json postselection_entries(const CorrelationReport &r) {
    Json out = Json::array();
    const auto &t = r.table;
    for (std::size_t k = 0; k < t.postselections(); ++k) {
        Json entry;
        entry["k"] = k + 1;
        entry["label"] = r.postselection_labels.at(k);
        entry["P"] = t.probability(k);
        entry["skipped"] = t.skipped(k);
        entry["term"] = r.per_k.at(k);
        if (t.skipped(k)) {
            entry["weak_values"] = nullptr;
        } else {
            Json lines;
            for (std::size_t line = 0; line < t.lines(); ++line) {
                std::vector<Complex> row;
                for (std::size_t i = 0; i < t.columns(); ++i) {
                    row.push_back(t.at(line, k, i));
                }
                lines["A" + std::to_string(line + 1)] = detail::complex_pairs(row);
            }
            entry["weak_values"] = std::move(lines);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

namespace detail {

inline void enumerate_readings(const Dims &dims, std::size_t party, std::vector<std::size_t> &current,
                               std::vector<std::vector<std::size_t>> &out) {
    if (party + 1 == dims.size()) {
        out.push_back(current);
        return;
    }
    for (std::size_t v = 0; v < dims[party]; ++v) {
        current.push_back(v);
        enumerate_readings(dims, party + 1, current, out);
        current.pop_back();
    }
}

}  // namespace detail

/// Every conveyance reading combination, times every shared broadcast reading
/// when copies are made.
inline std::vector<std::vector<std::size_t>> all_readings(const Dims &dims, const RunConfig &cfg) {
    std::vector<std::vector<std::size_t>> nus;
    std::vector<std::size_t> current;
    detail::enumerate_readings(dims, 0, current, nus);
    const bool copies = cfg.backend == Backend::circuit && !cfg.skip_broadcast;
    std::size_t mu_range = 1;
    if (copies) {
        mu_range = *std::min_element(dims.begin(), dims.end() - 1);
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto &nu : nus) {
        for (std::size_t mu = 0; mu < mu_range; ++mu) {
            auto r = nu;
            r.push_back(mu);
            out.push_back(std::move(r));
        }
    }
    return out;
}

inline Json run_document(const DensityMatrix &rho, const RunConfig &cfg) {
    cfg.validate();
    BasisSet basis = load_postselection_basis(cfg, rho.dims());
    auto report = correlation(rho, options_for(cfg, rho.dims(), cfg.outcomes.readings, basis));

    Json doc;
    doc["dims"] = rho.dims();
    doc["backend"] = to_string(cfg.backend);
    doc["mode"] = to_string(cfg.mode);
    doc["g"] = cfg.g;
    doc["sigma"] = cfg.sigma;
    doc["skip_broadcast"] = cfg.skip_broadcast;
    doc["postselection_basis"] = cfg.postselection_basis;
    doc["conveyance_outcomes"] = report.conveyance_outcomes;
    doc["broadcast_outcome"] = report.broadcast_outcome;
    doc["outcome_probability"] = report.outcome_probability;
    doc["C"] = report.correlation;
    doc["oracle_diag"] = report.oracle_diag;
    doc["skipped_k"] = detail::one_based(report.skipped);
    doc["diagnostics"] = Json{{"max_completeness_residual", report.max_completeness_residual},
                              {"min_postselection_probability", report.min_postselection_probability},
                              {"max_weak_value_residual", report.max_weak_value_residual}};
    doc["postselections"] = postselection_entries(report);

    if (cfg.outcomes.enumerate) {
        Json branches = Json::array();
        double total_p = 0.0, weighted = 0.0;
        for (const auto &readings : all_readings(rho.dims(), cfg)) {
            Json b;
            b["conveyance_outcomes"] = std::vector<std::size_t>(readings.begin(), readings.end() - 1);
            b["broadcast_outcome"] = readings.back();
            try {
                auto r = correlation(rho, options_for(cfg, rho.dims(), readings, basis));
                b["probability"] = r.outcome_probability;
                b["C"] = r.correlation;
                b["skipped_k"] = detail::one_based(r.skipped);
                total_p += r.outcome_probability;
                weighted += r.outcome_probability * r.correlation;
            } catch (const Error &e) {
                if (e.code() != "impossible-outcome") {
                    throw;
                }
                b["probability"] = 0.0;
                b["C"] = nullptr;
                b["skipped_k"] = Json::array();
            }
            branches.push_back(std::move(b));
        }
        doc["outcome_branches"] = std::move(branches);
        doc["branch_probability_total"] = total_p;
        doc["branch_weighted_C"] = total_p > 0.0 ? Json(weighted / total_p) : Json(nullptr);
    }
    return doc;
}

/// Per-postselection rows of a run report.
inline std::string run_csv(const Json &doc) {
    std::ostringstream out;
    out << "k,label,P,skipped,term\n";
    for (const auto &e : doc.at("postselections")) {
        out << e.at("k").get<std::size_t>() << ',' << e.at("label").get<std::string>() << ','
            << format_double(e.at("P").get<double>()) << ',' << (e.at("skipped").get<bool>() ? "true" : "false") << ','
            << format_double(e.at("term").get<double>()) << '\n';
    }
    out << "C," << format_double(doc.at("C").get<double>()) << "\n";
    return out.str();
}

struct SweepRow {
    double g;
    double correlation;
    double abs_error;
    double max_weak_value_residual;
    /// Previous row's abs_error over this one; NaN on the first row.
    double error_ratio;
};

inline std::vector<SweepRow> sweep(const DensityMatrix &rho, const RunConfig &cfg, const std::vector<double> &g_list) {
    if (g_list.empty()) {
        throw ParseError("sweep needs a nonempty g list");
    }
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        if (!(g_list[i] > 0.0)) {
            throw ParseError("sweep g values must be positive");
        }
        if (i > 0 && !(g_list[i] < g_list[i - 1])) {
            throw ParseError("sweep g values must be strictly descending");
        }
    }
    BasisSet basis = load_postselection_basis(cfg, rho.dims());
    std::vector<SweepRow> rows;
    for (double g : g_list) {
        RunConfig c = cfg;
        c.backend = Backend::circuit;
        c.g = g;
        c.validate();
        auto r = correlation(rho, options_for(c, rho.dims(), cfg.outcomes.readings, basis));
        SweepRow row{g, r.correlation, std::abs(r.correlation - r.oracle_diag), r.max_weak_value_residual,
                     std::numeric_limits<double>::quiet_NaN()};
        if (!rows.empty()) {
            row.error_ratio = rows.back().abs_error / row.abs_error;
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    out << "g,C_circuit,abs_error,max_wv_residual,error_ratio\n";
    for (const auto &r : rows) {
        out << format_double(r.g) << ',' << format_double(r.correlation) << ',' << format_double(r.abs_error) << ','
            << format_double(r.max_weak_value_residual) << ','
            << (std::isfinite(r.error_ratio) ? format_double(r.error_ratio) : std::string()) << '\n';
    }
    return out.str();
}

inline Json sweep_document(const std::vector<SweepRow> &rows) {
    Json out = Json::array();
    for (const auto &r : rows) {
        out.push_back(Json{{"g", r.g},
                           {"C_circuit", r.correlation},
                           {"abs_error", r.abs_error},
                           {"max_wv_residual", r.max_weak_value_residual},
                           {"error_ratio", detail::number_or_null(r.error_ratio)}});
    }
    return Json{{"sweep", std::move(out)}};
}

/// "(|00>+|01>-|10>-|11>)/sqrt(4)" for a uniform-magnitude real vector.
inline std::string sign_pattern(const PureState &b) {
    const std::size_t d = b.dim();
    const double mag = 1.0 / std::sqrt(static_cast<double>(d));
    std::string out = "(";
    for (std::size_t x = 0; x < d; ++x) {
        Complex a = b[x];
        if (std::abs(a.imag()) > tol::structural || std::abs(std::abs(a.real()) - mag) > tol::structural) {
            throw Error("bad-basis", "not a uniform real sign pattern");
        }
        if (a.real() < 0.0) {
            out += '-';
        } else if (x > 0) {
            out += '+';
        }
        auto digits = unravel(x, b.dims());
        out += "|" + digit_label(digits) + ">";
    }
    out += ")/sqrt(" + std::to_string(d) + ")";
    return out;
}

inline std::string tables_text(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw Error("bad-size", "tables need at least one qubit");
    }
    const Dims dims(n_qubits, 2);
    const auto table = device_table(dims);
    const auto basis = hadamard_mub(n_qubits);
    std::ostringstream out;
    out << "# device operators, " << n_qubits << " qubit" << (n_qubits == 1 ? "" : "s") << "\n";
    out << "line";
    for (std::size_t i = 0; i < table.columns(); ++i) {
        out << ',' << i + 1;
    }
    out << '\n';
    for (std::size_t line = 0; line < table.lines(); ++line) {
        out << 'A' << line + 1 << 'i';
        for (std::size_t i = 0; i < table.columns(); ++i) {
            out << ',' << table.operator_label(line, i);
        }
        out << '\n';
    }
    out << "reconstruction";
    for (std::size_t i = 0; i < table.columns(); ++i) {
        out << ',' << (table.reconstruction_holds(i) ? "OK" : "FAIL");
    }
    out << "\n\n# postselection basis\n";
    out << "k,label,state\n";
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out << k + 1 << ',' << basis.label(k) << ',' << sign_pattern(basis[k]) << '\n';
    }
    return out.str();
}

inline Json oracle_document(const DensityMatrix &rho, const std::optional<BasisSet> &postselection = std::nullopt) {
    BasisSet basis_b =
        postselection ? *postselection : (detail::require_qubits(rho.dims()), hadamard_mub(rho.dims().size()));
    const BasisSet basis_a = computational_basis(rho.dims());
    Json elements = Json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            Complex direct = rho(i, j);
            Complex rec = reconstruct_element(i, j, rho, basis_a, basis_b);
            double residual = std::abs(direct - rec);
            worst = std::max(worst, residual);
            elements.push_back(Json{{"i", i + 1},
                                    {"j", j + 1},
                                    {"direct", detail::complex_json(direct)},
                                    {"reconstructed", detail::complex_json(rec)},
                                    {"residual", residual}});
        }
    }
    auto parts = marginals(rho);
    auto product = tensor_product(std::span<const DensityMatrix>(parts));
    Json doc;
    doc["dims"] = rho.dims();
    doc["max_residual"] = worst;
    doc["oracle_diag"] = correlation_oracle_diag(rho);
    doc["trace_distance_to_product_of_marginals"] = trace_distance(rho, product);
    doc["elements"] = std::move(elements);
    return doc;
}

}  // namespace wcorr

#endif  // WCORR_COMMANDS_HPP
