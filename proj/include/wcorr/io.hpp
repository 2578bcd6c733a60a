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

#ifndef WCORR_IO_HPP
#define WCORR_IO_HPP

// State, configuration and basis files (JSON), and the fixed-format report
// writer used by the command-line front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "wcorr/bases.hpp"
#include "wcorr/error.hpp"
#include "wcorr/estimator.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

using Json = nlohmann::ordered_json;

/// Malformed input text or schema; line/column are 1-based, 0 when unknown.
class ParseError : public Error {
   public:
    ParseError(const std::string &detail, std::size_t line = 0, std::size_t column = 0)
        : Error("parse-error", locate(detail, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

   private:
    static std::string locate(const std::string &detail, std::size_t line, std::size_t column) {
        if (line == 0) {
            return detail;
        }
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail;
    }
    std::size_t line_, column_;
};

inline Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        // byte is the 1-based offset of the offending character
        std::size_t line = 1, column = 1;
        std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        auto at = what.find("parse error");
        auto colon = at == std::string::npos ? std::string::npos : what.find(": ", at);
        throw ParseError(colon == std::string::npos ? what : what.substr(colon + 2), line, column);
    }
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline const Json &require_key(const Json &obj, const char *key, const std::string &where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(where + ": missing key \"" + key + "\"");
    }
    return obj.at(key);
}

inline double as_number(const Json &v, const std::string &where) {
    if (!v.is_number()) {
        throw ParseError(where + ": expected a number");
    }
    return v.get<double>();
}

inline std::size_t as_count(const Json &v, const std::string &where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(where + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline Complex as_complex(const Json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2) {
        throw ParseError(where + ": complex numbers are [re, im] pairs");
    }
    return {as_number(v[0], where), as_number(v[1], where)};
}

inline Dims as_dims(const Json &v, const std::string &where) {
    if (!v.is_array() || v.empty()) {
        throw ParseError(where + ": dims must be a nonempty array");
    }
    Dims dims;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dims.push_back(as_count(v[i], where + "[" + std::to_string(i) + "]"));
        if (dims.back() == 0) {
            throw InvariantViolation("bad-dimension", where + ": subsystem of dimension 0");
        }
    }
    return dims;
}

inline ComplexVector as_complex_vector(const Json &v, const std::string &where) {
    if (!v.is_array()) {
        throw ParseError(where + ": expected an array of [re, im] pairs");
    }
    ComplexVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = as_complex(v[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
}

inline Json complex_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

}  // namespace detail

/// A state as written on disk: dense row-major entries or a pure-state
/// decomposition sum_n p_n |psi_n><psi_n|.
struct StateFile {
    struct Term {
        double p;
        ComplexVector amplitudes;
    };

    Dims dims;
    std::optional<ComplexMatrix> entries;
    std::vector<Term> terms;

    bool is_dense() const noexcept { return entries.has_value(); }

    DensityMatrix to_density() const {
        if (entries) {
            return DensityMatrix(dims, *entries);
        }
        auto d = static_cast<Eigen::Index>(total_dim(dims));
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        double total = 0.0;
        for (const auto &t : terms) {
            PureState psi(dims, t.amplitudes);
            m += t.p * psi.projector();
            total += t.p;
        }
        // weights are only required to sum to 1 within 1e-9
        m /= total;
        return DensityMatrix(dims, m);
    }
};

inline StateFile parse_state(std::string_view text) {
    Json doc = parse_json(text);
    if (!doc.is_object()) {
        throw ParseError("state file must be a JSON object");
    }
    StateFile out;
    out.dims = detail::as_dims(detail::require_key(doc, "dims", "state"), "state.dims");
    const std::size_t d = total_dim(out.dims);
    const bool dense = doc.contains("entries");
    const bool decomposition = doc.contains("terms");
    if (dense == decomposition) {
        throw ParseError("state: exactly one of \"entries\" or \"terms\" is required");
    }
    if (dense) {
        auto v = detail::as_complex_vector(doc.at("entries"), "state.entries");
        if (static_cast<std::size_t>(v.size()) != d * d) {
            throw InvariantViolation("entry-count", "expected " + std::to_string(d * d) + " entries, got " +
                                                        std::to_string(v.size()));
        }
        ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                m(r, c) = v(r * m.cols() + c);
            }
        }
        out.entries = std::move(m);
        return out;
    }
    const Json &terms = doc.at("terms");
    if (!terms.is_array() || terms.empty()) {
        throw ParseError("state.terms must be a nonempty array");
    }
    double total = 0.0;
    for (std::size_t n = 0; n < terms.size(); ++n) {
        std::string where = "state.terms[" + std::to_string(n) + "]";
        StateFile::Term t{detail::as_number(detail::require_key(terms[n], "p", where), where + ".p"),
                          detail::as_complex_vector(detail::require_key(terms[n], "amplitudes", where),
                                                    where + ".amplitudes")};
        if (!(t.p > 0.0)) {
            throw InvariantViolation("positive-weights", where + ".p must be > 0");
        }
        if (static_cast<std::size_t>(t.amplitudes.size()) != d) {
            throw InvariantViolation("amplitude-count", where + ": expected " + std::to_string(d) + " amplitudes");
        }
        total += t.p;
        out.terms.push_back(std::move(t));
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvariantViolation("weights-sum-to-one", "decomposition weights sum to " + std::to_string(total));
    }
    return out;
}

inline std::string serialize_state(const StateFile &state) {
    Json doc;
    doc["dims"] = state.dims;
    if (state.entries) {
        Json entries = Json::array();
        for (Eigen::Index r = 0; r < state.entries->rows(); ++r) {
            for (Eigen::Index c = 0; c < state.entries->cols(); ++c) {
                entries.push_back(detail::complex_json((*state.entries)(r, c)));
            }
        }
        doc["entries"] = std::move(entries);
    } else {
        Json terms = Json::array();
        for (const auto &t : state.terms) {
            Json amps = Json::array();
            for (Eigen::Index i = 0; i < t.amplitudes.size(); ++i) {
                amps.push_back(detail::complex_json(t.amplitudes(i)));
            }
            terms.push_back(Json{{"p", t.p}, {"amplitudes", std::move(amps)}});
        }
        doc["terms"] = std::move(terms);
    }
    return doc.dump(2) + "\n";
}

inline StateFile dense_state_file(const DensityMatrix &rho) {
    return StateFile{rho.dims(), rho.matrix(), {}};
}

/// {"dims": [...], "vectors": [{"label": "...", "amplitudes": [[re, im], ...]}, ...]}
inline BasisSet parse_basis(std::string_view text) {
    Json doc = parse_json(text);
    Dims dims = detail::as_dims(detail::require_key(doc, "dims", "basis"), "basis.dims");
    const Json &vectors = detail::require_key(doc, "vectors", "basis");
    if (!vectors.is_array()) {
        throw ParseError("basis.vectors must be an array");
    }
    std::vector<PureState> states;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        std::string where = "basis.vectors[" + std::to_string(k) + "]";
        const Json &v = vectors[k];
        labels.push_back(v.is_object() && v.contains("label") && v.at("label").is_string()
                             ? v.at("label").get<std::string>()
                             : std::to_string(k + 1));
        auto amps = detail::as_complex_vector(detail::require_key(v, "amplitudes", where), where + ".amplitudes");
        states.emplace_back(dims, std::move(amps));
    }
    return BasisSet(std::move(dims), std::move(states), std::move(labels));
}

/// Outcome selection: explicit readings or every branch.
struct OutcomeSpec {
    bool enumerate = false;
    /// Conveyance readings (one per party but the last) followed by the broadcast reading.
    std::vector<std::size_t> readings;
};

struct RunConfig {
    Backend backend = Backend::analytic;
    ConveyanceMode mode = ConveyanceMode::idealized;
    double g = 1e-3;
    double sigma = 1.0 / std::sqrt(2.0);
    OutcomeSpec outcomes;
    /// "hadamard" or a path to a basis file (resolved against the config's directory).
    std::string postselection_basis = "hadamard";
    std::uint64_t seed = 7;
    bool skip_broadcast = false;

    void validate() const {
        PointerConfig{g, sigma}.validate();
    }
};

inline Backend parse_backend(const std::string &s) {
    if (s == "analytic") return Backend::analytic;
    if (s == "circuit") return Backend::circuit;
    throw ParseError("backend must be \"analytic\" or \"circuit\", got \"" + s + "\"");
}

inline ConveyanceMode parse_mode(const std::string &s) {
    if (s == "literal") return ConveyanceMode::literal;
    if (s == "idealized") return ConveyanceMode::idealized;
    throw ParseError("mode must be \"literal\" or \"idealized\", got \"" + s + "\"");
}

inline RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {}) {
    Json doc = parse_json(text);
    if (!doc.is_object()) {
        throw ParseError("config file must be a JSON object");
    }
    RunConfig cfg;
    for (const auto &[key, value] : doc.items()) {
        const std::string where = "config." + key;
        if (key == "backend" || key == "mode" || key == "postselection_basis") {
            if (!value.is_string()) {
                throw ParseError(where + ": expected a string");
            }
            auto s = value.get<std::string>();
            if (key == "backend") {
                cfg.backend = parse_backend(s);
            } else if (key == "mode") {
                cfg.mode = parse_mode(s);
            } else {
                cfg.postselection_basis =
                    (s == "hadamard" || base_dir.empty() || std::filesystem::path(s).is_absolute())
                        ? s
                        : (base_dir / s).string();
            }
        } else if (key == "g") {
            cfg.g = detail::as_number(value, where);
        } else if (key == "sigma") {
            cfg.sigma = detail::as_number(value, where);
        } else if (key == "seed") {
            cfg.seed = detail::as_count(value, where);
        } else if (key == "skip_broadcast") {
            if (!value.is_boolean()) {
                throw ParseError(where + ": expected true or false");
            }
            cfg.skip_broadcast = value.get<bool>();
        } else if (key == "outcomes") {
            if (value.is_string() && value.get<std::string>() == "enumerate") {
                cfg.outcomes.enumerate = true;
            } else if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) {
                    cfg.outcomes.readings.push_back(detail::as_count(value[i], where + "[" + std::to_string(i) + "]"));
                }
            } else {
                throw ParseError(where + ": expected an array of readings or \"enumerate\"");
            }
        } else {
            throw ParseError("config: unknown key \"" + key + "\"");
        }
    }
    cfg.validate();
    return cfg;
}

/// Fixed float formatting: 12 significant digits, explicit exponent.
inline std::string format_double(double x) {
    if (x == 0.0) {
        x = 0.0;  // no "-0"
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

namespace detail {

inline void dump_json(const Json &v, std::string &out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto &[key, child] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(key).dump() + ": ";
                dump_json(child, out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            bool flat = std::all_of(v.begin(), v.end(), [](const Json &e) { return e.is_primitive(); });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    dump_json(v[i], out, indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump_json(v[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
    }
}

}  // namespace detail

/// JSON text with every float in format_double form.
inline std::string dump_report(const Json &doc) {
    std::string out;
    detail::dump_json(doc, out, 0);
    out += "\n";
    return out;
}

}  // namespace wcorr

#endif  // WCORR_IO_HPP
