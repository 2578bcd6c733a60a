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

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcorr/wcorr.hpp"

namespace {

enum ExitCode { kOk = 0, kInput = 2, kInvariant = 3, kNumerical = 4 };

struct Flags {
    std::string state_path;
    std::string config_path;
    std::optional<std::string> backend;
    std::optional<std::string> mode;
    std::optional<double> g;
    std::optional<double> sigma;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format;
    std::vector<double> g_list;
    std::size_t qubits = 3;
    std::size_t random_parties = 3;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("wcorr");
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char *level = std::getenv("WCORR_LOG_LEVEL")) {
        logger->set_level(spdlog::level::from_str(level));
    }
    spdlog::set_default_logger(logger);
}

wcorr::RunConfig load_config(const Flags &f) {
    wcorr::RunConfig cfg;
    if (!f.config_path.empty()) {
        std::filesystem::path p(f.config_path);
        cfg = wcorr::parse_config(wcorr::read_file(p), p.parent_path());
    }
    if (f.backend) cfg.backend = wcorr::parse_backend(*f.backend);
    if (f.mode) cfg.mode = wcorr::parse_mode(*f.mode);
    if (f.g) cfg.g = *f.g;
    if (f.sigma) cfg.sigma = *f.sigma;
    if (f.seed) cfg.seed = *f.seed;
    cfg.validate();
    return cfg;
}

wcorr::DensityMatrix load_state(const Flags &f, const wcorr::RunConfig &cfg) {
    if (f.state_path.empty()) {
        spdlog::info("no --state given; random state with seed {}", cfg.seed);
        return wcorr::random_density_matrix(wcorr::Dims(f.random_parties, 2), cfg.seed);
    }
    auto text = wcorr::read_file(f.state_path);
    try {
        return wcorr::parse_state(text).to_density();
    } catch (const wcorr::ParseError &e) {
        throw wcorr::ParseError(f.state_path + ": " + e.detail());
    }
}

void emit(const Flags &f, const std::string &text) {
    if (f.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(f.out_path, std::ios::binary);
    if (!out) {
        throw wcorr::ParseError("cannot write " + f.out_path);
    }
    out << text;
    spdlog::info("wrote {}", f.out_path);
}

void add_common(CLI::App *cmd, Flags &f) {
    cmd->add_option("--state", f.state_path, "state file (random state when omitted)");
    cmd->add_option("--config", f.config_path, "run configuration file");
    cmd->add_option("--backend", f.backend, "analytic or circuit");
    cmd->add_option("--mode", f.mode, "literal or idealized");
    cmd->add_option("--g", f.g, "pointer coupling strength");
    cmd->add_option("--sigma", f.sigma, "pointer width");
    cmd->add_option("--seed", f.seed, "seed for the random state");
    cmd->add_option("--parties", f.random_parties, "qubits in the random state")->check(CLI::Range(2, 8));
    cmd->add_option("--out", f.out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int dispatch(CLI::App &app, const Flags &f) {
    auto *run = app.get_subcommand("run");
    auto *sweep = app.get_subcommand("sweep");
    auto *tables = app.get_subcommand("tables");
    auto *oracle = app.get_subcommand("oracle");

    if (tables->parsed()) {
        emit(f, wcorr::tables_text(f.qubits));
        return kOk;
    }
    auto cfg = load_config(f);
    auto rho = load_state(f, cfg);
    auto started = std::chrono::steady_clock::now();
    if (run->parsed()) {
        auto doc = wcorr::run_document(rho, cfg);
        emit(f, f.format == "csv" ? wcorr::run_csv(doc) : wcorr::dump_report(doc));
    } else if (sweep->parsed()) {
        auto rows = wcorr::sweep(rho, cfg, f.g_list);
        emit(f, f.format == "json" ? wcorr::dump_report(wcorr::sweep_document(rows)) : wcorr::sweep_csv(rows));
    } else if (oracle->parsed()) {
        emit(f, wcorr::dump_report(wcorr::oracle_document(rho)));
    }
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    spdlog::debug("finished in {:.1f} ms", ms);
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    setup_logging();
    CLI::App app{"Weak-measurement correlation estimator"};
    app.require_subcommand(1);
    Flags f;
    add_common(app.add_subcommand("run", "estimate the correlation of a state"), f);
    auto *sweep = app.add_subcommand("sweep", "circuit backend over a descending list of couplings");
    add_common(sweep, f);
    sweep->add_option("--g-list", f.g_list, "couplings, strictly descending")->delimiter(',');
    auto *tables = app.add_subcommand("tables", "device operator layout and postselection basis");
    tables->add_option("qubits", f.qubits, "number of qubits")->check(CLI::Range(1, 10));
    add_common(app.add_subcommand("oracle", "direct and reconstructed matrix elements"), f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInput;
    }

    try {
        return dispatch(app, f);
    } catch (const wcorr::ParseError &e) {
        spdlog::error("{}", e.what());
        return kInput;
    } catch (const wcorr::InvariantViolation &e) {
        spdlog::error("invariant violated: {}", e.detail());
        return kInvariant;
    } catch (const wcorr::Error &e) {
        if (e.code() == "numerical-failure" || e.code() == "eigensolver") {
            spdlog::error("numerical failure: {}", e.what());
            return kNumerical;
        }
        spdlog::error("invariant violated: {}: {}", e.code(), e.detail());
        return kInvariant;
    } catch (const std::exception &e) {
        spdlog::error("numerical failure: {}", e.what());
        return kNumerical;
    }
}
