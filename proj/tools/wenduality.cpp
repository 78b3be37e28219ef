// Copyright 2026 The wenduality Authors
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

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli/commands.hpp"

namespace fs = std::filesystem;
using namespace wenduality;
using namespace wenduality::cli;

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    std::string format = "csv";
    int threads = 1;
    double tol = 0.0;
    std::vector<std::string> set;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw ConfigError("write to '" + p.string() + "' failed");
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int run(const std::string& name, const Flags& flags, CLI::App* sub) {
    Config cfg = flags.config.empty() ? Config::parse("", "<defaults>") : Config::load(flags.config);
    for (const auto& kv : flags.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (sub->count("--tol")) cfg.set("tol", format_double(flags.tol));
    if (flags.threads < 1) throw ConfigError("--threads must be at least 1");

    // The hash covers the command and the effective configuration; thread
    // count and output format do not change results.
    const std::string hash = "fnv1a64:" + hex64(fnv1a64("command = " + name + "\n" + cfg.canonical()));
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = find_command(name)(cfg, RunOptions{flags.threads});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(flags.out);
    const OutputHeader header{"wenduality", WENDUALITY_VERSION, name, hash};
    std::vector<std::string> files;
    for (std::size_t i = 0; i < r.tables.size(); ++i) {
        const auto& t = r.tables[i];
        const std::string stem = i == 0 ? name : name + "_" + t.name;
        const fs::path p = fs::path(flags.out) / (stem + "." + flags.format);
        write_file(p, flags.format == "csv" ? to_csv(t, header) : to_json(t, header).dump(2) + "\n");
        files.push_back(p.filename().string());
    }
    nlohmann::ordered_json meta;
    meta["program"] = header.program;
    meta["version"] = header.version;
    meta["command"] = name;
    meta["config_hash"] = hash;
    meta["config"] = cfg.canonical();
    meta["config_source"] = flags.config;
    meta["timestamp_utc"] = utc_timestamp();
    meta["threads"] = flags.threads;
    meta["wall_seconds"] = wall;
    meta["files"] = files;
    meta["notes"] = r.notes;
    meta["exit_code"] = r.exit_code;
    write_file(fs::path(flags.out) / (name + ".meta.json"), meta.dump(2) + "\n");

    for (const auto& n : r.notes) std::cerr << name << ": " << n << "\n";
    for (const auto& f : files) std::cout << (fs::path(flags.out) / f).string() << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wen-plaquette model: exact diagonalization, dual Ising chains, sweeps and reports"};
    app.set_version_flag("--version", std::string(WENDUALITY_VERSION));
    app.require_subcommand(1);
    Flags flags;
    const std::pair<const char*, const char*> commands[] = {
        {"sweep", "ground-state observables over a coupling grid"},
        {"fig2", "critical gap against lattice size, with log-log fits"},
        {"eq4", "critical tau^x tau^x correlator against the closed form"},
        {"exponents", "order-parameter exponents from long-distance plateaus"},
        {"duality-check", "lattice spectra against the dual chains"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", flags.config, "key = value configuration file")->check(CLI::ExistingFile);
        s->add_option("--out", flags.out, "output directory")->capture_default_str();
        s->add_option("--format", flags.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        s->add_option("--threads", flags.threads, "worker threads")->capture_default_str();
        s->add_option("--tol", flags.tol, "tolerance (meaning depends on the command)");
        s->add_option("--set", flags.set, "override a configuration entry, key=value");
        subs.push_back(s);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }
    for (auto* s : subs) {
        if (!s->parsed()) continue;
        try {
            return run(s->get_name(), flags, s);
        } catch (const ConfigError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kValidation;
        } catch (const InvalidSpec& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kValidation;
        } catch (const Error& e) {
            std::cerr << "solver failure: " << e.what() << "\n";
            return kSolver;
        } catch (const std::exception& e) {
            std::cerr << "solver failure: " << e.what() << "\n";
            return kSolver;
        }
    }
    return kValidation;
}
