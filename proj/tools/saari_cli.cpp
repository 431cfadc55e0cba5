#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saari/core.hpp"
#include "saari/csv.hpp"
#include "saari/scenario.hpp"

namespace {

using saari::Json;

// "--key value" pairs after a shorthand subcommand. Values are read as JSON
// when possible, then as comma lists of numbers, then as plain strings.
Json parse_extras(const std::vector<std::string>& args) {
    Json params = Json::object();
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3) throw saari::ParseError("unexpected argument '" + a + "'");
        std::string key = a.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw saari::ParseError("--" + key + ": missing value");
            value = args[++i];
        }
        Json v = Json::parse(value, nullptr, false);
        if (v.is_discarded() && value.find(',') != std::string::npos) {
            v = Json::parse("[" + value + "]", nullptr, false);
        }
        if (v.is_discarded()) v = value;
        params[key] = v;
    }
    return params;
}

unsigned default_threads() {
    for (const char* name : {"SAARI_THREADS", "TOOL_THREADS"}) {
        if (const char* v = std::getenv(name)) {
            const int n = std::atoi(v);
            if (n > 0) return static_cast<unsigned>(n);
        }
    }
    return 1;
}

void write_outputs(const saari::Report& rep, const std::string& out, const std::string& csv_dir) {
    const std::string text = rep.json.dump(2);
    if (out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw saari::IoError("cannot open " + out + " for writing");
        f << text << "\n";
        if (!f) throw saari::IoError("failed writing " + out);
    }
    if (!csv_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(csv_dir, ec);
        if (ec) throw saari::IoError("cannot create " + csv_dir + ": " + ec.message());
        for (const auto& s : rep.series) saari::emit_csv(s, std::filesystem::path(csv_dir) / (s.name + ".csv"));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Saari conjecture numerics: central configurations, rigidity, Kronecker search, "
                 "Kepler/Bessel planetary analysis and action minimization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", saari::kVersion);

    std::string out, csv_dir;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "Write the JSON report here instead of stdout");
        sub->add_option("--csv", csv_dir, "Directory for per-step CSV tables");
        sub->add_option("--seed", seed, "Override the scenario seed");
        sub->add_option("--threads", threads, "Worker threads (default: SAARI_THREADS or TOOL_THREADS, else 1)");
    };

    std::string scenario_path;
    CLI::App* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(run);

    std::vector<std::pair<std::string, CLI::App*>> shorthands;
    for (const auto& kind : saari::scenario_kinds()) {
        CLI::App* sub = app.add_subcommand(kind, "Run a '" + kind + "' scenario from --key value parameters");
        add_common(sub);
        sub->allow_extras();
        shorthands.emplace_back(kind, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        saari::Scenario sc;
        if (*run) {
            sc = saari::load_scenario(scenario_path);
        } else {
            for (const auto& [kind, sub] : shorthands) {
                if (!*sub) continue;
                Json j{{"kind", kind}, {"parameters", parse_extras(sub->remaining())}};
                sc = saari::parse_scenario(j.dump(), "<command line>");
            }
        }
        saari::RunOptions opts;
        if (seed != 0 || app.get_subcommands().front()->count("--seed") > 0) opts.seed = seed;
        opts.threads = threads;
        const saari::Report rep = saari::run_scenario(sc, opts);
        write_outputs(rep, out, csv_dir);
    } catch (const saari::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
