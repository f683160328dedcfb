// SPDX-License-Identifier: Apache-2.0
//
// raysense - deterministic radio propagation and multipath sensing simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Command line front end. Talks to the engine exclusively through the
// shared library's C interface (raysense.h); manifest handling and output
// formatting live here.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "raysense/raysense.h"

namespace
{

namespace fs = std::filesystem;

struct RunFlags
{
    std::string scenario;
    std::string out;
    int max_order = -1;
    double grid_cell = 0.0;
    double bandwidth_hz = 0.0;
    std::optional<double> noise_dbm;
    std::uint64_t seed = 0;
    std::optional<double> threshold;
    std::optional<double> calibrate_margin;
    bool dump_paths = false;
    bool dump_cir = false;
    double max_seconds = 0.0;
    int threads = 0;
};

// Exit contract: 0 ok, 1 diagnostic failure, 2 wall-clock budget exceeded.
int status_to_exit(rs_status st)
{
    if (st == RS_OK)
        return 0;
    return st == RS_ERR_BUDGET ? 2 : 1;
}

const char *status_name(rs_status st)
{
    switch (st)
    {
    case RS_OK: return "ok";
    case RS_ERR_PARSE: return "parse_error";
    case RS_ERR_VALIDATION: return "validation_error";
    case RS_ERR_IO: return "io_error";
    case RS_ERR_BUDGET: return "budget_exceeded";
    case RS_ERR_ARGUMENT: return "argument_error";
    default: return "internal_error";
    }
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ConfigHandle
{
    rs_config *ptr = rs_config_new();
    ~ConfigHandle() { rs_config_free(ptr); }
};

void apply_flags(rs_config *cfg, const RunFlags &f)
{
    if (f.max_order >= 0)
        rs_config_set_max_order(cfg, f.max_order);
    if (f.grid_cell > 0.0)
        rs_config_set_grid_cell(cfg, f.grid_cell);
    if (f.bandwidth_hz > 0.0)
        rs_config_set_bandwidth(cfg, f.bandwidth_hz);
    if (f.noise_dbm)
        rs_config_set_noise(cfg, *f.noise_dbm, f.seed);
    if (f.threshold)
        rs_config_set_threshold(cfg, *f.threshold);
    else if (f.calibrate_margin)
        rs_config_set_calibrate_margin(cfg, *f.calibrate_margin);
    if (f.dump_paths)
        rs_config_set_dump_paths(cfg, 1);
    if (f.dump_cir)
        rs_config_set_dump_cir(cfg, 1);
    if (f.max_seconds > 0.0)
        rs_config_set_max_seconds(cfg, f.max_seconds);
    if (f.threads > 0)
        rs_config_set_threads(cfg, f.threads);
}

int do_run(const RunFlags &f)
{
    rs_scenario *scn = nullptr;
    rs_status st = rs_scenario_load_file(f.scenario.c_str(), &scn);
    if (st != RS_OK)
    {
        std::fprintf(stderr, "error: %s\n", rs_last_error());
        return status_to_exit(st);
    }

    ConfigHandle cfg;
    apply_flags(cfg.ptr, f);

    rs_report *rep = nullptr;
    st = rs_run(scn, cfg.ptr, f.out.c_str(), &rep);
    if (st != RS_OK)
    {
        std::fprintf(stderr, "error: %s\n", rs_last_error());
        rs_scenario_free(scn);
        return status_to_exit(st);
    }

    int width = 0, height = 0;
    rs_report_heatmap_size(rep, &width, &height);
    std::printf("scenario: %s (%zu nodes, %zu targets, %zu lots, hash %016llx)\n",
                f.scenario.c_str(), rs_scenario_node_count(scn), rs_scenario_target_count(scn),
                rs_scenario_lot_count(scn),
                static_cast<unsigned long long>(rs_scenario_hash(scn)));
    std::printf("heatmap: %dx%d cells, max %.6g\n", width, height, rs_report_heatmap_max(rep));
    std::printf("threshold: %.6g\n", rs_report_threshold(rep));
    for (std::size_t k = 0; k < rs_report_lot_count(rep); ++k)
        std::printf("lot %-12s score %-12.6g %s\n", rs_report_lot_id(rep, k),
                    rs_report_lot_score(rep, k),
                    rs_report_lot_occupied(rep, k) ? "occupied" : "free");
    if (rs_report_truncated_links(rep) > 0)
        std::fprintf(stderr, "warning: %d links have taps outside the CIR sample window\n",
                     rs_report_truncated_links(rep));
    std::printf("done in %.2f s, artifacts in %s\n", rs_report_wall_seconds(rep), f.out.c_str());

    rs_report_free(rep);
    rs_scenario_free(scn);
    return 0;
}

int do_sweep(const std::string &manifest_path, const std::string &out_dir)
{
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in)
    {
        std::fprintf(stderr, "error: cannot open manifest '%s'\n", manifest_path.c_str());
        return 1;
    }
    nlohmann::json manifest;
    try
    {
        in >> manifest;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: manifest syntax: %s\n", e.what());
        return 1;
    }
    if (!manifest.contains("runs") || !manifest["runs"].is_array() || manifest["runs"].empty())
    {
        std::fprintf(stderr, "error: manifest must contain a non-empty 'runs' array\n");
        return 1;
    }

    const fs::path manifest_dir = fs::path(manifest_path).parent_path();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
    {
        std::fprintf(stderr, "error: cannot create '%s': %s\n", out_dir.c_str(),
                     ec.message().c_str());
        return 1;
    }

    const fs::path summary_path = fs::path(out_dir) / "summary.csv";
    std::ofstream summary(summary_path);
    if (!summary)
    {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n",
                     summary_path.string().c_str());
        return 1;
    }
    summary << "name,scenario,bandwidth_hz,node_count,lot_id,score,occupied,wall_seconds,status\n";

    std::set<std::string> seen_names;
    for (const auto &entry : manifest["runs"])
    {
        if (!entry.contains("name") || !entry["name"].is_string() || !entry.contains("scenario"))
        {
            std::fprintf(stderr, "error: every run needs 'name' and 'scenario'\n");
            return 1;
        }
        std::string name = entry["name"].get<std::string>();
        for (char &c : name)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
                c = '_';
        if (name.empty() || !seen_names.insert(name).second)
        {
            std::fprintf(stderr, "error: run names must be unique and non-empty ('%s')\n",
                         name.c_str());
            return 1;
        }

        const std::string scenario_rel = entry["scenario"].get<std::string>();
        const fs::path scenario_path = fs::path(scenario_rel).is_absolute()
                                           ? fs::path(scenario_rel)
                                           : manifest_dir / scenario_rel;

        RunFlags f;
        f.scenario = scenario_path.string();
        f.out = (fs::path(out_dir) / name).string();
        f.max_order = entry.value("max_order", -1);
        f.grid_cell = entry.value("grid_cell", 0.0);
        f.bandwidth_hz = entry.value("bandwidth_hz", 0.0);
        if (entry.contains("noise_dbm"))
        {
            f.noise_dbm = entry["noise_dbm"].get<double>();
            f.seed = entry.value("seed", 0ull);
        }
        if (entry.contains("threshold"))
            f.threshold = entry["threshold"].get<double>();
        else if (entry.contains("calibrate_margin"))
            f.calibrate_margin = entry["calibrate_margin"].get<double>();
        f.max_seconds = entry.value("max_seconds", 0.0);
        f.threads = entry.value("threads", 0);

        auto fail_row = [&](rs_status st) {
            summary << name << ',' << scenario_rel << ",,,,,,," << status_name(st) << '\n';
            std::fprintf(stderr, "run %s: %s (%s)\n", name.c_str(), status_name(st),
                         rs_last_error());
        };

        rs_scenario *scn = nullptr;
        rs_status st = rs_scenario_load_file(f.scenario.c_str(), &scn);
        if (st != RS_OK)
        {
            fail_row(st);
            continue;
        }

        ConfigHandle cfg;
        apply_flags(cfg.ptr, f);
        rs_report *rep = nullptr;
        st = rs_run(scn, cfg.ptr, f.out.c_str(), &rep);
        if (st != RS_OK)
        {
            fail_row(st);
            rs_scenario_free(scn);
            continue;
        }

        const double bw =
            f.bandwidth_hz > 0.0 ? f.bandwidth_hz : rs_scenario_bandwidth_hz(scn);
        const std::size_t nodes = rs_scenario_node_count(scn);
        const double wall = rs_report_wall_seconds(rep);
        const std::size_t lot_count = rs_report_lot_count(rep);
        if (lot_count == 0)
        {
            summary << name << ',' << scenario_rel << ',' << fmt17(bw) << ',' << nodes
                    << ",,,," << fmt17(wall) << ",ok\n";
        }
        for (std::size_t k = 0; k < lot_count; ++k)
        {
            summary << name << ',' << scenario_rel << ',' << fmt17(bw) << ',' << nodes << ','
                    << rs_report_lot_id(rep, k) << ',' << fmt17(rs_report_lot_score(rep, k))
                    << ',' << (rs_report_lot_occupied(rep, k) ? "true" : "false") << ','
                    << fmt17(wall) << ",ok\n";
        }
        std::printf("run %s: ok (%.2f s)\n", name.c_str(), wall);

        rs_report_free(rep);
        rs_scenario_free(scn);
    }

    summary.flush();
    if (!summary)
    {
        std::fprintf(stderr, "error: write to '%s' failed\n", summary_path.string().c_str());
        return 1;
    }
    std::printf("summary: %s\n", summary_path.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"deterministic radio propagation and multipath sensing simulator"};
    app.set_version_flag("--version", std::string(rs_version()));
    app.require_subcommand(1);

    RunFlags f;
    CLI::App *run = app.add_subcommand("run", "simulate one scenario, write heatmap and report");
    run->add_option("--scenario", f.scenario, "scenario JSON file")->required();
    run->add_option("--out", f.out, "output directory for artifacts")->required();
    run->add_option("--max-order", f.max_order, "reflection order override (0..3)");
    run->add_option("--grid-cell", f.grid_cell, "grid cell size override [m]");
    run->add_option("--bandwidth-hz", f.bandwidth_hz, "bandwidth override [Hz]");
    auto *noise_opt =
        run->add_option("--noise-dbm", f.noise_dbm, "additive noise power per sample [dBm]");
    auto *seed_opt = run->add_option("--seed", f.seed, "noise seed");
    noise_opt->needs(seed_opt);
    seed_opt->needs(noise_opt);
    auto *thr_opt = run->add_option("--threshold", f.threshold, "explicit occupancy threshold");
    auto *margin_opt = run->add_option("--calibrate-margin", f.calibrate_margin,
                                       "threshold = margin * max empty-scene lot score");
    thr_opt->excludes(margin_opt);
    margin_opt->excludes(thr_opt);
    run->add_flag("--dump-paths", f.dump_paths, "write per-link propagation paths (paths.json)");
    run->add_flag("--dump-cir", f.dump_cir, "write per-link CIRs (cir/*.csv)");
    run->add_option("--max-seconds", f.max_seconds, "wall-clock budget, exceeded -> exit 2");
    run->add_option("--threads", f.threads, "worker threads (default: hardware)");

    std::string manifest, sweep_out;
    CLI::App *sweep = app.add_subcommand("sweep", "run a manifest of configs, write summary.csv");
    sweep->add_option("--manifest", manifest, "manifest JSON file")->required();
    sweep->add_option("--out", sweep_out, "output directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 1;
    }

    if (run->parsed())
        return do_run(f);
    return do_sweep(manifest, sweep_out);
}
