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

#include "raysense/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "raysense/artifacts.hpp"
#include "raysense/errors.hpp"

namespace raysense
{

namespace
{

namespace fs = std::filesystem;

std::string sanitize_id(const std::string &id)
{
    std::string out = id;
    for (char &c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            c = '_';
    return out;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t link_noise_seed(std::uint64_t master, const std::string &stream,
                              const std::string &tx_id, const std::string &rx_id)
{
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](const std::string &part) {
        for (unsigned char c : part)
        {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xffu; // separator outside the id alphabet
        h *= 1099511628211ull;
    };
    feed(stream);
    feed(tx_id);
    feed(rx_id);
    return h ^ splitmix64(master);
}

Scenario apply_overrides(const Scenario &s, const RunOptions &opt)
{
    Scenario mod = s;
    if (opt.max_order >= 0)
        mod.radio.max_reflection_order = opt.max_order;
    if (opt.bandwidth_hz > 0.0)
        mod.radio.bandwidth_hz = opt.bandwidth_hz;
    if (opt.grid_cell_m > 0.0)
    {
        // Resolution change preserves the physical extent.
        mod.grid.cell_size = opt.grid_cell_m;
        mod.grid.width = std::max(1, static_cast<int>(std::llround(s.grid.extent_x() / opt.grid_cell_m)));
        mod.grid.height = std::max(1, static_cast<int>(std::llround(s.grid.extent_y() / opt.grid_cell_m)));
    }
    // The serialize/parse round trip re-checks every scenario invariant
    // against the overridden values.
    return parse_scenario(serialize_scenario(mod));
}

RunResult run_pipeline(const Scenario &input, const RunOptions &opt, const std::string &out_dir)
{
    using clock = std::chrono::steady_clock;
    const auto t_begin = clock::now();
    auto elapsed = [&t_begin] {
        return std::chrono::duration<double>(clock::now() - t_begin).count();
    };
    auto check_budget = [&] {
        if (opt.max_seconds > 0.0 && elapsed() > opt.max_seconds)
            throw BudgetError("wall-clock budget of " + format_double(opt.max_seconds) +
                              " s exceeded");
    };

    const Scenario s = apply_overrides(input, opt);
    if (s.nodes.size() < 2)
        throw ValidationError("pipeline: at least two nodes required");

    const Scenario ref = reference_scene(s);
    const std::vector<Surface> obs_geometry = expand_geometry(s);
    const std::vector<Surface> ref_geometry = expand_geometry(ref);
    const bool scene_changes = !s.targets.empty();
    const EllipseKernel kernel = default_kernel(s.radio.bandwidth_hz);

    const double noise_power =
        opt.noise.enabled ? std::pow(10.0, (opt.noise.power_dbm - 30.0) / 10.0) : 0.0;
    // A noiseless empty scene subtracts to exactly zero, so calibration
    // layers only need computing when noise is on.
    const bool calibrate = !opt.threshold.has_value();
    const bool cal_layers_needed = calibrate && opt.noise.enabled;

    struct LinkJob
    {
        const Node *tx;
        const Node *rx;
    };
    std::vector<LinkJob> jobs;
    jobs.reserve(s.nodes.size() * (s.nodes.size() - 1) / 2);
    for (std::size_t a = 0; a < s.nodes.size(); ++a)
        for (std::size_t b = a + 1; b < s.nodes.size(); ++b)
            jobs.push_back({&s.nodes[a], &s.nodes[b]});

    struct LinkOut
    {
        Heatmap layer;
        Heatmap cal_layer;
        bool truncated = false;
        SampledCir observed;
        SampledCir reference;
        DifferentialCir diff;
        std::vector<PropagationPath> paths;
    };
    std::vector<LinkOut> outs(jobs.size());

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&]() {
        try
        {
            for (;;)
            {
                if (stop.load(std::memory_order_relaxed))
                    return;
                const std::size_t idx = cursor.fetch_add(1);
                if (idx >= jobs.size())
                    return;
                check_budget();

                const Node &tx = *jobs[idx].tx;
                const Node &rx = *jobs[idx].rx;
                LinkOut &o = outs[idx];

                const auto paths_obs = enumerate_paths(obs_geometry, tx.position, rx.position,
                                                       s.radio.max_reflection_order);
                const auto paths_ref =
                    scene_changes ? enumerate_paths(ref_geometry, tx.position, rx.position,
                                                    s.radio.max_reflection_order)
                                  : paths_obs;

                SampledCir observed =
                    sample_bandlimited(assemble_cir(paths_obs, s.radio, tx.id, rx.id), s.radio);
                SampledCir reference =
                    sample_bandlimited(assemble_cir(paths_ref, s.radio, tx.id, rx.id), s.radio);
                o.truncated = observed.truncated_taps > 0 || reference.truncated_taps > 0;

                if (opt.noise.enabled)
                {
                    add_noise(observed, noise_power,
                              link_noise_seed(opt.noise.seed, "obs", tx.id, rx.id));
                    add_noise(reference, noise_power,
                              link_noise_seed(opt.noise.seed, "ref", tx.id, rx.id));
                }

                o.diff = subtract(observed, reference);
                o.layer = ellipse_layer(o.diff, tx, rx, s.grid, kernel);

                if (cal_layers_needed)
                {
                    SampledCir cal_obs =
                        sample_bandlimited(assemble_cir(paths_ref, s.radio, tx.id, rx.id), s.radio);
                    SampledCir cal_ref = cal_obs;
                    add_noise(cal_obs, noise_power,
                              link_noise_seed(opt.noise.seed, "cal_obs", tx.id, rx.id));
                    add_noise(cal_ref, noise_power,
                              link_noise_seed(opt.noise.seed, "cal_ref", tx.id, rx.id));
                    o.cal_layer = ellipse_layer(subtract(cal_obs, cal_ref), tx, rx, s.grid, kernel);
                }

                if (opt.dump_cir)
                {
                    o.observed = std::move(observed);
                    o.reference = std::move(reference);
                }
                if (opt.dump_paths)
                    o.paths = paths_obs;
            }
        }
        catch (...)
        {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
            stop.store(true, std::memory_order_relaxed);
        }
    };

    int n_threads = opt.threads > 0 ? opt.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(jobs.size())));

    if (n_threads == 1)
    {
        work();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(work);
        for (auto &th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);
    check_budget();

    RunResult result;
    {
        std::vector<Heatmap> layers;
        layers.reserve(outs.size());
        for (auto &o : outs)
            layers.push_back(std::move(o.layer));
        result.fused = fuse(layers);
    }
    for (const auto &o : outs)
        if (o.truncated)
            ++result.truncated_links;

    if (opt.threshold.has_value())
        result.threshold = *opt.threshold;
    else if (!cal_layers_needed)
        result.threshold = 0.0;
    else
    {
        std::vector<Heatmap> cal_layers;
        cal_layers.reserve(outs.size());
        for (auto &o : outs)
            cal_layers.push_back(std::move(o.cal_layer));
        result.threshold = calibrate_threshold(fuse(cal_layers), s.lots, opt.calibrate_margin);
    }

    result.scores = score_lots(result.fused, s.lots);
    result.report = detect(result.scores, result.threshold, scenario_hash(s), s.grid);

    if (!out_dir.empty())
    {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
        const fs::path base(out_dir);

        write_heatmap_csv((base / "heatmap.csv").string(), result.fused);
        write_heatmap_pgm((base / "heatmap.pgm").string(), (base / "heatmap.pgm.txt").string(),
                          result.fused);
        write_report_json((base / "report.json").string(), result.report);

        if (opt.dump_paths)
        {
            std::vector<LinkPaths> links;
            links.reserve(jobs.size());
            for (std::size_t idx = 0; idx < jobs.size(); ++idx)
                links.push_back({jobs[idx].tx->id, jobs[idx].rx->id, std::move(outs[idx].paths)});
            write_paths_json((base / "paths.json").string(), links);
        }
        if (opt.dump_cir)
        {
            fs::create_directories(base / "cir", ec);
            if (ec)
                throw IoError("cannot create output directory '" + (base / "cir").string() +
                              "': " + ec.message());
            for (std::size_t idx = 0; idx < jobs.size(); ++idx)
            {
                const std::string stem =
                    sanitize_id(jobs[idx].tx->id) + "_" + sanitize_id(jobs[idx].rx->id);
                write_cir_csv((base / "cir" / (stem + "_observed.csv")).string(),
                              outs[idx].observed);
                write_cir_csv((base / "cir" / (stem + "_reference.csv")).string(),
                              outs[idx].reference);
                write_cir_csv((base / "cir" / (stem + "_diff.csv")).string(), outs[idx].diff);
            }
        }
    }

    result.wall_seconds = elapsed();
    return result;
}

} // namespace raysense
