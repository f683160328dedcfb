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

#include "raysense/raysense.h"

#include <algorithm>
#include <string>

#include "raysense/errors.hpp"
#include "raysense/pipeline.hpp"
#include "raysense/scene.hpp"

// Opaque handle bodies. The C structs wrap the C++ values so the core types
// never cross the ABI boundary.
struct rs_scenario
{
    raysense::Scenario value;
};

struct rs_config
{
    raysense::RunOptions value;
};

struct rs_report
{
    raysense::RunResult value;
};

namespace
{

thread_local std::string g_last_error;

rs_status fail(rs_status code, const std::string &message)
{
    g_last_error = message;
    return code;
}

// Maps the library exception hierarchy onto status codes.
template <typename Fn> rs_status guarded(Fn &&fn)
{
    try
    {
        fn();
        return RS_OK;
    }
    catch (const raysense::ParseError &e)
    {
        return fail(RS_ERR_PARSE, e.what());
    }
    catch (const raysense::ValidationError &e)
    {
        return fail(RS_ERR_VALIDATION, e.what());
    }
    catch (const raysense::IoError &e)
    {
        return fail(RS_ERR_IO, e.what());
    }
    catch (const raysense::BudgetError &e)
    {
        return fail(RS_ERR_BUDGET, e.what());
    }
    catch (const std::exception &e)
    {
        return fail(RS_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(RS_ERR_INTERNAL, "unknown error");
    }
}

} // namespace

extern "C"
{

    const char *rs_version(void) { return "0.1.0"; }

    const char *rs_last_error(void) { return g_last_error.c_str(); }

    rs_status rs_scenario_parse(const char *json_text, rs_scenario **out)
    {
        if (!json_text || !out)
            return fail(RS_ERR_ARGUMENT, "rs_scenario_parse: NULL argument");
        *out = nullptr;
        return guarded([&] { *out = new rs_scenario{raysense::parse_scenario(json_text)}; });
    }

    rs_status rs_scenario_load_file(const char *path, rs_scenario **out)
    {
        if (!path || !out)
            return fail(RS_ERR_ARGUMENT, "rs_scenario_load_file: NULL argument");
        *out = nullptr;
        return guarded([&] { *out = new rs_scenario{raysense::load_scenario(path)}; });
    }

    void rs_scenario_free(rs_scenario *s) { delete s; }

    size_t rs_scenario_node_count(const rs_scenario *s) { return s ? s->value.nodes.size() : 0; }
    size_t rs_scenario_target_count(const rs_scenario *s)
    {
        return s ? s->value.targets.size() : 0;
    }
    size_t rs_scenario_surface_count(const rs_scenario *s)
    {
        return s ? s->value.surfaces.size() : 0;
    }
    size_t rs_scenario_lot_count(const rs_scenario *s) { return s ? s->value.lots.size() : 0; }
    double rs_scenario_center_frequency_hz(const rs_scenario *s)
    {
        return s ? s->value.radio.center_frequency_hz : 0.0;
    }
    double rs_scenario_bandwidth_hz(const rs_scenario *s)
    {
        return s ? s->value.radio.bandwidth_hz : 0.0;
    }
    uint64_t rs_scenario_hash(const rs_scenario *s)
    {
        return s ? raysense::scenario_hash(s->value) : 0;
    }

    rs_config *rs_config_new(void) { return new rs_config{}; }
    void rs_config_free(rs_config *c) { delete c; }

    void rs_config_set_max_order(rs_config *c, int order)
    {
        if (c)
            c->value.max_order = order;
    }
    void rs_config_set_grid_cell(rs_config *c, double meters)
    {
        if (c)
            c->value.grid_cell_m = meters;
    }
    void rs_config_set_bandwidth(rs_config *c, double hz)
    {
        if (c)
            c->value.bandwidth_hz = hz;
    }
    void rs_config_set_noise(rs_config *c, double power_dbm, uint64_t seed)
    {
        if (!c)
            return;
        c->value.noise.enabled = true;
        c->value.noise.power_dbm = power_dbm;
        c->value.noise.seed = seed;
    }
    void rs_config_set_threshold(rs_config *c, double threshold)
    {
        if (c)
            c->value.threshold = threshold;
    }
    void rs_config_set_calibrate_margin(rs_config *c, double margin)
    {
        if (!c)
            return;
        c->value.threshold.reset();
        c->value.calibrate_margin = margin;
    }
    void rs_config_set_dump_paths(rs_config *c, int enable)
    {
        if (c)
            c->value.dump_paths = enable != 0;
    }
    void rs_config_set_dump_cir(rs_config *c, int enable)
    {
        if (c)
            c->value.dump_cir = enable != 0;
    }
    void rs_config_set_max_seconds(rs_config *c, double seconds)
    {
        if (c)
            c->value.max_seconds = seconds;
    }
    void rs_config_set_threads(rs_config *c, int threads)
    {
        if (c)
            c->value.threads = threads;
    }

    rs_status rs_run(const rs_scenario *s, const rs_config *c, const char *out_dir,
                     rs_report **out)
    {
        if (!s)
            return fail(RS_ERR_ARGUMENT, "rs_run: NULL scenario");
        const raysense::RunOptions defaults;
        const raysense::RunOptions &opt = c ? c->value : defaults;
        const std::string dir = out_dir ? out_dir : "";
        if (out)
            *out = nullptr;
        return guarded([&] {
            raysense::RunResult result = raysense::run_pipeline(s->value, opt, dir);
            if (out)
                *out = new rs_report{std::move(result)};
        });
    }

    size_t rs_report_lot_count(const rs_report *r)
    {
        return r ? r->value.report.lots.size() : 0;
    }
    const char *rs_report_lot_id(const rs_report *r, size_t index)
    {
        if (!r || index >= r->value.report.lots.size())
            return nullptr;
        return r->value.report.lots[index].id.c_str();
    }
    double rs_report_lot_score(const rs_report *r, size_t index)
    {
        if (!r || index >= r->value.report.lots.size())
            return 0.0;
        return r->value.report.lots[index].score;
    }
    int rs_report_lot_occupied(const rs_report *r, size_t index)
    {
        if (!r || index >= r->value.report.lots.size())
            return 0;
        return r->value.report.lots[index].occupied ? 1 : 0;
    }
    double rs_report_threshold(const rs_report *r) { return r ? r->value.threshold : 0.0; }
    void rs_report_heatmap_size(const rs_report *r, int *width, int *height)
    {
        if (width)
            *width = r ? r->value.fused.grid.width : 0;
        if (height)
            *height = r ? r->value.fused.grid.height : 0;
    }
    double rs_report_heatmap_value(const rs_report *r, int i, int j)
    {
        if (!r)
            return 0.0;
        const raysense::Heatmap &h = r->value.fused;
        if (i < 0 || j < 0 || i >= h.grid.width || j >= h.grid.height)
            return 0.0;
        return h.at(i, j);
    }
    double rs_report_heatmap_max(const rs_report *r)
    {
        if (!r || r->value.fused.values.empty())
            return 0.0;
        return *std::max_element(r->value.fused.values.begin(), r->value.fused.values.end());
    }
    int rs_report_truncated_links(const rs_report *r) { return r ? r->value.truncated_links : 0; }
    double rs_report_wall_seconds(const rs_report *r) { return r ? r->value.wall_seconds : 0.0; }
    void rs_report_free(rs_report *r) { delete r; }

} // extern "C"
