/* SPDX-License-Identifier: Apache-2.0
 *
 * raysense - deterministic radio propagation and multipath sensing simulator
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of the raysense shared library. All objects are opaque
 * handles; every fallible call returns an rs_status and leaves a
 * human-readable message in rs_last_error() (thread-local) on failure.
 */

#ifndef RAYSENSE_H
#define RAYSENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RS_API __declspec(dllexport)
#else
#define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C"
{
#endif

    typedef enum rs_status
    {
        RS_OK = 0,
        RS_ERR_PARSE = 1,      /* scenario text is not well-formed */
        RS_ERR_VALIDATION = 2, /* an invariant or precondition is violated */
        RS_ERR_IO = 3,         /* file could not be read or written */
        RS_ERR_BUDGET = 4,     /* wall-clock budget exceeded */
        RS_ERR_ARGUMENT = 5,   /* invalid argument (e.g. NULL handle) */
        RS_ERR_INTERNAL = 6
    } rs_status;

    typedef struct rs_scenario rs_scenario;
    typedef struct rs_config rs_config;
    typedef struct rs_report rs_report;

    /* Library version string, e.g. "0.1.0". */
    RS_API const char *rs_version(void);

    /* Message of the last failure on this thread; valid until the next
     * failing call on the same thread. Never NULL. */
    RS_API const char *rs_last_error(void);

    /* ---- scenario ------------------------------------------------------ */

    RS_API rs_status rs_scenario_parse(const char *json_text, rs_scenario **out);
    RS_API rs_status rs_scenario_load_file(const char *path, rs_scenario **out);
    RS_API void rs_scenario_free(rs_scenario *s);

    RS_API size_t rs_scenario_node_count(const rs_scenario *s);
    RS_API size_t rs_scenario_target_count(const rs_scenario *s);
    RS_API size_t rs_scenario_surface_count(const rs_scenario *s);
    RS_API size_t rs_scenario_lot_count(const rs_scenario *s);
    RS_API double rs_scenario_center_frequency_hz(const rs_scenario *s);
    RS_API double rs_scenario_bandwidth_hz(const rs_scenario *s);
    RS_API uint64_t rs_scenario_hash(const rs_scenario *s);

    /* ---- run configuration --------------------------------------------- */

    /* Defaults: scenario radio/grid values, noiseless, calibration margin 3,
     * no dumps, unlimited wall clock, hardware thread count. */
    RS_API rs_config *rs_config_new(void);
    RS_API void rs_config_free(rs_config *c);

    RS_API void rs_config_set_max_order(rs_config *c, int order);
    RS_API void rs_config_set_grid_cell(rs_config *c, double meters);
    RS_API void rs_config_set_bandwidth(rs_config *c, double hz); /* 0 = scenario value */
    RS_API void rs_config_set_noise(rs_config *c, double power_dbm, uint64_t seed);
    /* Explicit threshold and calibration margin are mutually exclusive;
     * setting one deactivates the other. */
    RS_API void rs_config_set_threshold(rs_config *c, double threshold);
    RS_API void rs_config_set_calibrate_margin(rs_config *c, double margin);
    RS_API void rs_config_set_dump_paths(rs_config *c, int enable);
    RS_API void rs_config_set_dump_cir(rs_config *c, int enable);
    RS_API void rs_config_set_max_seconds(rs_config *c, double seconds);
    RS_API void rs_config_set_threads(rs_config *c, int threads);

    /* ---- pipeline ------------------------------------------------------- */

    /* Runs the full sensing pipeline. When out_dir is non-NULL the artifact
     * files (heatmap.csv, heatmap.pgm + .txt, report.json, optional
     * paths.json and per-link CIR CSVs) are written there; artifacts appear only
     * after the whole run succeeded. On success *out receives a report
     * handle owned by the caller. */
    RS_API rs_status rs_run(const rs_scenario *s, const rs_config *c, const char *out_dir,
                            rs_report **out);

    /* ---- report --------------------------------------------------------- */

    RS_API size_t rs_report_lot_count(const rs_report *r);
    RS_API const char *rs_report_lot_id(const rs_report *r, size_t index);
    RS_API double rs_report_lot_score(const rs_report *r, size_t index);
    RS_API int rs_report_lot_occupied(const rs_report *r, size_t index);
    RS_API double rs_report_threshold(const rs_report *r);
    RS_API void rs_report_heatmap_size(const rs_report *r, int *width, int *height);
    RS_API double rs_report_heatmap_value(const rs_report *r, int i, int j);
    RS_API double rs_report_heatmap_max(const rs_report *r);
    RS_API int rs_report_truncated_links(const rs_report *r);
    RS_API double rs_report_wall_seconds(const rs_report *r);
    RS_API void rs_report_free(rs_report *r);

#ifdef __cplusplus
}
#endif

#endif /* RAYSENSE_H */
