/* C interface to the tmapf solver library.
 *
 * All functions return a tmapf_status; TMAPF_OK means the call itself
 * succeeded (a solve that proves infeasibility still returns TMAPF_OK with
 * the outcome recorded on the result handle). On any other status,
 * tmapf_last_error() describes what went wrong for the calling thread.
 * Strings returned through char** are heap-allocated; release them with
 * tmapf_string_free.
 */
#ifndef TMAPF_TMAPF_H
#define TMAPF_TMAPF_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tmapf_problem tmapf_problem;
typedef struct tmapf_result tmapf_result;

typedef enum {
  TMAPF_OK = 0,
  TMAPF_ERR_INVALID_ARG = 1,
  TMAPF_ERR_PARSE = 2,
  TMAPF_ERR_CONFIG = 3,
  TMAPF_ERR_INTERNAL = 4
} tmapf_status;

const char* tmapf_version(void);
const char* tmapf_last_error(void);
void tmapf_string_free(char* s);

/* Problems are built from MovingAI-style map text plus a scenario text. */
tmapf_status tmapf_problem_parse(const char* map_text, const char* scen_text,
                                 tmapf_problem** out);
void tmapf_problem_free(tmapf_problem* p);

/* options_json: {"algo":"cbs|pbs|tfcbs|tfpbs", "cost":"cost1|cost2",
 *                "timeout_secs":300, "seed":0}
 * cbs/pbs run on the static transform of the instance (movables frozen,
 * movers dropped). */
tmapf_status tmapf_solve(const tmapf_problem* p, const char* options_json,
                         tmapf_result** out);

/* options_json: {"mode":"mapf|tmapf", "cost":"soc|cost1|cost2",
 *                "state_cap":1000000} */
tmapf_status tmapf_oracle(const tmapf_problem* p, const char* options_json,
                          tmapf_result** out);

const char* tmapf_result_outcome(const tmapf_result* r);
tmapf_status tmapf_result_cost(const tmapf_result* r, long long* out);
/* The full solution document (same schema `solve` writes to disk). */
tmapf_status tmapf_result_json(const tmapf_result* r, char** out);
void tmapf_result_free(tmapf_result* r);

/* Certification: report_json gets {"ok":bool, "violations":[...]}.
 * Returns TMAPF_OK whether or not violations were found. */
tmapf_status tmapf_certify(const tmapf_problem* p, const char* solution_json,
                           const char* mode, char** report_json);

/* options_json: {"profile":"small|large|custom", "width":..,
 *                "height":.., "movables_per_row":.., "seed":0} */
tmapf_status tmapf_generate_map(const char* options_json, char** map_text);

/* options_json: {"tasks":N, "movers":M, "seed":0,
 *                "mover_start_policy":"under-shelf|uniform-free"} */
tmapf_status tmapf_generate_scenario(const char* map_text,
                                     const char* options_json,
                                     char** scen_text);

/* config_json: {"map": "<map text>",
 *               "scenarios": [{"name":..,"text":..}, ...],
 *               "algos": ["cbs","tfpbs",...], "cost":"cost1",
 *               "timeout_secs":300, "seed":0, "validate":false, "jobs":1}
 * Emits the records CSV and the aggregate summary. all_timed_out and
 * validation_failures land in the summary document. */
tmapf_status tmapf_bench(const char* config_json, char** csv_text,
                         char** summary_json);

tmapf_status tmapf_baseline(const tmapf_problem* p, long long* cost,
                            int* finite);

#ifdef __cplusplus
}
#endif

#endif /* TMAPF_TMAPF_H */
