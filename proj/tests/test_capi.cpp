#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "tmapf/tmapf.h"

namespace {

const char* kToy1Map =
    "type octile\nheight 3\nwidth 3\nmap\n...\n@M@\n...\n";
const char* kToy1Scen = "version 1\nseed 0\nT 1 0 0 2\nM 0 1 1 1\n";

std::string take(char* s) {
  std::string out = s ? s : "";
  tmapf_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("capi: parse, solve, certify round trip") {
  tmapf_problem* p = nullptr;
  REQUIRE(tmapf_problem_parse(kToy1Map, kToy1Scen, &p) == TMAPF_OK);

  tmapf_result* r = nullptr;
  REQUIRE(tmapf_solve(p, "{\"algo\":\"tfcbs\",\"cost\":\"cost1\"}", &r) ==
          TMAPF_OK);
  CHECK(std::string(tmapf_result_outcome(r)) == "solved");
  long long cost = -1;
  CHECK(tmapf_result_cost(r, &cost) == TMAPF_OK);
  CHECK(cost == 8);

  char* doc = nullptr;
  REQUIRE(tmapf_result_json(r, &doc) == TMAPF_OK);
  const std::string sol = take(doc);
  CHECK(sol.find("\"states\"") != std::string::npos);

  char* report = nullptr;
  REQUIRE(tmapf_certify(p, sol.c_str(), "tmapf", &report) == TMAPF_OK);
  const std::string rep = take(report);
  CHECK(rep.find("\"ok\": true") != std::string::npos);

  tmapf_result_free(r);
  tmapf_problem_free(p);
}

TEST_CASE("capi: oracle and baseline") {
  tmapf_problem* p = nullptr;
  REQUIRE(tmapf_problem_parse(kToy1Map, kToy1Scen, &p) == TMAPF_OK);

  tmapf_result* r = nullptr;
  REQUIRE(tmapf_oracle(p, "{\"cost\":\"cost2\"}", &r) == TMAPF_OK);
  long long cost = -1;
  tmapf_result_cost(r, &cost);
  CHECK(std::string(tmapf_result_outcome(r)) == "solved");
  CHECK(cost == 9);
  tmapf_result_free(r);

  long long bl = 0;
  int finite = 1;
  REQUIRE(tmapf_baseline(p, &bl, &finite) == TMAPF_OK);
  CHECK(finite == 0);
  tmapf_problem_free(p);
}

TEST_CASE("capi: status codes and error messages") {
  tmapf_problem* p = nullptr;
  CHECK(tmapf_problem_parse("garbage", kToy1Scen, &p) == TMAPF_ERR_PARSE);
  CHECK(std::strlen(tmapf_last_error()) > 0);
  CHECK(tmapf_problem_parse(nullptr, kToy1Scen, &p) == TMAPF_ERR_INVALID_ARG);

  REQUIRE(tmapf_problem_parse(kToy1Map, kToy1Scen, &p) == TMAPF_OK);
  tmapf_result* r = nullptr;
  CHECK(tmapf_solve(p, "{\"algo\":\"dfs\"}", &r) == TMAPF_ERR_CONFIG);
  CHECK(tmapf_solve(p, "{\"algo\":", &r) == TMAPF_ERR_PARSE);
  tmapf_problem_free(p);
}

TEST_CASE("capi: generators and bench") {
  char* map = nullptr;
  REQUIRE(tmapf_generate_map("{\"profile\":\"small\"}", &map) == TMAPF_OK);
  const std::string map_text = take(map);
  CHECK(map_text.find("width 47") != std::string::npos);

  char* scen = nullptr;
  REQUIRE(tmapf_generate_scenario(
              map_text.c_str(),
              "{\"tasks\":3,\"movers\":20,\"seed\":5}", &scen) == TMAPF_OK);
  const std::string scen_text = take(scen);
  CHECK(scen_text.find("version 1") != std::string::npos);

  CHECK(tmapf_generate_map("{\"profile\":\"round\"}", &map) ==
        TMAPF_ERR_CONFIG);

  // a two-cell bench batch through the C surface
  nlohmann::json cfg;
  cfg["map"] = kToy1Map;
  cfg["scenarios"] = {{{"name", "toy1"}, {"text", kToy1Scen}}};
  cfg["algos"] = {"cbs", "tfcbs"};
  cfg["cost"] = "cost1";
  cfg["timeout_secs"] = 30;
  char* csv = nullptr;
  char* summary = nullptr;
  REQUIRE(tmapf_bench(cfg.dump().c_str(), &csv, &summary) == TMAPF_OK);
  const std::string csv_text = take(csv);
  const std::string summary_text = take(summary);
  CHECK(csv_text.find("toy1,cbs,soc,infeasible") != std::string::npos);
  CHECK(csv_text.find("toy1,tfcbs,cost1,solved,8") != std::string::npos);
  CHECK(nlohmann::json::parse(summary_text)["per_algo"]["tfcbs"]["solved"] ==
        1);
}

TEST_CASE("capi: solve treats cbs as the static transform") {
  tmapf_problem* p = nullptr;
  REQUIRE(tmapf_problem_parse(kToy1Map, kToy1Scen, &p) == TMAPF_OK);
  tmapf_result* r = nullptr;
  REQUIRE(tmapf_solve(p, "{\"algo\":\"cbs\"}", &r) == TMAPF_OK);
  CHECK(std::string(tmapf_result_outcome(r)) == "infeasible");
  tmapf_result_free(r);
  tmapf_problem_free(p);
}
