#include <sstream>

#include "doctest.h"
#include "fgld/best_response.hpp"
#include "fgld/fixtures.hpp"
#include "fgld/io.hpp"
#include "fgld/numeric_text.hpp"
#include "support.hpp"

using namespace fgld;

namespace {

ElectionInstance load(const std::string& name) {
  return io::parse_instance(io::read_file(test::data_path("instances/" + name)));
}

const char* kMinimal = R"({
  "schema_version": 1,
  "candidates": ["a", "b"],
  "voters": [
    {"id": "p", "bundles": [
      {"members": ["a", "b"], "budget": "1", "delegate": "q", "notion": "WCC",
       "weight": WEIGHT, "default": ["0.5", "0.5"]}]},
    {"id": "q", "bundles": [
      {"members": ["a"], "budget": "0.25", "delegate": "q", "notion": "DIRECT"},
      {"members": ["b"], "budget": "3/4", "delegate": "q", "notion": "DIRECT"}]}
  ]
})";

std::string minimal(const std::string& weight) {
  std::string text = kMinimal;
  text.replace(text.find("WEIGHT"), 6, weight);
  return text;
}

}  // namespace

TEST_CASE("number text") {
  CHECK(parse_exact_number("10/7") == 10.0 / 7.0);
  CHECK(parse_exact_number("0.25") == 0.25);
  CHECK(parse_exact_number("-3e-2") == -0.03);
  CHECK_FALSE(parse_exact_number("0.25x").has_value());
  CHECK_FALSE(parse_exact_number("1/0").has_value());
  CHECK_FALSE(parse_exact_number("").has_value());
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_decimal(1e-7) == "0.0000001");
  CHECK(format_fixed(-1e-9, 3) == "0.000");
  CHECK(format_fixed(2.0 / 3.0, 4) == "0.6667");
}

TEST_CASE("data files match the built-in fixtures") {
  CHECK(load("crosswise_ept.json") == fixtures::crosswise(Notion::kEPT));
  CHECK(load("crosswise_epti.json") == fixtures::crosswise(Notion::kEPTI));
  CHECK(load("delegated_pair_ep.json") == fixtures::delegated_pair(Notion::kEP, 0.001));
  CHECK(load("confident_pair_epti_0.01.json") == fixtures::confident_pair(Notion::kEPTI, 0.01));
  CHECK(load("confident_pair_epti_0.005.json") ==
        fixtures::confident_pair(Notion::kEPTI, 0.005));
  CHECK(load("confident_pair_wcc_0.015.json") == fixtures::confident_pair(Notion::kWCC, 0.015));

  const auto instance = load("crosswise_epti.json");
  const auto x = io::parse_solution(
      io::read_file(test::data_path("instances/crosswise_epti_solution.json")), instance);
  CHECK(x == fixtures::crosswise_interpolated_solution());
}

TEST_CASE("crosswise file summary") {
  const auto instance = load("crosswise_ept.json");
  CHECK(instance.num_voters() == 2);
  CHECK(instance.num_candidates() == 4);
  std::vector<double> thresholds;
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) thresholds.push_back(b.threshold());
  }
  REQUIRE(thresholds.size() == 4);
  CHECK(thresholds[0] == doctest::Approx(0.8));
  CHECK(thresholds[1] == doctest::Approx(0.8));
  CHECK(thresholds[2] == doctest::Approx(0.7));
  CHECK(thresholds[3] == doctest::Approx(0.4));
}

TEST_CASE("parse failures") {
  CHECK_NOTHROW(io::parse_instance(minimal("\"2\"")));
  CHECK(io::parse_instance(minimal("2")).voters[0].bundles[0].weight == 2.0);

  SUBCASE("weight zero") {
    try {
      io::parse_instance(minimal("\"0\""));
      FAIL("expected a validation failure");
    } catch (const InvalidInstanceError& e) {
      CHECK(e.report().has_rule("weight-not-positive"));
    }
  }
  SUBCASE("no voters") {
    const std::string text = R"({"schema_version": 1, "candidates": ["a"], "voters": []})";
    try {
      io::parse_instance(text);
      FAIL("expected a validation failure");
    } catch (const InvalidInstanceError& e) {
      CHECK(e.report().has_rule("no-voters"));
    }
  }
  SUBCASE("syntax error position") {
    const std::string text = "{\n  \"schema_version\": 1,\n  \"candidates\": [\"a\" \"b\"]\n}";
    try {
      io::parse_instance(text);
      FAIL("expected a syntax error");
    } catch (const io::ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 1);
    }
  }
  SUBCASE("unknown field") {
    std::string text = minimal("\"2\"");
    text.replace(text.find("\"weight\""), 8, "\"wieght\"");
    try {
      io::parse_instance(text);
      FAIL("expected a schema error");
    } catch (const io::ParseError& e) {
      CHECK(e.path().find("$.voters[0].bundles[0]") == 0);
    }
  }
  SUBCASE("bad number and names") {
    CHECK_THROWS_AS(io::parse_instance(minimal("\"two\"")), io::ParseError);
    std::string text = minimal("\"2\"");
    text.replace(text.find("\"delegate\": \"q\""), 15, "\"delegate\": \"z\"");
    CHECK_THROWS_AS(io::parse_instance(text), io::ParseError);
    std::string version = minimal("\"2\"");
    version.replace(version.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
    CHECK_THROWS_AS(io::parse_instance(version), io::ParseError);
  }
}

TEST_CASE("instances round-trip") {
  Rng rng(61);
  for (Notion n : {Notion::kEP, Notion::kEPT, Notion::kEPTI, Notion::kWCC}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto instance = test::random_instance(n, rng);
      const auto text = io::serialize_instance(instance);
      CHECK(io::parse_instance(text) == instance);
      CHECK(io::serialize_instance(io::parse_instance(text)) == text);
    }
  }
  const auto crosswise = fixtures::crosswise(Notion::kEPTI);
  CHECK(io::parse_instance(io::serialize_instance(crosswise)) == crosswise);
}

TEST_CASE("solutions round-trip and map by id") {
  const auto instance = fixtures::crosswise(Notion::kEPTI);
  const auto x = fixtures::crosswise_interpolated_solution();
  CHECK(io::parse_solution(io::serialize_solution(x, instance), instance) == x);

  const std::string reordered = R"({"schema_version": 1, "voters": ["u", "v"],
    "candidates": ["c4", "c3", "c2", "c1"],
    "values": [["0.10846", "0.5", "0", "0.39154"], ["0.077", "0.423", "0", "0.5"]]})";
  CHECK(io::parse_solution(reordered, instance) == x);

  const std::string short_rows = R"({"schema_version": 1, "voters": ["v"],
    "candidates": ["c1", "c2", "c3", "c4"], "values": [["1", "0", "0", "0"]]})";
  CHECK_THROWS(io::parse_solution(short_rows, instance));
}

TEST_CASE("trace csv") {
  std::ostringstream out;
  io::write_trace_csv(out, {{0, 1.5, 0.25}, {1, 0.5, 0.125}});
  CHECK(out.str() == "iteration,l1_residual,linf_residual\n0,1.5,0.25\n1,0.5,0.125\n");
}

TEST_CASE("stored findings survive serialization") {
  for (const char* name : {"contraction_n10_m5_seed1.json", "pseudomono_n4_m5_seed2.json",
                           "nonuniqueness_n10_m5_seed2.json"}) {
    CAPTURE(name);
    const auto text = io::read_file(test::data_path(std::string("findings/") + name));
    const auto finding = io::parse_finding(text);
    CHECK(io::serialize_finding(finding) == text);
    const auto again = io::parse_finding(io::serialize_finding(finding));
    CHECK(again.instance == finding.instance);
    CHECK(again.witnesses == finding.witnesses);
    CHECK(test::max_abs_diff(recompute_certificate(again), finding.certificate) <= 1e-9);
  }
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/instance.json"), Error);
}
