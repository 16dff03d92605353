#include <cmath>

#include "doctest.h"
#include "fgld/best_response.hpp"
#include "fgld/counterexamples.hpp"
#include "fgld/errors.hpp"
#include "fgld/fixtures.hpp"
#include "fgld/io.hpp"
#include "support.hpp"

using namespace fgld;

namespace {

SearchFinding stored(const std::string& name) {
  return io::parse_finding(io::read_file(test::data_path("findings/" + name)));
}

}  // namespace

TEST_CASE("kind names") {
  for (FindingKind k : {FindingKind::kContractionViolation, FindingKind::kPseudoMonoViolation,
                        FindingKind::kNonUniqueness}) {
    CHECK(finding_kind_from_string(to_string(k)) == k);
  }
  CHECK(to_string(FindingKind::kPseudoMonoViolation) == "pseudo-mono-violation");
  CHECK(default_mode_from_string("random") == DefaultMode::kRandom);
}

TEST_CASE("generated instances") {
  Rng rng(3);
  GeneratorParams params;
  params.weight = 7.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = generate_instance(params, rng);
    CHECK(validate_instance(instance).ok());
    CHECK(instance.num_voters() == 10);
    CHECK(instance.num_candidates() == 5);
    for (const auto& voter : instance.voters) {
      for (const auto& b : voter.bundles) {
        CHECK(std::abs(b.budget * 20.0 - std::round(b.budget * 20.0)) < 1e-12);
        if (b.notion != Notion::kDirect) {
          CHECK(b.notion == Notion::kWCC);
          CHECK(b.weight == 7.0);
        }
      }
    }
  }
  params.voters = 1;
  const auto alone = generate_instance(params, rng);
  for (const auto& b : alone.voters[0].bundles) CHECK(b.notion == Notion::kDirect);
}

TEST_CASE("contraction check") {
  SUBCASE("fixed point") {
    const auto instance = fixtures::confident_pair(Notion::kWCC, 0.01);
    const auto x = SolutionMatrix::from_rows({{0.5, 0.5, 0.0}, {0.01, 0.0, 0.99}});
    const auto c = check_contraction_violation(instance, x);
    CHECK_FALSE(c.violated);
    CHECK(c.lhs == 0.0);
  }
  SUBCASE("delegating to direct voters settles in one step") {
    Rng rng(8);
    const auto instance = fixtures::confident_pair(Notion::kWCC, 0.3);
    for (int i = 0; i < 20; ++i) {
      const auto c = check_contraction_violation(instance, random_feasible_point(instance, rng));
      CHECK_FALSE(c.violated);
      CHECK(c.lhs < 1e-15);
    }
  }
  SUBCASE("other notions are refused") {
    const auto instance = fixtures::crosswise(Notion::kEPTI);
    CHECK_THROWS_AS(check_contraction_violation(instance, SolutionMatrix(2, 4, 0.25)),
                    UnsupportedNotionError);
  }
  SUBCASE("stored finding") {
    const auto f = stored("contraction_n10_m5_seed1.json");
    CHECK(f.kind == FindingKind::kContractionViolation);
    CHECK(f.params.voters == 10);
    CHECK(f.params.candidates == 5);
    CHECK(f.params.weight == 10.0);
    REQUIRE(f.witnesses.size() == 1);
    const auto& x = f.witnesses[0];
    const auto fx = best_response(x, f.instance);
    const double lhs = l1_distance(fx, best_response(fx, f.instance));
    const double rhs = l1_distance(x, fx);
    CHECK(lhs > rhs + kCertificateMargin);
    const auto c = check_contraction_violation(f.instance, x);
    CHECK(c.violated);
    CHECK(std::abs(c.lhs - lhs) <= 1e-12);
    CHECK(std::abs(c.rhs - rhs) <= 1e-12);
  }
}

TEST_CASE("pseudo-monotonicity check") {
  const auto instance = fixtures::confident_pair(Notion::kWCC, 0.01);
  const auto x = SolutionMatrix::from_rows({{0.5, 0.5, 0.0}, {0.01, 0.0, 0.99}});
  CHECK(check_pseudomono_violation(instance, x, x) == 0.0);
  const auto off = SolutionMatrix::from_rows({{0.9, 0.1, 0.0}, {0.01, 0.0, 0.99}});
  CHECK_THROWS_AS(check_pseudomono_violation(instance, off, x), Error);
  // (y - f(y)) . (y - x) = (0.4, -0.4) . (0.4, -0.4)
  CHECK(check_pseudomono_violation(instance, x, off) == doctest::Approx(0.32));

  SUBCASE("stored finding") {
    const auto f = stored("pseudomono_n4_m5_seed2.json");
    CHECK(f.params.voters == 4);
    CHECK(f.params.defaults == DefaultMode::kEvenSplit);
    REQUIRE(f.witnesses.size() == 2);
    const auto& fixed = f.witnesses[0];
    const auto& y = f.witnesses[1];
    CHECK(linf_distance(best_response(fixed, f.instance), fixed) <= kWitnessTolerance);
    const auto fy = best_response(y, f.instance);
    double dot = 0.0;
    for (std::size_t i = 0; i < y.flat().size(); ++i) {
      dot += (y.flat()[i] - fy.flat()[i]) * (y.flat()[i] - fixed.flat()[i]);
    }
    CHECK(dot <= -kCertificateMargin);
    CHECK(std::abs(check_pseudomono_violation(f.instance, fixed, y) - dot) <= 1e-12);
  }
  SUBCASE("between two fixed points the product vanishes") {
    const auto f = stored("nonuniqueness_n10_m5_seed2.json");
    const auto& x1 = f.witnesses[0];
    const auto& x2 = f.witnesses[1];
    const double value = check_pseudomono_violation(f.instance, x1, x2);
    CHECK(std::abs(value) <= kWitnessTolerance * l1_distance(x1, x2));
  }
}

TEST_CASE("non-uniqueness check") {
  const auto instance = fixtures::confident_pair(Notion::kWCC, 0.01);
  const auto x = SolutionMatrix::from_rows({{0.5, 0.5, 0.0}, {0.01, 0.0, 0.99}});
  const auto same = check_nonuniqueness(instance, x, x, 1e-6, 0.1);
  CHECK_FALSE(same.distinct_fixed_points);
  CHECK(same.distance == 0.0);

  const auto f = stored("nonuniqueness_n10_m5_seed2.json");
  CHECK(f.params.voters == 10);
  CHECK(f.params.defaults == DefaultMode::kRandom);
  REQUIRE(f.witnesses.size() == 2);
  for (const auto& w : f.witnesses) {
    CHECK(linf_distance(best_response(w, f.instance), w) <= kWitnessTolerance);
    CHECK(is_feasible(f.instance, w, 1e-9));
  }
  const double distance = l1_distance(f.witnesses[0], f.witnesses[1]);
  CHECK(distance > 0.1);
  CHECK(distance <= 2.0 * f.instance.num_voters());
  const auto c = check_nonuniqueness(f.instance, f.witnesses[0], f.witnesses[1], 1e-6, 0.1);
  CHECK(c.distinct_fixed_points);
  CHECK(c.distance == doctest::Approx(distance));
}

TEST_CASE("searches") {
  SUBCASE("a single voter and candidate has nothing to find") {
    GeneratorParams params;
    params.voters = 1;
    params.candidates = 1;
    SearchOptions options;
    options.budget = 20;
    for (FindingKind k : {FindingKind::kContractionViolation, FindingKind::kPseudoMonoViolation,
                          FindingKind::kNonUniqueness}) {
      CHECK_FALSE(search_violation(k, params, 1, options).has_value());
    }
  }
  SUBCASE("stored findings regenerate from their seeds") {
    for (const char* name : {"contraction_n10_m5_seed1.json", "pseudomono_n4_m5_seed2.json"}) {
      CAPTURE(name);
      const auto f = stored(name);
      const auto again = search_violation(f.kind, f.params, f.seed);
      REQUIRE(again.has_value());
      CHECK(again->attempt == f.attempt);
      CHECK(again->instance == f.instance);
      CHECK(test::max_abs_diff(again->certificate, f.certificate) <= 1e-9);
      CHECK(finding_holds(*again, 0.1));
    }
  }
  SUBCASE("same seed, same answer") {
    GeneratorParams params;
    params.voters = 4;
    const auto a = search_violation(FindingKind::kPseudoMonoViolation, params, 3);
    const auto b = search_violation(FindingKind::kPseudoMonoViolation, params, 3);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->attempt == b->attempt);
      CHECK(a->witnesses == b->witnesses);
      CHECK(a->certificate == b->certificate);
    }
  }
}

TEST_CASE("stored findings hold") {
  for (const char* name : {"contraction_n10_m5_seed1.json", "pseudomono_n4_m5_seed2.json",
                           "nonuniqueness_n10_m5_seed2.json"}) {
    CAPTURE(name);
    const auto f = stored(name);
    CHECK(finding_holds(f, 0.1));
    CHECK(test::max_abs_diff(recompute_certificate(f), f.certificate) <= 1e-9);
  }
}
