#include <cmath>

#include "doctest.h"
#include "fgld/best_response.hpp"
#include "fgld/fixtures.hpp"
#include "fgld/sampling.hpp"
#include "support.hpp"

using namespace fgld;
using doctest::Approx;

namespace {

// v = [a, b, rest] against u = [u_c1, 0, 1 - u_c1]
SolutionMatrix pair_point(double a, double b, double u_c1) {
  return SolutionMatrix::from_rows({{a, b, 1.0 - a - b}, {u_c1, 0.0, 1.0 - u_c1}});
}

}  // namespace

TEST_CASE("exact rule") {
  const std::vector<double> delegate{0.2, 0.4}, current{0.15, 0.15};
  const auto y = rules::exact(delegate, current, 0.3);
  CHECK(std::abs(y[0] - 0.1) <= 1e-12);
  CHECK(std::abs(y[1] - 0.2) <= 1e-12);

  const std::vector<double> tiny{0.001, 0.0};
  const auto z = rules::exact(tiny, current, 1.0);
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 0.0);

  const std::vector<double> none{0.0, 0.0}, mine{0.3, 0.7};
  CHECK(rules::exact(none, mine, 1.0) == mine);
}

TEST_CASE("br_ep on the delegated pair") {
  const auto instance = fixtures::delegated_pair(Notion::kEP, 0.001);
  const auto r = br_ep(instance, pair_point(0.3, 0.7, 0.001), 0, 0);
  CHECK(r.weight == 1.0);
  CHECK(r.values[0] == Approx(1.0));
  CHECK(r.values[1] == Approx(0.0));
  CHECK_THROWS_AS(br_wcc(instance, pair_point(0.3, 0.7, 0.001), 0, 0), std::invalid_argument);

  const auto f = best_response(pair_point(0.3, 0.7, 0.001), instance);
  CHECK(f(0, 0) == Approx(1.0));
  CHECK(f(0, 1) == Approx(0.0));
  CHECK(f(0, 2) == 0.0);
}

TEST_CASE("EP is scale invariant and keeps delegate ratios") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = rng.between(1, 6);
    std::vector<double> delegate(k), current(k, 1.0 / k);
    for (double& d : delegate) d = rng.uniform();
    const double budget = 0.05 + rng.uniform();
    const double lambda = 1e-3 + 100.0 * rng.uniform();
    std::vector<double> scaled;
    for (double d : delegate) scaled.push_back(lambda * d);
    const auto y = rules::exact(delegate, current, budget);
    CHECK(test::max_abs_diff(y, rules::exact(scaled, current, budget)) < 1e-12);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(std::abs(y[i] * delegate[j] - delegate[i] * y[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("br_ept on the crosswise instance") {
  const auto instance = fixtures::crosswise(Notion::kEPT);
  const auto x = SolutionMatrix::from_rows({{0.5, 0.0, 0.5, 0.0}, {0.0, 0.0, 0.5, 0.5}});
  // u's {c1,c4} sees v support 0.5 < 0.7
  const auto below = br_ept(instance, x, 1, 0);
  CHECK(below.values[0] == 0.0);
  CHECK(below.values[1] == 0.5);
  // v's {c3,c4} sees u support 1 >= 0.8
  const auto above = br_ept(instance, x, 0, 1);
  CHECK(above.values[0] == Approx(0.25));
  CHECK(above.values[1] == Approx(0.25));
}

TEST_CASE("thresholded rule is inclusive at the threshold") {
  const std::vector<double> delegate{0.25, 0.5}, fallback{0.0, 1.0};
  const auto y = rules::thresholded(delegate, fallback, 0.75, 1.0);
  CHECK(y[0] == Approx(1.0 / 3.0));
  CHECK(y[1] == Approx(2.0 / 3.0));
  const auto z = rules::thresholded(delegate, fallback, 0.7500001, 1.0);
  CHECK(z == fallback);
}

TEST_CASE("br_epti interpolation") {
  const auto instance = fixtures::crosswise(Notion::kEPTI);
  const auto known = fixtures::crosswise_interpolated_solution();
  const auto& bundle = instance.voters[0].bundles[1];
  // [0.5, 0.10846] + (0.8 - 0.60846) * [0.5, 0]
  const auto numerator =
      rules::interpolation_numerator(slice(known, 1, bundle), bundle.default_split, 0.8);
  CHECK(numerator[0] == Approx(0.59577).epsilon(1e-9));
  CHECK(numerator[1] == Approx(0.10846).epsilon(1e-9));
  const auto r = br_epti(instance, known, 0, 1);
  CHECK(r.values[0] == Approx(0.5 * 0.59577 / 0.70423));
  CHECK(r.values[1] == Approx(0.5 * 0.10846 / 0.70423));
  CHECK(std::abs(r.values[0] - 0.423) < 1e-4);

  const auto low = fixtures::confident_pair(Notion::kEPTI, 0.005);
  const auto y = br_epti(low, pair_point(0.5, 0.5, 0.005), 0, 0).values;
  CHECK(std::abs(y[0] - 0.5) < 1e-12);
  CHECK(std::abs(y[1] - 0.5) < 1e-12);
  const auto high = fixtures::confident_pair(Notion::kEPTI, 0.015);
  const auto z = br_epti(high, pair_point(0.5, 0.5, 0.015), 0, 0).values;
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 0.0);
}

TEST_CASE("interpolation branches meet at the threshold") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = rng.between(1, 5);
    const double budget = 0.05 + 0.95 * rng.uniform();
    const double eps = 0.01 + 2.0 * rng.uniform();
    std::vector<double> delegate(k), fallback(k);
    double dsum = 0.0, fsum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      delegate[i] = rng.uniform() + 1e-3;
      fallback[i] = rng.uniform();
      dsum += delegate[i];
      fsum += fallback[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
      delegate[i] *= eps / dsum;
      fallback[i] *= budget / fsum;
    }
    const auto prop = rules::exact(delegate, fallback, budget);
    const auto interp = rules::interpolated_branch(delegate, fallback, eps, budget);
    CHECK(test::max_abs_diff(prop, interp) < 1e-12);
  }
}

TEST_CASE("br_wcc") {
  // (d + w x_delta) / |d + w x_delta| * b with d = [0,1], w = 100
  for (double u : {0.015, 0.01, 0.005}) {
    const auto instance = fixtures::confident_pair(Notion::kWCC, u);
    const auto y = br_wcc(instance, pair_point(0.5, 0.5, u), 0, 0).values;
    const double oracle = 100.0 * u / (1.0 + 100.0 * u);
    CHECK(std::abs(y[0] - oracle) < 1e-12);
    CHECK(std::abs(y[1] - (1.0 - oracle)) < 1e-12);
  }
  const auto a = br_wcc(fixtures::confident_pair(Notion::kWCC, 0.015),
                        pair_point(0.5, 0.5, 0.015), 0, 0).values;
  CHECK(std::abs(a[0] - 0.6) < 1e-12);

  const auto zero = fixtures::confident_pair(Notion::kWCC, 0.0);
  const auto d = br_wcc(zero, pair_point(0.5, 0.5, 0.0), 0, 0).values;
  CHECK(d == std::vector<double>{0.0, 1.0});
}

TEST_CASE("best response preserves feasibility") {
  Rng rng(31);
  for (Notion n : {Notion::kEP, Notion::kEPT, Notion::kEPTI, Notion::kWCC}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto instance = test::random_instance(n, rng);
      const auto x = random_feasible_point(instance, rng, 0.2);
      CHECK(is_feasible(instance, best_response(x, instance), 1e-9));
    }
  }
}

TEST_CASE("continuous notions respond continuously") {
  Rng rng(37);
  for (Notion n : {Notion::kEPTI, Notion::kWCC}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto instance = test::random_instance(n, rng);
      const auto x = random_feasible_point(instance, rng);
      const auto direction = random_feasible_point(instance, rng);
      const auto fx = best_response(x, instance);
      double previous = INFINITY;
      for (double h : {1e-2, 1e-4, 1e-6, 1e-8}) {
        SolutionMatrix moved = x;
        for (std::size_t i = 0; i < moved.flat().size(); ++i) {
          moved.flat()[i] += h * (direction.flat()[i] - x.flat()[i]);
        }
        const double gap = linf_distance(best_response(moved, instance), fx);
        CHECK(gap <= previous + 1e-15);
        previous = gap;
      }
      CHECK(previous < 1e-5);
    }
  }
}

TEST_CASE("regret") {
  const auto instance = fixtures::delegated_pair(Notion::kEP, 0.001);
  const auto wrong = pair_point(0.0, 1.0, 0.001);
  const auto r = regret(wrong, instance);
  CHECK(r.per_voter[0] == Approx(2.0));
  CHECK(r.per_voter[1] == 0.0);
  CHECK(r.max_voter_regret() == Approx(2.0));
  CHECK(r.max_linf == Approx(1.0));

  const auto crosswise = fixtures::crosswise(Notion::kEPTI);
  const auto known = fixtures::crosswise_interpolated_solution();
  CHECK(regret(known, crosswise).max_voter_regret() <= 1e-3);
  CHECK(linf_distance(best_response(known, crosswise), known) <= 1e-3);

  const auto direct = test::all_direct({{0.2, 0.8}, {1.0, 0.0}});
  const auto x = SolutionMatrix::from_rows({{0.2, 0.8}, {1.0, 0.0}});
  CHECK(best_response(x, direct) == x);
  CHECK(regret(x, direct).total_l1 == 0.0);
}

TEST_CASE("zero regret exactly at satisfied ballots") {
  const auto instance = fixtures::delegated_pair(Notion::kEP, 0.0);
  // delegate gives no support: every split of v is a best response
  for (double a : {0.0, 0.3, 1.0}) {
    CHECK(regret(pair_point(a, 1.0 - a, 0.0), instance).per_voter[0] == 0.0);
  }
  const auto supported = fixtures::delegated_pair(Notion::kEP, 0.4);
  CHECK(regret(pair_point(1.0, 0.0, 0.4), supported).per_voter[0] == 0.0);
  CHECK(regret(pair_point(0.9, 0.1, 0.4), supported).per_voter[0] > 0.0);
}
