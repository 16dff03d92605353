#include "fgld/fixtures.hpp"

namespace fgld::fixtures {

namespace {

Bundle direct(std::size_t voter, std::size_t candidate, double budget) {
  Bundle b;
  b.members = {candidate};
  b.budget = budget;
  b.delegate = voter;
  b.notion = Notion::kDirect;
  return b;
}

ElectionInstance pair_with(Bundle delegated, double u_c1) {
  ElectionInstance instance;
  instance.candidates = {"c1", "c2", "c3"};
  instance.voters = {
      Voter{"v", {std::move(delegated), direct(0, 2, 0.0)}},
      Voter{"u", {direct(1, 0, u_c1), direct(1, 1, 0.0), direct(1, 2, 1.0 - u_c1)}},
  };
  return instance;
}

}  // namespace

ElectionInstance delegated_pair(Notion notion, double u_c1) {
  Bundle b;
  b.members = {0, 1};
  b.budget = 1.0;
  b.delegate = 1;
  b.notion = notion;
  return pair_with(std::move(b), u_c1);
}

ElectionInstance confident_pair(Notion notion, double u_c1) {
  Bundle b;
  b.members = {0, 1};
  b.budget = 1.0;
  b.delegate = 1;
  b.notion = notion;
  b.weight = 100.0;
  b.default_split = {0.0, 1.0};
  return pair_with(std::move(b), u_c1);
}

ElectionInstance crosswise(Notion notion) {
  auto bundle = [notion](std::vector<std::size_t> members, std::size_t delegate, double weight,
                         std::vector<double> default_split) {
    Bundle b;
    b.members = std::move(members);
    b.budget = 0.5;
    b.delegate = delegate;
    b.notion = notion;
    b.weight = weight;
    b.default_split = std::move(default_split);
    return b;
  };
  ElectionInstance instance;
  instance.candidates = {"c1", "c2", "c3", "c4"};
  instance.voters = {
      Voter{"v", {bundle({0, 1}, 1, 1.25, {0.5, 0.0}), bundle({2, 3}, 1, 1.25, {0.5, 0.0})}},
      Voter{"u",
            {bundle({0, 3}, 0, 10.0 / 7.0, {0.0, 0.5}), bundle({1, 2}, 0, 2.5, {0.0, 0.5})}},
  };
  return instance;
}

SolutionMatrix crosswise_interpolated_solution() {
  return SolutionMatrix::from_rows({
      {0.5, 0.0, 0.423, 0.077},
      {0.39154, 0.0, 0.5, 0.10846},
  });
}

const std::vector<std::string>& reproducible_names() {
  static const std::vector<std::string> names = {
      "example-ep", "example-ep-t-table1", "example-ep-ti-table1", "example-ep-ti-thresholds",
      "example-wcc"};
  return names;
}

}  // namespace fgld::fixtures
