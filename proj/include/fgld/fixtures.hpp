#pragma once

#include <string>
#include <vector>

#include "fgld/model.hpp"

namespace fgld::fixtures {

// Small worked instances. Voters are named "v" and "u", candidates "c1".."cm".

/// v delegates {c1,c2} with budget 1 to u under EP and gives c3 nothing;
/// u votes directly [u_c1, 0, 1 - u_c1].
ElectionInstance delegated_pair(Notion notion, double u_c1);

/// Same shape as delegated_pair, with weight 100 and default [0, 1] on v's
/// delegated bundle (threshold 0.01).
ElectionInstance confident_pair(Notion notion, double u_c1);

/// Two voters delegating crosswise over four candidates: v splits
/// {c1,c2}/{c3,c4} to u, u splits {c1,c4}/{c2,c3} to v, thresholds
/// 0.8, 0.8, 0.7, 0.4. Has no solution under EP-T.
ElectionInstance crosswise(Notion notion);

/// The known interpolated solution of crosswise(EP-TI), rounded to 5 digits.
SolutionMatrix crosswise_interpolated_solution();

/// Names accepted by `reproduce`.
const std::vector<std::string>& reproducible_names();

}  // namespace fgld::fixtures
