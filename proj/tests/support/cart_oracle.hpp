#pragma once

#include <vector>

#include "itts/features.hpp"
#include "itts/forest.hpp"

namespace itts::testing {

// Independent brute-force CART: every column, every boundary between
// adjacent distinct sorted values, cost evaluated by direct per-partition
// SSE loops. Same stopping rules and tie-break as the production fit.
RegressionTree oracle_fit_tree(const FeatureMatrix& matrix, std::size_t min_samples_split = 2);

// Structural equality: same splits (column, threshold bit-exact) and same
// leaf values bit-exact.
bool trees_equal(const RegressionTree& a, const RegressionTree& b);

}  // namespace itts::testing
