#pragma once

#include <optional>
#include <vector>

#include "cvn/rational.hpp"

namespace cvn::detail {

struct LpSolution {
  Rational value;
  std::vector<Rational> x;
};

/// max c.x subject to A x <= b, x >= 0, with b >= 0 so the origin is
/// feasible. Dense tableau simplex with Bland's rule; nullopt if unbounded.
std::optional<LpSolution> maximize(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<Rational>& b,
                                   const std::vector<Rational>& c);

}  // namespace cvn::detail
