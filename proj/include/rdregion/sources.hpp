// Named source generators.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"

namespace rdregion::sources {

inline void check_probability(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(name + " must lie in [0, 1]");
}

inline CondPmf bsc(double crossover) {
  check_probability(crossover, "crossover");
  return CondPmf(2, 2, {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

/// X ~ Bern(p), Y_i = X xor Z_i with Z_i ~ Bern(alpha_i) independent.
inline ceo::CeoSourceModel bern_bsc(double p, double alpha1, double alpha2) {
  check_probability(p, "p");
  return {Pmf({1.0 - p, p}), bsc(alpha1), bsc(alpha2)};
}

/// Joint of the two observations of bern_bsc, with X marginalized out.
inline bt::BtSourceModel bern_bsc_pair(double p, double alpha1, double alpha2) {
  const auto m = bern_bsc(p, alpha1, alpha2);
  const auto j = marginalize(m.joint(), {"Y1", "Y2"});
  return bt::BtSourceModel(j);
}

/// Y1 ~ Bern(1/2), Y2 = Y1 xor Bern(flip).
inline bt::BtSourceModel dsbs(double flip) {
  check_probability(flip, "flip");
  return bt::BtSourceModel::from_table(2, 2, {0.5 * (1 - flip), 0.5 * flip, 0.5 * flip, 0.5 * (1 - flip)});
}

}  // namespace rdregion::sources
