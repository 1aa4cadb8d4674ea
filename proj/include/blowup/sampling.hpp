#pragma once

#include <cstdint>

#include "blowup/params.hpp"

namespace blowup {

struct SampledParams {
  ParamSet params;
  DerivedExponents exps;
};

// Random parameter sets for property suites. Draws p in [1.2, 4],
// alpha in [0, 0.9(p-1)], m in [0.2, 3], beta in [0, m], and picks q to land
// in the requested regime. Draws are rejected until the identity/relation
// arithmetic is well conditioned: every identity term is capped at 200,
// |ln lambda|, |ln mu| at 100, and the three linearization rates at 50, so
// absolute tolerances of 1e-12/1e-10/1e-8 measure formula correctness rather
// than double roundoff.
class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed);

  SampledParams next_blowup();  // delta < 0

  // Sets on a chosen side of the split delta = -m p - (p-1-beta):
  // below -> v blows up alone (alpha0 < 1); at-or-above (but < 0) -> both.
  SampledParams next_blowup_side(bool below_threshold);

  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
  double next_unit();  // in [0, 1), full 53-bit resolution, portable
};

}  // namespace blowup
