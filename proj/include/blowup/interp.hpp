#pragma once

#include <vector>

namespace blowup {

// Monotone cubic (Fritsch-Carlson) interpolant on a strictly increasing grid.
// Used when comparing solution curves sampled on different adaptive grids.
class PchipInterpolant {
 public:
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const;  // clamps outside [x_front, x_back]
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;  // d_ = endpoint slopes per node
};

}  // namespace blowup
