#include "blowup/interp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace blowup {

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("pchip needs >= 2 matching nodes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1]))
      throw std::invalid_argument("pchip grid must be strictly increasing");

  // Fritsch-Carlson: harmonic-mean slopes, zeroed across local extrema.
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] > 0) {
      double w1 = 2 * h[i] + h[i - 1];
      double w2 = h[i] + 2 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0) return 0.0;
    if (d0 * d1 < 0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
    return d;
  };
  d_[0] = n == 2 ? del[0] : edge(h[0], h[1], del[0], del[1]);
  d_[n - 1] =
      n == 2 ? del[0] : edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double PchipInterpolant::operator()(double xq) const {
  std::size_t n = x_.size();
  if (xq <= x_.front()) return y_.front();
  if (xq >= x_.back()) return y_.back();
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (x_[mid] <= xq ? lo : hi) = mid;
  }
  double h = x_[lo + 1] - x_[lo];
  double s = (xq - x_[lo]) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  return h00 * y_[lo] + h10 * h * d_[lo] + h01 * y_[lo + 1] +
         h11 * h * d_[lo + 1];
}

}  // namespace blowup
