#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace blowup {

// Embedded Dormand-Prince 5(4) pair with FSAL, PI-free classic step control.
// Generic over state dimension so the radial system (W, v, S) and the
// log-time flow (X, Y, Z) share one stepper. Callers supply a step cap and an
// accept callback; both hooks are what packaged steppers make awkward.

template <std::size_t N>
using OdeState = std::array<double, N>;

struct OdeControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double h_init = 1e-6;
  long max_steps = 500000;
};

enum class OdeStatus {
  reached_end,          // hit t_end
  stopped_by_callback,  // on_accept returned false
  max_steps,            // step budget exhausted
  step_underflow,       // h shrank below machine resolution
};

template <std::size_t N>
struct OdeResult {
  OdeStatus status = OdeStatus::max_steps;
  double t = 0;
  OdeState<N> y{};
  long n_accepted = 0;
  long n_rejected = 0;
};

namespace dp45 {
// Butcher tableau (Dormand & Prince, RK5(4)7M).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat: error estimator weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp45

// Rhs:      OdeState<N> f(double t, const OdeState<N>& y)
// StepCap:  double cap(double t, const OdeState<N>& y); <= 0 means no cap
// OnAccept: bool keep_going(double t, const OdeState<N>& y)
template <std::size_t N, class Rhs, class StepCap, class OnAccept>
OdeResult<N> ode45(Rhs&& f, double t0, const OdeState<N>& y0, double t_end,
                   const OdeControl& ctl, StepCap&& cap, OnAccept&& on_accept) {
  using std::abs;
  OdeResult<N> res;
  double t = t0;
  OdeState<N> y = y0;

  auto finite = [](const OdeState<N>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };

  OdeState<N> k1 = f(t, y);
  double h = ctl.h_init;
  bool have_fsal = true;

  for (long step = 0; step < ctl.max_steps; ++step) {
    double hmax = cap(t, y);
    if (hmax > 0 && h > hmax) h = hmax;
    if (t_end - t <= h) h = t_end - t;
    if (!(h > abs(t) * 1e-15 + 1e-300)) {
      res.status = OdeStatus::step_underflow;
      break;
    }

    if (!have_fsal) k1 = f(t, y);

    OdeState<N> yt, k2, k3, k4, k5, k6, k7, y5;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * dp45::a21 * k1[i];
    k2 = f(t + dp45::c2 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (dp45::a31 * k1[i] + dp45::a32 * k2[i]);
    k3 = f(t + dp45::c3 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] +
              h * (dp45::a41 * k1[i] + dp45::a42 * k2[i] + dp45::a43 * k3[i]);
    k4 = f(t + dp45::c4 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (dp45::a51 * k1[i] + dp45::a52 * k2[i] +
                          dp45::a53 * k3[i] + dp45::a54 * k4[i]);
    k5 = f(t + dp45::c5 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (dp45::a61 * k1[i] + dp45::a62 * k2[i] +
                          dp45::a63 * k3[i] + dp45::a64 * k4[i] +
                          dp45::a65 * k5[i]);
    k6 = f(t + h, yt);
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + h * (dp45::b1 * k1[i] + dp45::b3 * k3[i] +
                          dp45::b4 * k4[i] + dp45::b5 * k5[i] +
                          dp45::b6 * k6[i]);
    k7 = f(t + h, y5);

    double err = 0;
    bool ok = finite(y5) && finite(k7);
    if (ok) {
      for (std::size_t i = 0; i < N; ++i) {
        double e = h * (dp45::e1 * k1[i] + dp45::e3 * k3[i] +
                        dp45::e4 * k4[i] + dp45::e5 * k5[i] +
                        dp45::e6 * k6[i] + dp45::e7 * k7[i]);
        double sc =
            ctl.abs_tol + ctl.rel_tol * std::max(abs(y[i]), abs(y5[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / N);
      ok = std::isfinite(err);
    }

    if (!ok) {  // overflow/NaN inside the step: treat as a hard rejection
      h *= 0.2;
      have_fsal = false;
      ++res.n_rejected;
      continue;
    }

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      have_fsal = true;
      ++res.n_accepted;
      if (!on_accept(t, y)) {
        res.status = OdeStatus::stopped_by_callback;
        break;
      }
      if (t >= t_end) {
        res.status = OdeStatus::reached_end;
        break;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
    } else {
      double fac = 0.9 * std::pow(err, -0.2);
      h *= std::max(0.1, fac);
      have_fsal = true;  // k1 still valid, step was not taken
      ++res.n_rejected;
    }
  }

  res.t = t;
  res.y = y;
  return res;
}

}  // namespace blowup
