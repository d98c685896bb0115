#pragma once

// Small ODE toolbox: classic fixed-step RK4 and an adaptive Dormand-Prince
// 5(4) pair with FSAL. State is any Eigen vector/matrix type.

#include <cmath>
#include <cstddef>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

template <typename State, typename F>
State rk4_fixed(F&& f, State y, double t0, double t1, std::size_t n_steps) {
  const double h = (t1 - t0) / static_cast<double>(n_steps);
  double t = t0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
    const State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
    const State k4 = f(t + h, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (t1 - t0) * static_cast<double>(i + 1) / static_cast<double>(n_steps);
  }
  return y;
}

namespace detail {

template <typename State>
double error_ratio(const State& err, const State& y0, const State& y1, double atol,
                   double rtol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  return worst;
}

}  // namespace detail

template <typename State, typename F>
class DormandPrince {
 public:
  DormandPrince(F f, State y0, double t0, double atol, double rtol)
      : f_(std::move(f)), y_(std::move(y0)), t_(t0), atol_(atol), rtol_(rtol) {
    k1_ = f_(t_, y_);
  }

  const State& state() const { return y_; }
  double time() const { return t_; }

  // Advance to exactly t_end (clamping internal steps).
  void advance_to(double t_end) {
    if (t_end < t_) throw NumericalError("ode: cannot integrate backwards");
    if (h_ <= 0.0) h_ = std::max(1e-8, (t_end - t_) / 64.0);
    std::size_t guard = 0;
    while (t_ < t_end) {
      if (++guard > 20'000'000)
        throw NumericalError("ode: step limit exceeded; dynamics too stiff for the "
                             "requested tolerance");
      const double h = std::min(h_, t_end - t_);
      const State k2 = f_(t_ + c2 * h, State(y_ + h * (a21 * k1_)));
      const State k3 = f_(t_ + c3 * h, State(y_ + h * (a31 * k1_ + a32 * k2)));
      const State k4 = f_(t_ + c4 * h, State(y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3)));
      const State k5 =
          f_(t_ + c5 * h, State(y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4)));
      const State k6 = f_(
          t_ + h, State(y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      const State y5 =
          y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = f_(t_ + h, y5);
      const State err = h * ((b1 - e1) * k1_ + (b3 - e3) * k3 + (b4 - e4) * k4 +
                             (b5 - e5) * k5 + (b6 - e6) * k6 - e7 * k7);
      const double ratio = detail::error_ratio(err, y_, y5, atol_, rtol_);
      if (ratio <= 1.0) {
        t_ += h;
        y_ = y5;
        k1_ = k7;  // FSAL
      }
      const double grow =
          ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      h_ = h * std::clamp(grow, 0.2, 5.0);
      if (!(h_ > 0.0) || !std::isfinite(h_))
        throw NumericalError("ode: step size collapsed");
    }
  }

 private:
  // Dormand-Prince coefficients
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                          e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

  F f_;
  State y_;
  double t_;
  double atol_, rtol_;
  double h_ = 0.0;
  State k1_;
};

// Sample the solution at the given increasing times (times[0] >= t0 = 0).
template <typename State, typename F>
std::vector<State> integrate_at(F f, State y0, const std::vector<double>& times,
                                double atol = 1e-10, double rtol = 1e-10) {
  DormandPrince<State, F> stepper(std::move(f), std::move(y0), 0.0, atol, rtol);
  std::vector<State> out;
  out.reserve(times.size());
  for (double t : times) {
    stepper.advance_to(t);
    out.push_back(stepper.state());
  }
  return out;
}

}  // namespace qcorr
