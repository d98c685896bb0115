#pragma once

// Single-qubit coherence functions q(t) for the reservoir models used by the
// channel layer, plus a generic Volterra integro-differential solver
//
//     qdot(t) = -int_0^t f(t - t1) q(t1) dt1,   q(0) = 1,
//
// discretized by product integration: piecewise-linear interpolation of the
// smooth factor integrated exactly against the weight (composite trapezoid on
// smooth kernels, global order 2; 1/sqrt(u) product weights on the band-edge
// kernel). Times are dimensionless: Gamma*t for the damping kernels, beta*t
// for the band edge, a*t for the telegraph process.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcorr/linalg.hpp"

namespace qcorr {

struct TimeGrid {
  double t_max = 1.0;
  std::size_t steps = 100;  // uniform intervals; samples = steps + 1

  double h() const { return t_max / static_cast<double>(steps); }

  std::vector<double> times() const {
    if (!(t_max > 0.0)) throw ConfigError("grid t_max must be positive");
    if (steps < 2) throw ConfigError("grid needs at least 2 steps");
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
      t[k] = t_max * static_cast<double>(k) / static_cast<double>(steps);
    return t;
  }
};

struct CoherenceSeries {
  std::vector<double> t;
  std::vector<cd> q;

  double abs2(std::size_t i) const { return std::norm(q[i]); }
};

inline CoherenceSeries make_series(std::vector<double> t, std::vector<cd> q) {
  if (t.size() != q.size() || t.empty())
    throw NumericalError("coherence series shape mismatch");
  if (std::abs(q.front() - cd(1.0, 0.0)) > 1e-12)
    throw NumericalError("coherence series must start at q(0) = 1");
  for (const cd& v : q)
    if (std::abs(v) > 1.0 + 1e-9)
      throw NumericalError("coherence |q| exceeded 1 + 1e-9; the map is unphysical");
  return CoherenceSeries{std::move(t), std::move(q)};
}

// ---------------------------------------------------------------------------
// Closed forms

// Lorentzian bath at resonance, Gamma = 1 units. Underdamped for lambda < 2
// (memory-kept regime with q passing through zero), overdamped above.
inline double lorentzian_q(double lambda, double t) {
  if (!(lambda > 0.0)) throw ConfigError("lorentzian kernel needs lambda/Gamma > 0");
  const double disc = 2.0 * lambda - lambda * lambda;
  const double e = std::exp(-0.5 * lambda * t);
  if (std::abs(disc) < 1e-12) return e * (1.0 + 0.5 * lambda * t);
  if (disc > 0.0) {
    const double d = std::sqrt(disc);
    return e * (std::cos(0.5 * d * t) + (lambda / d) * std::sin(0.5 * d * t));
  }
  // Overdamped: written as two decaying exponentials so that neither factor
  // overflows (exp(-l t/2) cosh(d t/2) is 0 * inf for large lambda t).
  const double d = std::sqrt(-disc);
  return 0.5 * ((1.0 + lambda / d) * std::exp(-0.5 * (lambda - d) * t) +
                (1.0 - lambda / d) * std::exp(-0.5 * (lambda + d) * t));
}

// Memoryless limit, Gamma = 1: excited population decays as e^{-t}.
inline double markov_flat_q(double t) { return std::exp(-0.5 * t); }

// Random-telegraph dephasing factor <e^{-2i a int eta}> for flip rate nu.
inline double telegraph_q(double a, double nu, double t) {
  if (a < 0.0 || nu < 0.0) throw ConfigError("telegraph kernel needs a, nu >= 0");
  const double disc = 4.0 * a * a - nu * nu;
  const double e = std::exp(-nu * t);
  if (std::abs(disc) < 1e-12) return e * (1.0 + nu * t);
  if (disc > 0.0) {
    const double mu = std::sqrt(disc);
    return e * (std::cos(mu * t) + (nu / mu) * std::sin(mu * t));
  }
  const double mu = std::sqrt(-disc);
  return e * (std::cosh(mu * t) + (nu / mu) * std::sinh(mu * t));
}

// Reservoir correlation function matching lorentzian_q at resonance.
inline auto lorentzian_memory(double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("lorentzian kernel needs lambda/Gamma > 0");
  return [lambda](double t) { return 0.5 * lambda * std::exp(-lambda * t); };
}

// ---------------------------------------------------------------------------
// Volterra solver

namespace detail {

// One step-implicit sweep of the discretized equation. p holds the smooth
// kernel factor on the u-grid; A[j], B[j] are the exact integrals of 1 and
// (u - u_j) against the weight over [u_j, u_{j+1}].
template <typename S>
std::vector<S> volterra_sweep(const std::vector<S>& p, const std::vector<double>& A,
                              const std::vector<double>& B, double h) {
  const std::size_t n_int = A.size();
  std::vector<S> q(n_int + 1);
  q[0] = S(1);

  const S g0 = (A[0] - B[0] / h) * p[0];  // implicit coefficient on the new sample
  std::vector<S> gmid(n_int, S(0));
  for (std::size_t k = 1; k < n_int; ++k)
    gmid[k] = (B[k - 1] / h + A[k] - B[k] / h) * p[k];

  // the convolution needs only lags where the kernel still contributes
  double gmax = 0.0;
  for (std::size_t k = 1; k < n_int; ++k) gmax = std::max(gmax, std::abs(gmid[k]));
  std::size_t lag_cut = n_int >= 1 ? n_int - 1 : 0;
  while (lag_cut > 1 && std::abs(gmid[lag_cut]) < 1e-18 * gmax) --lag_cut;

  S I_prev = S(0);
  int over = 0;
  for (std::size_t n = 0; n < n_int; ++n) {
    S conv = S(0);
    const std::size_t kmax = std::min(n, lag_cut);
    const S* gp = gmid.data();
    const S* qp = q.data() + (n + 1);
    for (std::size_t k = 1; k <= kmax; ++k) conv += gp[k] * qp[-static_cast<std::ptrdiff_t>(k)];
    conv += (B[n] / h) * p[n + 1];  // oldest node, q(0) = 1
    q[n + 1] = (q[n] - 0.5 * h * (I_prev + conv)) / (S(1) + 0.5 * h * g0);
    I_prev = conv + g0 * q[n + 1];

    const double mag = std::abs(q[n + 1]);
    over = mag > 1.0 + 1e-6 ? over + 1 : 0;
    if (over >= 8 || mag > 2.0)
      throw NumericalError("volterra solve unstable (|q| grew past 1 + 1e-6); "
                           "use a smaller step h");
  }
  return q;
}

inline void check_uniform(const std::vector<double>& times, double& h) {
  if (times.size() < 3) throw ConfigError("volterra grid needs at least 3 samples");
  if (std::abs(times.front()) > 0.0)
    throw ConfigError("volterra grid must start at t = 0");
  h = times[1] - times[0];
  if (!(h > 0.0)) throw ConfigError("volterra grid must be increasing");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dk = times[k] - times[k - 1];
    if (std::abs(dk - h) > 1e-9 * h)
      throw ConfigError("volterra_q requires a uniform time grid");
  }
}

template <typename S>
CoherenceSeries to_series(const std::vector<double>& t, const std::vector<S>& q) {
  std::vector<cd> qc(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) qc[i] = cd(q[i]);
  return make_series(t, std::move(qc));
}

}  // namespace detail

// Solve qdot = -int f(t-s) q(s) ds on a uniform grid. The kernel f may return
// double or complex<double>; the solve runs in that scalar type.
template <typename F>
CoherenceSeries volterra_q(F&& f, const std::vector<double>& times) {
  using S = std::invoke_result_t<F, double>;
  static_assert(std::is_same_v<S, double> || std::is_same_v<S, cd>,
                "kernel must return double or complex<double>");
  double h = 0.0;
  detail::check_uniform(times, h);
  const std::size_t n_int = times.size() - 1;
  std::vector<S> p(n_int + 1);
  for (std::size_t k = 0; k <= n_int; ++k) p[k] = f(times[k]);
  const std::vector<double> A(n_int, h), B(n_int, 0.5 * h * h);
  return detail::to_series(times, detail::volterra_sweep(p, A, B, h));
}

template <typename F>
CoherenceSeries volterra_q(F&& f, const TimeGrid& grid) {
  return volterra_q(std::forward<F>(f), grid.times());
}

// Photonic band-gap edge: kernel beta^{3/2} e^{i(delta tau - pi/4)}/sqrt(pi tau)
// in beta = 1 units, delta = (qubit frequency - band edge)/beta. The inverse
// square root is carried by product-integration weights, the oscillatory
// factor stays in the smooth part. delta < 0 sits inside the gap and traps
// population; delta > 0 decays into the band down to a small residue.
inline CoherenceSeries bandedge_q(double delta_over_beta, const TimeGrid& grid) {
  const std::vector<double> times = grid.times();
  const double h = grid.h();
  const std::size_t n_int = times.size() - 1;

  const cd phase = std::polar(1.0 / std::sqrt(std::numbers::pi), -std::numbers::pi / 4);
  std::vector<cd> p(n_int + 1);
  for (std::size_t k = 0; k <= n_int; ++k)
    p[k] = phase * std::polar(1.0, delta_over_beta * times[k]);

  std::vector<double> A(n_int), B(n_int);
  double sq_lo = 0.0, cu_lo = 0.0;  // sqrt(u_j), u_j^{3/2} running values
  for (std::size_t j = 0; j < n_int; ++j) {
    const double u_hi = times[j + 1];
    const double sq_hi = std::sqrt(u_hi);
    const double cu_hi = u_hi * sq_hi;
    A[j] = 2.0 * (sq_hi - sq_lo);
    B[j] = (2.0 / 3.0) * (cu_hi - cu_lo) - times[j] * A[j];
    sq_lo = sq_hi;
    cu_lo = cu_hi;
  }
  return detail::to_series(times, detail::volterra_sweep(p, A, B, h));
}

// ---------------------------------------------------------------------------
// Kernel selection (config-facing)

// Grid with the step shrunk as the detuning grows: the kernel weights
// interpolate the oscillatory factor linearly, so the phase advance per
// step must stay small or the solution picks up a spurious decay.
inline TimeGrid bandedge_grid(double delta_over_beta, double t_max) {
  const double h = std::min(0.02, 0.05 / std::max(1.0, std::abs(delta_over_beta)));
  return TimeGrid{t_max, static_cast<std::size_t>(std::ceil(t_max / h))};
}

struct KernelSpec {
  enum class Type { lorentzian, markov_flat, band_edge, telegraph };
  Type type = Type::lorentzian;
  double lambda_over_gamma = 0.01;  // lorentzian
  double delta_over_beta = 0.0;     // band_edge
  double a = 1.0, nu = 0.05;        // telegraph
};

inline KernelSpec kernel_from_json(const nlohmann::json& j) {
  if (!j.contains("kernel")) throw ConfigError("kernel config needs a \"kernel\" type");
  const std::string name = j.at("kernel").get<std::string>();
  KernelSpec k;
  if (name == "lorentzian") {
    k.type = KernelSpec::Type::lorentzian;
    k.lambda_over_gamma = j.value("lambda_over_gamma", 0.01);
    if (!(k.lambda_over_gamma > 0.0))
      throw ConfigError("lorentzian kernel needs lambda_over_gamma > 0");
  } else if (name == "markov_flat") {
    k.type = KernelSpec::Type::markov_flat;
  } else if (name == "band_edge") {
    k.type = KernelSpec::Type::band_edge;
    k.delta_over_beta = j.value("delta_over_beta", 0.0);
  } else if (name == "telegraph") {
    k.type = KernelSpec::Type::telegraph;
    k.a = j.value("a", 1.0);
    k.nu = j.value("nu", 0.05);
    if (k.a < 0.0 || k.nu < 0.0) throw ConfigError("telegraph kernel needs a, nu >= 0");
  } else {
    throw ConfigError("unknown kernel \"" + name + "\"");
  }
  return k;
}

inline nlohmann::json kernel_to_json(const KernelSpec& k) {
  switch (k.type) {
    case KernelSpec::Type::lorentzian:
      return {{"kernel", "lorentzian"}, {"lambda_over_gamma", k.lambda_over_gamma}};
    case KernelSpec::Type::markov_flat:
      return {{"kernel", "markov_flat"}};
    case KernelSpec::Type::band_edge:
      return {{"kernel", "band_edge"}, {"delta_over_beta", k.delta_over_beta}};
    case KernelSpec::Type::telegraph:
      return {{"kernel", "telegraph"}, {"a", k.a}, {"nu", k.nu}};
  }
  throw ConfigError("unknown kernel type");
}

inline const char* kernel_time_unit(const KernelSpec& k) {
  switch (k.type) {
    case KernelSpec::Type::band_edge: return "beta*t";
    case KernelSpec::Type::telegraph: return "a*t";
    default: return "Gamma*t";
  }
}

inline CoherenceSeries kernel_series(const KernelSpec& k, const TimeGrid& grid) {
  if (k.type == KernelSpec::Type::band_edge) return bandedge_q(k.delta_over_beta, grid);
  std::vector<double> t = grid.times();
  std::vector<cd> q(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    switch (k.type) {
      case KernelSpec::Type::lorentzian:
        q[i] = lorentzian_q(k.lambda_over_gamma, t[i]);
        break;
      case KernelSpec::Type::markov_flat:
        q[i] = markov_flat_q(t[i]);
        break;
      case KernelSpec::Type::telegraph:
        q[i] = telegraph_q(k.a, k.nu, t[i]);
        break;
      default:
        break;
    }
  }
  return make_series(std::move(t), std::move(q));
}

// ---------------------------------------------------------------------------
// Long-time plateau of |q|^2

struct Plateau {
  double value;  // mean of |q|^2 over the last tenth of the grid
  double drift;  // difference between the two halves of that window
};

inline Plateau coherence_plateau(const CoherenceSeries& s) {
  const std::size_t n = s.q.size();
  if (n < 40) throw ConfigError("plateau estimate needs at least 40 samples");
  const std::size_t i0 = n - n / 10;
  const std::size_t imid = i0 + (n - i0) / 2;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = i0; i < imid; ++i) m1 += s.abs2(i);
  for (std::size_t i = imid; i < n; ++i) m2 += s.abs2(i);
  m1 /= static_cast<double>(imid - i0);
  m2 /= static_cast<double>(n - imid);
  Plateau p{0.5 * (m1 + m2), std::abs(m1 - m2)};
  if (p.drift > 1e-3 * p.value + 1e-5)
    throw NumericalError("|q|^2 has not reached its asymptotic plateau over the last "
                         "decade of the grid; extend t_max");
  return p;
}

}  // namespace qcorr
