#pragma once

// Quantum channels and reduced dynamics used by the scenario layer.
//
// All maps act in the product basis {|11>, |10>, |01>, |00>} (see
// states.hpp). Single-qubit matrices use {|1>, |0>} with the excited
// state first.

#include <cmath>
#include <complex>
#include <vector>

#include "qcorr/kernels.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/ode.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// ---------------------------------------------------------------------------
// Amplitude damping parameterized by the excited-state coherence factor q:
// the excited population scales by |q|^2 and the coherence by q. q = 1 is
// the identity, q = 0 full decay. |q| <= 1 is required for the map to be
// completely positive.
// ---------------------------------------------------------------------------

inline Mat2 amplitude_damp_single(const Mat2& rho, cd q) {
  const double m = std::norm(q);
  if (m > 1.0 + 1e-9)
    throw ConfigError("amplitude damping requires |q| <= 1 (got |q|^2 = " +
                      std::to_string(m) + ")");
  Mat2 out;
  out(0, 0) = m * rho(0, 0);
  out(0, 1) = q * rho(0, 1);
  out(1, 0) = std::conj(q) * rho(1, 0);
  out(1, 1) = rho(1, 1) + (1.0 - m) * rho(0, 0);
  return out;
}

// Kraus operators of the same single-qubit map (used to build the
// two-qubit product channel exactly).
inline std::array<Mat2, 2> amplitude_damp_kraus(cd q) {
  const double leak = std::max(0.0, 1.0 - std::norm(q));
  Mat2 k0 = Mat2::Zero(), k1 = Mat2::Zero();
  k0(0, 0) = q;
  k0(1, 1) = 1.0;
  k1(1, 0) = std::sqrt(leak);
  return {k0, k1};
}

// Two qubits coupled to independent environments: the product channel
// (Lambda_A x Lambda_B) with per-qubit coherence factors qa, qb.
inline DensityMatrix independent_envs_evolve(const DensityMatrix& rho0, cd qa, cd qb) {
  const auto ka = amplitude_damp_kraus(qa);
  const auto kb = amplitude_damp_kraus(qb);
  Mat4 out = Mat4::Zero();
  for (const Mat2& a : ka)
    for (const Mat2& b : kb) {
      const Mat4 k = kron(a, b);
      out += k * rho0.matrix() * k.adjoint();
    }
  return DensityMatrix::from_evolution(out);
}

// ---------------------------------------------------------------------------
// Two qubits sharing one lossy resonant mode (one-excitation sector).
//
// Amplitudes y = (c1, c2, b): c1 = <10|, c2 = <01|, b = photon in the mode.
// With the total coupling set to one and the mode linewidth 1/ratio:
//   dc1/dt = -i r1 b,   dc2/dt = -i r2 b,
//   db/dt  = -(1/(2 ratio)) b - i (r1 c1 + r2 c2).
// Time is measured in units of the total coupling rate. ratio >> 1 gives
// strong coupling (oscillatory exchange), ratio << 1 a fast-leaking mode.
// ---------------------------------------------------------------------------

struct CommonReservoirParams {
  double r1 = 0.5;   // relative coupling of qubit A; r2 = sqrt(1 - r1^2)
  double ratio = 0.1;  // coupling-to-linewidth ratio (mode decay = 1/ratio)
  cd c1_0 = 1.0;     // initial |10> amplitude
  cd c2_0 = 0.0;     // initial |01> amplitude
};

inline void validate(const CommonReservoirParams& p) {
  if (!(p.r1 > 0.0 && p.r1 < 1.0))
    throw ConfigError("common reservoir: r1 must lie strictly between 0 and 1");
  if (!(p.ratio > 0.0))
    throw ConfigError("common reservoir: coupling-to-linewidth ratio must be positive");
  const double w = std::norm(p.c1_0) + std::norm(p.c2_0);
  if (w > 1.0 + 1e-9)
    throw ConfigError("common reservoir: initial amplitudes exceed unit norm");
}

inline double common_reservoir_r2(double r1) { return std::sqrt(1.0 - r1 * r1); }

// Reduced two-qubit state of the one-excitation sector. Everything outside
// the {|10>, |01>} block is populated only through |00>.
inline DensityMatrix one_excitation_state(cd c1, cd c2) {
  Mat4 rho = Mat4::Zero();
  rho(1, 1) = std::norm(c1);
  rho(2, 2) = std::norm(c2);
  rho(1, 2) = c1 * std::conj(c2);
  rho(2, 1) = std::conj(rho(1, 2));
  rho(3, 3) = std::max(0.0, 1.0 - std::norm(c1) - std::norm(c2));
  return DensityMatrix::from_evolution(rho);
}

// Concurrence of a one-excitation state is 2 |c1 c2|.
inline double one_excitation_concurrence(cd c1, cd c2) {
  return 2.0 * std::abs(c1) * std::abs(c2);
}

inline std::vector<Eigen::Vector3cd> common_reservoir_amplitudes(
    const CommonReservoirParams& p, const std::vector<double>& times) {
  validate(p);
  const double r1 = p.r1;
  const double r2 = common_reservoir_r2(r1);
  const double kappa = 1.0 / p.ratio;
  Eigen::Vector3cd y0;
  y0 << p.c1_0, p.c2_0, cd(0.0, 0.0);
  const cd im(0.0, 1.0);
  auto rhs = [=](double, const Eigen::Vector3cd& y) {
    Eigen::Vector3cd dy;
    dy(0) = -im * r1 * y(2);
    dy(1) = -im * r2 * y(2);
    dy(2) = -0.5 * kappa * y(2) - im * (r1 * y(0) + r2 * y(1));
    return dy;
  };
  return integrate_at<Eigen::Vector3cd>(rhs, y0, times);
}

// Component of the initial excitation that never couples to the mode:
// the projection onto (r2, -r1). It survives indefinitely and fixes the
// stationary state.
inline std::pair<cd, cd> common_reservoir_stationary(const CommonReservoirParams& p) {
  validate(p);
  const double r1 = p.r1;
  const double r2 = common_reservoir_r2(r1);
  const cd alpha = r2 * p.c1_0 - r1 * p.c2_0;
  return {alpha * r2, -alpha * r1};
}

// Stationary concurrence for one initial excitation on qubit A: 2 r1 r2^3.
inline double common_reservoir_stationary_concurrence(const CommonReservoirParams& p) {
  const auto [c1, c2] = common_reservoir_stationary(p);
  return one_excitation_concurrence(c1, c2);
}

// ---------------------------------------------------------------------------
// Local Pauli flip channels on both qubits, acting on Bell-diagonal states.
//
// A flip channel along axis k leaves the c_k correlation untouched and
// scales the other two by the product m of the two single-qubit
// attenuation factors:
//   white noise with rate gamma on each qubit: m = exp(-2 gamma t);
//   identical telegraph noise on each qubit:   m = q(t)^2.
// ---------------------------------------------------------------------------

inline BellDiagonal flip_channel_evolve(const BellDiagonal& c0, int axis, double m) {
  if (axis < 1 || axis > 3)
    throw ConfigError("flip channel axis must be 1, 2 or 3");
  if (std::abs(m) > 1.0 + 1e-9)
    throw ConfigError("flip channel attenuation must satisfy |m| <= 1");
  BellDiagonal c = c0;
  if (axis != 1) c.c1 *= m;
  if (axis != 2) c.c2 *= m;
  if (axis != 3) c.c3 *= m;
  return c;
}

// Dephasing (axis 3) by white noise with rate gamma on each qubit.
inline BellDiagonal dephase_white(const BellDiagonal& c0, double gamma_t) {
  if (gamma_t < 0.0) throw ConfigError("dephasing time must be non-negative");
  return flip_channel_evolve(c0, 3, std::exp(-2.0 * gamma_t));
}

// Dephasing by identical random telegraph noise (amplitude a, switching
// rate nu) on each qubit; q is the single-qubit coherence factor.
inline BellDiagonal dephase_telegraph(const BellDiagonal& c0, double a, double nu,
                                      double t) {
  const double q = telegraph_q(a, nu, t);
  return flip_channel_evolve(c0, 3, q * q);
}

// ---------------------------------------------------------------------------
// Classical random external fields: each qubit sees a resonant field of
// fixed strength g whose phase is 0 or pi with equal probability. The
// state is the equal mixture of the four joint unitaries.
// ---------------------------------------------------------------------------

inline Mat2 random_field_unitary(double gt, double phase) {
  const double c = std::cos(gt), s = std::sin(gt);
  const cd e_minus = std::polar(1.0, -phase), e_plus = std::polar(1.0, phase);
  Mat2 u;
  u << c, e_minus * s, -e_plus * s, c;
  return u;
}

inline DensityMatrix random_field_evolve(const DensityMatrix& rho0, double gt) {
  const Mat2 u0 = random_field_unitary(gt, 0.0);
  const Mat2 u1 = random_field_unitary(gt, M_PI);
  Mat4 out = Mat4::Zero();
  for (const Mat2& ua : {u0, u1})
    for (const Mat2& ub : {u0, u1}) {
      const Mat4 u = kron(ua, ub);
      out += 0.25 * u * rho0.matrix() * u.adjoint();
    }
  return DensityMatrix::from_evolution(out);
}

// The same channel on Bell-diagonal states: c1 and c3 pick up cos^2(2gt),
// c2 is invariant.
inline BellDiagonal random_field_bd(const BellDiagonal& c0, double gt) {
  const double k = std::cos(2.0 * gt) * std::cos(2.0 * gt);
  return {c0.c1 * k, c0.c2, c0.c3 * k};
}

}  // namespace qcorr
