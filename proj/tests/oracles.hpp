#pragma once

// Independent reference implementations used only by the test suite.
// Each oracle recomputes a quantity through a different algorithm than the
// library (element-wise channel application, fixed-step master-equation
// integration, Monte Carlo noise averaging, brute-force measurement
// optimization) so that agreement is meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace qcorr::oracle {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Random inputs
// ---------------------------------------------------------------------------

inline Mat4 ginibre_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cd(n(rng), n(rng));
  Mat4 rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

inline cd random_coherence(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
}

// Uniform over the Bell-diagonal tetrahedron via Dirichlet(1,1,1,1) weights.
inline BellDiagonal random_bell_diagonal(Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::array<double, 4> w{};
  double sum = 0.0;
  for (double& x : w) {
    x = e(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  // w = (phi+, phi-, psi+, psi-)
  return {w[0] - w[1] + w[2] - w[3], w[0] - w[1] - w[2] + w[3],
          -w[0] - w[1] + w[2] + w[3]};
}

inline XState random_x_state(Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> p{};
  double sum = 0.0;
  for (double& x : p) {
    x = e(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  XState xs;
  xs.rho11 = p[0];
  xs.rho22 = p[1];
  xs.rho33 = p[2];
  xs.rho44 = p[3];
  xs.rho14 = std::polar(u(rng) * std::sqrt(p[0] * p[3]), 2.0 * M_PI * u(rng));
  xs.rho23 = std::polar(u(rng) * std::sqrt(p[1] * p[2]), 2.0 * M_PI * u(rng));
  return xs;
}

// ---------------------------------------------------------------------------
// Product amplitude-damping channel applied block-wise (no Kraus operators,
// no Kronecker products): first on qubit A across 2x2 blocks, then on qubit
// B inside each block.
// ---------------------------------------------------------------------------

inline Mat4 damp_blockwise(const Mat4& rho, cd qa, cd qb) {
  const double ma = std::norm(qa), mb = std::norm(qb);
  auto blk = [&](const Mat4& m, int i, int j) -> Mat2 {
    return m.block<2, 2>(2 * i, 2 * j);
  };
  Mat4 after_a = Mat4::Zero();
  after_a.block<2, 2>(0, 0) = ma * blk(rho, 0, 0);
  after_a.block<2, 2>(0, 2) = qa * blk(rho, 0, 1);
  after_a.block<2, 2>(2, 0) = std::conj(qa) * blk(rho, 1, 0);
  after_a.block<2, 2>(2, 2) = blk(rho, 1, 1) + (1.0 - ma) * blk(rho, 0, 0);
  Mat4 out = after_a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 m = blk(after_a, i, j);
      Mat2 t;
      t(0, 0) = mb * m(0, 0);
      t(0, 1) = qb * m(0, 1);
      t(1, 0) = std::conj(qb) * m(1, 0);
      t(1, 1) = m(1, 1) + (1.0 - mb) * m(0, 0);
      out.block<2, 2>(2 * i, 2 * j) = t;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Single-qubit decay master equation integrated with fixed-step RK4:
//   d rho / dt = L rho L^+ - (1/2){L^+ L, rho},  L = |0><1| (unit rate).
// The endpoint should match the damping map with q = exp(-t/2).
// ---------------------------------------------------------------------------

inline Mat2 decay_master_equation(const Mat2& rho0, double t, std::size_t n_steps) {
  Mat2 lower = Mat2::Zero();
  lower(1, 0) = 1.0;  // |0><1| in the {|1>, |0>} ordering
  const Mat2 number = lower.adjoint() * lower;
  auto rhs = [&](const Mat2& r) -> Mat2 {
    return lower * r * lower.adjoint() - 0.5 * (number * r + r * number);
  };
  Mat2 rho = rho0;
  const double h = t / static_cast<double>(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const Mat2 k1 = rhs(rho);
    const Mat2 k2 = rhs(rho + 0.5 * h * k1);
    const Mat2 k3 = rhs(rho + 0.5 * h * k2);
    const Mat2 k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Monte Carlo average of the dephasing factor under random telegraph noise:
// trajectories eta(t) in {+1, -1} flipping at Poisson rate nu; the factor is
// < exp(-2 i a  int_0^t eta ds) >. Returns the sample mean of the real part
// and its standard error (the imaginary part vanishes by symmetry).
// ---------------------------------------------------------------------------

inline std::pair<double, double> telegraph_mc(double a, double nu, double t,
                                              std::size_t n_traj, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> gap(nu > 0.0 ? nu : 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n_traj; ++k) {
    double eta = u(rng) < 0.5 ? 1.0 : -1.0;
    double now = 0.0, integral = 0.0;
    while (now < t) {
      const double step = nu > 0.0 ? gap(rng) : (t - now);
      const double seg = std::min(step, t - now);
      integral += eta * seg;
      now += seg;
      if (step < t - now + seg) eta = -eta;
    }
    const double x = std::cos(2.0 * a * integral);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / static_cast<double>(n_traj);
  const double var =
      std::max(0.0, sum2 / static_cast<double>(n_traj) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n_traj))};
}

// ---------------------------------------------------------------------------
// Brute-force maximum of the two-setting correlation combination
//   2 sqrt(|T^t e|^2 + |T^t f|^2) over orthonormal pairs (e, f),
// by grid search plus local refinement. Validates the closed form.
// ---------------------------------------------------------------------------

namespace detail {

inline Vec3 unit_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Orthonormal frame completing e.
inline std::pair<Vec3, Vec3> frame_perp(const Vec3& e) {
  Vec3 ref = std::abs(e(2)) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  Vec3 u = ref - ref.dot(e) * e;
  u.normalize();
  Vec3 v = e.cross(u);
  return {u, v};
}

}  // namespace detail

inline double chsh_brute_force(const Mat3& t_matrix) {
  const Mat3 tt = t_matrix.transpose();
  auto value = [&](double theta, double phi, double psi) {
    const Vec3 e = detail::unit_from_angles(theta, phi);
    const auto [u, v] = detail::frame_perp(e);
    const Vec3 f = std::cos(psi) * u + std::sin(psi) * v;
    return 2.0 * std::sqrt((tt * e).squaredNorm() + (tt * f).squaredNorm());
  };
  double best = 0.0, b_theta = 0.0, b_phi = 0.0, b_psi = 0.0;
  const int nt = 25, np = 48, ns = 24;
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < np; ++j)
      for (int k = 0; k < ns; ++k) {
        const double th = M_PI * i / nt;
        const double ph = 2.0 * M_PI * j / np;
        const double ps = M_PI * k / ns;
        const double v = value(th, ph, ps);
        if (v > best) {
          best = v;
          b_theta = th;
          b_phi = ph;
          b_psi = ps;
        }
      }
  double dt = M_PI / nt, dp = 2.0 * M_PI / np, ds = M_PI / ns;
  for (int round = 0; round < 6; ++round) {
    dt *= 0.25;
    dp *= 0.25;
    ds *= 0.25;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j)
        for (int k = -4; k <= 4; ++k) {
          const double v = value(b_theta + i * dt, b_phi + j * dp, b_psi + k * ds);
          if (v > best) {
            best = v;
            b_theta += i * dt;
            b_phi += j * dp;
            b_psi += k * ds;
          }
        }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Brute-force quantum discord: minimize the measured conditional entropy
// over rank-1 projective measurements on qubit B, scanning the Bloch sphere
// with a grid that contains the coordinate axes exactly, then refining.
// Returns {discord, classical correlation}.
// ---------------------------------------------------------------------------

namespace detail {

inline Mat2 partial_trace_a(const Mat4& rho) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = rho(2 * i + 0, 2 * j + 0) + rho(2 * i + 1, 2 * j + 1);
  return out;
}

inline Mat2 partial_trace_b(const Mat4& rho) {
  Mat2 out;
  out(0, 0) = rho(0, 0) + rho(1, 1);
  out(0, 1) = rho(0, 2) + rho(1, 3);
  out(1, 0) = rho(2, 0) + rho(3, 1);
  out(1, 1) = rho(2, 2) + rho(3, 3);
  return out;
}

// Conditional entropy of A after measuring B along the Bloch vector n.
inline double measured_conditional_entropy(const Mat4& rho, const Vec3& n) {
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  Eigen::Vector2cd ket;
  ket << std::cos(0.5 * theta),
      std::polar(std::sin(0.5 * theta), phi);
  const Eigen::Vector2cd ket_perp =
      (Eigen::Vector2cd() << -std::conj(ket(1)), std::conj(ket(0))).finished();
  double total = 0.0;
  for (const auto& v : {ket, ket_perp}) {
    Mat2 cond;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Eigen::Vector2cd col = rho.block<2, 2>(2 * i, 2 * j) * v;
        cond(i, j) = v.dot(col);
      }
    const double p = std::real(cond.trace());
    if (p > 1e-14) total += p * vn_entropy(Mat2(cond / p));
  }
  return total;
}

}  // namespace detail

inline std::pair<double, double> discord_brute_force(const Mat4& rho) {
  const Mat2 rho_a = detail::partial_trace_a(rho);
  const Mat2 rho_b = detail::partial_trace_b(rho);
  auto cond = [&](double theta, double phi) {
    return detail::measured_conditional_entropy(
        rho, detail::unit_from_angles(theta, phi));
  };
  double best = 1e300, b_theta = 0.0, b_phi = 0.0;
  const int nt = 12, np = 16;  // contains the z axis and, via np | 4, x and y
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < np; ++j) {
      const double th = 0.5 * M_PI * i / nt;
      const double ph = 2.0 * M_PI * j / np;
      const double v = cond(th, ph);
      if (v < best) {
        best = v;
        b_theta = th;
        b_phi = ph;
      }
    }
  double dt = 0.5 * M_PI / nt, dp = 2.0 * M_PI / np;
  for (int round = 0; round < 6; ++round) {
    dt *= 0.25;
    dp *= 0.25;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        const double v = cond(b_theta + i * dt, b_phi + j * dp);
        if (v < best) {
          best = v;
          b_theta += i * dt;
          b_phi += j * dp;
        }
      }
  }
  const double s_a = vn_entropy(rho_a);
  const double s_b = vn_entropy(rho_b);
  const double s_ab = vn_entropy(Mat4(rho));
  const double classical = s_a - best;
  const double discord = s_b - s_ab + best;
  return {discord, classical};
}

}  // namespace qcorr::oracle
