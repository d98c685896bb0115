#pragma once

// Correlation measures for two-qubit states: concurrence (generic, X-state,
// and evolved-EWL closed forms), Bell-diagonal quantum discord and classical
// correlations, relative entropy of entanglement on Bell-diagonal states,
// the maximal CHSH expectation, and a trace-distance non-Markovianity witness.
// Entropies are base-2 throughout.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Wootters concurrence. Uses the Hermitian form: the eigenvalues of
// sqrt(rho) rho_tilde sqrt(rho) equal those of rho*rho_tilde but the solve
// is numerically safe near degeneracies.
inline double concurrence(const DensityMatrix& rho) {
  static const Mat4 yy = kron(pauli(2), pauli(2));
  const Mat4 tilde = yy * rho.matrix().conjugate() * yy;
  const Mat4 sr = sqrt_psd(rho.matrix());
  Eigen::SelfAdjointEigenSolver<Mat4> es(sr * tilde * sr, Eigen::EigenvaluesOnly);
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  // eigenvalues come out ascending
  return std::max(0.0, lam[3] - lam[2] - lam[1] - lam[0]);
}

// Closed form on the X family: two competing coherence-vs-population branches.
inline double concurrence_x(const XState& x) {
  const double k1 = std::abs(x.rho23) - std::sqrt(std::max(0.0, x.rho11 * x.rho44));
  const double k2 = std::abs(x.rho14) - std::sqrt(std::max(0.0, x.rho22 * x.rho33));
  return 2.0 * std::max({0.0, k1, k2});
}

// Concurrence of an EWL state after both qubits passed the amplitude-damping
// map with coherence factor q; depends on q only through m = |q|^2.
inline double concurrence_ewl_evolved(const EwlParams& p, cd q) {
  validate(p);
  const double m = std::norm(q);
  const double a = p.a, r = p.r;
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  double inner;
  if (p.kind == EwlKind::phi) {
    inner = r * a * b -
            0.5 * std::sqrt((1.0 - r) * (1.0 - m + m * m * (1.0 - r) / 4.0));
  } else {
    // population term (1-r)/4*(2-m) + r b^2 (1-m) subtracted from the
    // damped coherence r a b
    inner = r * a * b -
            0.25 * (2.0 * (1.0 + r) - 4.0 * r * a * a - m * (1.0 + 3.0 * r - 4.0 * r * a * a));
  }
  return 2.0 * std::max(0.0, m * inner);
}

// Concurrence of the EWL state itself (no damping): 2max{0,(a|b|+1/4)r-1/4}.
inline double concurrence_ewl(const EwlParams& p) {
  validate(p);
  const double b = std::sqrt(std::max(0.0, 1.0 - p.a * p.a));
  return 2.0 * std::max(0.0, (p.a * b + 0.25) * p.r - 0.25);
}

// ---------------------------------------------------------------------------
// Bell-diagonal measures

struct BdEntropies {
  double s_rho;   // von Neumann entropy of the state
  double s_chi;   // entropy of the closest dephased (classical) state
  int dominant;   // axis kept by the dephasing, 1..3 (ties -> lowest index)
};

inline BdEntropies bell_diagonal_entropies(const BellDiagonal& c) {
  const auto w = bell_weights(c);
  double s = 0.0;
  for (double v : w) s -= xlog2x(std::max(0.0, v));
  const double ac[3] = {std::abs(c.c1), std::abs(c.c2), std::abs(c.c3)};
  int dom = 1;
  for (int i = 1; i < 3; ++i)
    if (ac[i] > ac[dom - 1]) dom = i + 1;
  const double cmax = ac[dom - 1];
  // dephasing along the dominant axis keeps c_dom and zeroes the others;
  // its spectrum is {(1 +- cmax)/4} twice each
  const double s_chi = 1.0 + binary_entropy(0.5 * (1.0 + cmax));
  return {s, s_chi, dom};
}

struct DiscordSplit {
  double discord;
  double classical;
  double mutual_information;
  int dominant;
};

// Quantum discord and classical correlations of a Bell-diagonal state.
// D = S(chi) - S(rho), CC = 2 - S(chi); D + CC equals the mutual information.
inline DiscordSplit discord_and_classical(const BellDiagonal& c) {
  const BdEntropies e = bell_diagonal_entropies(c);
  const double d = e.s_chi - e.s_rho;
  const double cc = 2.0 - e.s_chi;
  return {d, cc, 2.0 - e.s_rho, e.dominant};
}

// Relative entropy of entanglement on the Bell-diagonal family: zero unless
// one Bell weight exceeds 1/2.
inline double rel_entropy_entanglement_bd(const BellDiagonal& c) {
  const auto w = bell_weights(c);
  const double lmax = *std::max_element(w.begin(), w.end());
  if (lmax <= 0.5) return 0.0;
  return 1.0 - binary_entropy(lmax);
}

// ---------------------------------------------------------------------------
// CHSH

// Maximal CHSH expectation over measurement settings: 2*sqrt(u1+u2) with
// u1, u2 the two largest eigenvalues of T^T T. Values above 2 witness
// nonlocality; the algebraic maximum is 2*sqrt(2).
inline double chsh_max(const DensityMatrix& rho) {
  const Mat3 T = bloch_correlations(rho).T;
  Eigen::SelfAdjointEigenSolver<Mat3> es(T.transpose() * T, Eigen::EigenvaluesOnly);
  const auto& u = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, u[1] + u[2]));
}

// ---------------------------------------------------------------------------
// Trace distance and the positive-increment non-Markovianity witness

template <typename M>
double trace_distance(const M& r1, const M& r2) {
  Eigen::SelfAdjointEigenSolver<M> es(r1 - r2, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// A channel family maps an initial single-qubit state to its image at time t.
using SingleQubitFamily = std::function<Mat2(const Mat2&, double)>;

// Sum of positive increments of the trace distance between the evolved pair
// over the sampled grid; zero for any time-homogeneous contractive family,
// positive when distinguishability flows back.
inline double nonmarkov_witness(const SingleQubitFamily& family, const Mat2& a0,
                                const Mat2& b0, const std::vector<double>& times) {
  if (times.size() < 2)
    throw ConfigError("nonmarkov_witness needs at least two grid points");
  double acc = 0.0;
  double prev = trace_distance(Mat2(family(a0, times[0])), Mat2(family(b0, times[0])));
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double d = trace_distance(Mat2(family(a0, times[k])), Mat2(family(b0, times[k])));
    acc += std::max(0.0, d - prev);
    prev = d;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Aggregate report

struct CorrelationReport {
  double concurrence = 0.0;
  double chsh = 2.0;
  // present only when the state is Bell-diagonal (closed forms apply)
  std::optional<double> discord, classical, rel_entropy_entanglement;
};

inline CorrelationReport correlation_report(const DensityMatrix& rho) {
  CorrelationReport rep;
  rep.concurrence = concurrence(rho);
  rep.chsh = chsh_max(rho);
  try {
    const BellDiagonal c = bd_coefficients(rho);
    const DiscordSplit ds = discord_and_classical(c);
    rep.discord = ds.discord;
    rep.classical = ds.classical;
    rep.rel_entropy_entanglement = rel_entropy_entanglement_bd(c);
  } catch (const ConfigError&) {
    // not Bell-diagonal: closed-form measures stay unset
  }
  return rep;
}

inline nlohmann::json report_to_json(const CorrelationReport& r) {
  nlohmann::json j{{"concurrence", r.concurrence}, {"chsh_max", r.chsh}};
  if (r.discord) j["discord"] = *r.discord;
  if (r.classical) j["classical"] = *r.classical;
  if (r.rel_entropy_entanglement)
    j["rel_entropy_entanglement"] = *r.rel_entropy_entanglement;
  return j;
}

}  // namespace qcorr
