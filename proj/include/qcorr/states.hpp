#pragma once

// Two-qubit state families: validated density matrices, X states, extended
// Werner-like (EWL) mixtures, and Bell-diagonal states.
//
// Bell-state naming used throughout (note: the one-excitation pair carries
// the Phi label here):
//   |Phi+-> = (|01> +- |10>)/sqrt(2)   one shared excitation
//   |Psi+-> = (|00> +- |11>)/sqrt(2)   zero or two excitations
// Basis ordering is {|11>, |10>, |01>, |00>}; see linalg.hpp.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <nlohmann/json.hpp>

#include "qcorr/linalg.hpp"

namespace qcorr {

using json = nlohmann::json;

class DensityMatrix {
 public:
  // Validates hermiticity, unit trace and positivity; throws ConfigError
  // naming the violated invariant otherwise.
  static DensityMatrix from_matrix(const Mat4& m) {
    if (!is_hermitian(m))
      throw ConfigError("density matrix is not Hermitian (max |m - m^dag| > 1e-12)");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
      throw ConfigError("density matrix trace is " + std::to_string(tr) +
                        ", expected 1 within 1e-12");
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -kPsdTol)
      throw ConfigError("density matrix has eigenvalue " + std::to_string(lo) +
                        " below the -1e-10 positivity tolerance");
    return DensityMatrix(m);
  }

  // Same checks, but failures are reported as NumericalError: use for
  // matrices produced by evolution, where a violation is an internal bug.
  static DensityMatrix from_evolution(const Mat4& m) {
    try {
      return from_matrix(m);
    } catch (const ConfigError& e) {
      throw NumericalError(std::string("evolved state invalid: ") + e.what());
    }
  }

  const Mat4& matrix() const { return m_; }
  cd operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

// ---------------------------------------------------------------------------
// Bell states

enum class BellKind { phi_plus, phi_minus, psi_plus, psi_minus };

inline Eigen::Vector4cd bell_vector(BellKind k) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (k) {
    case BellKind::phi_plus:   v[2] = s; v[1] = s;  break;  // (|01>+|10>)/sqrt2
    case BellKind::phi_minus:  v[2] = s; v[1] = -s; break;
    case BellKind::psi_plus:   v[3] = s; v[0] = s;  break;  // (|00>+|11>)/sqrt2
    case BellKind::psi_minus:  v[3] = s; v[0] = -s; break;
  }
  return v;
}

inline DensityMatrix make_bell(BellKind k) {
  const Eigen::Vector4cd v = bell_vector(k);
  return DensityMatrix::from_matrix(v * v.adjoint());
}

// ---------------------------------------------------------------------------
// X states: nonzero entries only on the diagonal and anti-diagonal.

struct XState {
  double rho11 = 0, rho22 = 0, rho33 = 0, rho44 = 0;
  cd rho14{0, 0};  // |11><00| coherence
  cd rho23{0, 0};  // |10><01| coherence
};

inline Mat4 x_matrix(const XState& x) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = x.rho11;
  m(1, 1) = x.rho22;
  m(2, 2) = x.rho33;
  m(3, 3) = x.rho44;
  m(0, 3) = x.rho14;
  m(3, 0) = std::conj(x.rho14);
  m(1, 2) = x.rho23;
  m(2, 1) = std::conj(x.rho23);
  return m;
}

inline DensityMatrix make_x_state(const XState& x) {
  // X-block positivity is equivalent to the two 2x2 minors; let the generic
  // validator produce the diagnostic.
  return DensityMatrix::from_matrix(x_matrix(x));
}

// Reads the X entries back; throws if the matrix has non-X structure.
inline XState to_x_state(const DensityMatrix& rho, double tol = 1e-12) {
  const Mat4& m = rho.matrix();
  static constexpr int off[][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (auto [i, j] : off)
    if (std::abs(m(i, j)) > tol)
      throw ConfigError("matrix is not X-structured: entry (" + std::to_string(i + 1) +
                        "," + std::to_string(j + 1) + ") nonzero");
  return XState{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(),
                m(0, 3), m(1, 2)};
}

// ---------------------------------------------------------------------------
// Extended Werner-like states: rho = r |chi><chi| + (1-r)/4 * I with
// |chi_phi> = a|01> + b|10> or |chi_psi> = a|00> + b|11>, a real,
// b = sqrt(1-a^2) e^{i phase}.

enum class EwlKind { phi, psi };

struct EwlParams {
  double r = 1.0;       // purity weight in [0,1]
  double a = 1.0 / std::sqrt(2.0);
  double phase = 0.0;   // arg(b)
  EwlKind kind = EwlKind::phi;
};

inline void validate(const EwlParams& p) {
  if (!(p.r >= 0.0 && p.r <= 1.0))
    throw ConfigError("EWL parameter r must lie in [0,1]");
  if (!(p.a >= 0.0 && p.a <= 1.0))
    throw ConfigError("EWL amplitude a must lie in [0,1]");
}

inline DensityMatrix make_ewl(const EwlParams& p) {
  validate(p);
  const double b_abs = std::sqrt(std::max(0.0, 1.0 - p.a * p.a));
  const cd b = std::polar(b_abs, p.phase);
  Eigen::Vector4cd chi = Eigen::Vector4cd::Zero();
  if (p.kind == EwlKind::phi) {
    chi[2] = p.a;  // |01>
    chi[1] = b;    // |10>
  } else {
    chi[3] = p.a;  // |00>
    chi[0] = b;    // |11>
  }
  Mat4 m = p.r * (chi * chi.adjoint()).eval();
  m += (1.0 - p.r) / 4.0 * Mat4::Identity();
  return DensityMatrix::from_matrix(m);
}

// ---------------------------------------------------------------------------
// Bell-diagonal states: rho = (1/4)(I + sum_i c_i sigma_i x sigma_i).

struct BellDiagonal {
  double c1 = 0, c2 = 0, c3 = 0;
};

// Weights on {Phi+, Phi-, Psi+, Psi-}; all four must be >= 0 for a state.
inline std::array<double, 4> bell_weights(const BellDiagonal& c) {
  return {0.25 * (1 + c.c1 + c.c2 - c.c3), 0.25 * (1 - c.c1 - c.c2 - c.c3),
          0.25 * (1 + c.c1 - c.c2 + c.c3), 0.25 * (1 - c.c1 + c.c2 + c.c3)};
}

inline DensityMatrix make_bell_diagonal(const BellDiagonal& c) {
  for (double w : bell_weights(c))
    if (w < -kPsdTol)
      throw ConfigError("Bell-diagonal coefficients lie outside the state tetrahedron "
                        "(a Bell weight is " + std::to_string(w) + ")");
  Mat4 m = Mat4::Identity();
  const double ci[3] = {c.c1, c.c2, c.c3};
  for (int i = 1; i <= 3; ++i) m += ci[i - 1] * kron(pauli(i), pauli(i));
  return DensityMatrix::from_evolution(0.25 * m);
}

// ---------------------------------------------------------------------------
// Pauli correlation data

struct BlochCorrelations {
  Mat3 T;        // T_ij = Tr[rho sigma_i x sigma_j]
  Vec3 bloch_a;  // Tr[rho sigma_i x 1]
  Vec3 bloch_b;  // Tr[rho 1 x sigma_j]
};

inline BlochCorrelations bloch_correlations(const DensityMatrix& rho) {
  BlochCorrelations out;
  const Mat4& m = rho.matrix();
  const Mat2 id = Mat2::Identity();
  for (int i = 1; i <= 3; ++i) {
    out.bloch_a[i - 1] = (m * kron(pauli(i), id)).trace().real();
    out.bloch_b[i - 1] = (m * kron(id, pauli(i))).trace().real();
    for (int j = 1; j <= 3; ++j)
      out.T(i - 1, j - 1) = (m * kron(pauli(i), pauli(j))).trace().real();
  }
  return out;
}

// Bell-diagonal triple of a state, provided the state actually is
// Bell-diagonal within `tol` (reconstruction distance); throws otherwise.
inline BellDiagonal bd_coefficients(const DensityMatrix& rho, double tol = 1e-9) {
  const BlochCorrelations bc = bloch_correlations(rho);
  const BellDiagonal c{bc.T(0, 0), bc.T(1, 1), bc.T(2, 2)};
  Mat4 rebuilt = Mat4::Identity();
  const double ci[3] = {c.c1, c.c2, c.c3};
  for (int i = 1; i <= 3; ++i) rebuilt += ci[i - 1] * kron(pauli(i), pauli(i));
  rebuilt *= 0.25;
  if ((rebuilt - rho.matrix()).cwiseAbs().maxCoeff() > tol)
    throw ConfigError("state is not Bell-diagonal within tolerance " +
                      std::to_string(tol));
  return c;
}

// ---------------------------------------------------------------------------
// JSON round trip: {"basis":"11,10,01,00","re":[[..]],"im":[[..]]}

inline constexpr const char* kBasisLabel = "11,10,01,00";

inline json state_to_json(const DensityMatrix& rho) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 4; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int j = 0; j < 4; ++j) {
      rrow.push_back(rho(i, j).real());
      irow.push_back(rho(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"basis", kBasisLabel}, {"re", re}, {"im", im}};
}

inline DensityMatrix state_from_json(const json& j) {
  if (!j.contains("basis") || j["basis"].get<std::string>() != kBasisLabel)
    throw ConfigError(std::string("state JSON must declare basis \"") + kBasisLabel +
                      "\"");
  if (!j.contains("re") || !j.contains("im"))
    throw ConfigError("state JSON needs \"re\" and \"im\" 4x4 arrays");
  Mat4 m;
  const json &re = j["re"], &im = j["im"];
  if (re.size() != 4 || im.size() != 4)
    throw ConfigError("state JSON matrices must be 4x4");
  for (int i = 0; i < 4; ++i) {
    if (re[i].size() != 4 || im[i].size() != 4)
      throw ConfigError("state JSON matrices must be 4x4");
    for (int j2 = 0; j2 < 4; ++j2)
      m(i, j2) = cd(re[i][j2].get<double>(), im[i][j2].get<double>());
  }
  return DensityMatrix::from_matrix(m);
}

}  // namespace qcorr
