#pragma once

// Shared linear-algebra conventions for the two-qubit library.
//
// Single-qubit basis is {|1>, |0>} (excited state first), so sigma3|1> = +|1>.
// Two-qubit product basis is {|11>, |10>, |01>, |00>} with the first label on
// qubit A: index = 2*iA + iB where iA, iB run over {|1>=0, |0>=1}.
// Every module in this library assumes this ordering.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qcorr {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Bad user input (CLI maps this to exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical method failed or an evolved state broke an invariant
// (CLI maps this to exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;  // eigenvalues >= -kPsdTol accepted

inline Mat2 pauli(int k) {
  Mat2 s = Mat2::Zero();
  switch (k) {
    case 0:
      s.setIdentity();
      break;
    case 1:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = cd(0.0, -1.0);
      s(1, 0) = cd(0.0, 1.0);
      break;
    case 3:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      throw std::invalid_argument("pauli: index must be 0..3");
  }
  return s;
}

// A-first Kronecker product, consistent with the basis ordering above.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

template <typename M>
bool is_hermitian(const M& m, double tol = kHermTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// x*log2(x) with the measure-zero limit 0*log(0) = 0.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// von Neumann entropy in bits of a Hermitian PSD matrix.
template <typename M>
double vn_entropy(const M& rho) {
  Eigen::SelfAdjointEigenSolver<M> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    s -= xlog2x(std::max(0.0, es.eigenvalues()[i]));
  return s;
}

// Principal matrix square root via spectral decomposition; input must be
// Hermitian PSD up to kPsdTol (negative noise eigenvalues are clamped).
inline Mat4 sqrt_psd(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Eigen::Vector4d d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qcorr
