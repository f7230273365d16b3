#include "gsp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gsp/errors.hpp"

namespace gsp {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Permutation sorting by |lambda|, then signed value, then index.
template <typename Vec>
std::vector<int> magnitude_order(const Vec& lambda) {
  std::vector<int> order(static_cast<size_t>(lambda.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(lambda[a]), mb = std::abs(lambda[b]);
    if (ma != mb) return ma < mb;
    return std::real(lambda[a]) < std::real(lambda[b]);
  });
  return order;
}

void check_cap(int n, int cap) {
  if (n > cap) {
    throw InvalidArgument("dense_gft: " + std::to_string(n) + " nodes exceeds the dense cap of " +
                          std::to_string(cap) +
                          "; use spectral_proxy / cutoff_estimate, which need only matvecs");
  }
}

}  // namespace

VectorXd GftBasis::coefficient_magnitudes(const VectorXd& f) const {
  if (f.size() != size()) throw InvalidArgument("signal length differs from basis size");
  if (is_complex) {
    const VectorXcd c = complex_eigenvectors.partialPivLu().solve(f.cast<std::complex<double>>());
    return c.cwiseAbs();
  }
  if (orthonormal) return (eigenvectors.transpose() * f).cwiseAbs();
  return eigenvectors.partialPivLu().solve(f).cwiseAbs();
}

GftBasis dense_gft(const VariationOperator& L, int dense_cap) {
  const int n = L.size();
  check_cap(n, dense_cap);
  GftBasis basis;
  if (L.symmetric()) {
    const MatrixXd a = L.to_dense();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NumericFailure("dense_gft: symmetric eigensolver failed");
    const auto order = magnitude_order(es.eigenvalues());
    basis.eigenvalues.resize(n);
    basis.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
      basis.eigenvalues[i] = es.eigenvalues()[order[i]];
      basis.eigenvectors.col(i) = es.eigenvectors().col(order[i]);
    }
    basis.orthonormal = true;
    return basis;
  }

  if (L.kind() == OperatorKind::random_walk_undirected && !L.graph().directed()) {
    // I - D^-1 W = D^-1/2 (I - D^-1/2 W D^-1/2) D^1/2; isolated nodes are
    // fixed points of both, so they keep a unit scaling.
    const VariationOperator sym =
        build_variation_operator(L.graph(), OperatorKind::sym_normalized);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym.to_dense());
    if (es.info() != Eigen::Success) throw NumericFailure("dense_gft: symmetric eigensolver failed");
    VectorXd s = degree_power(L.graph().out_degrees(), -0.5);
    for (int i = 0; i < n; ++i) {
      if (s[i] == 0.0) s[i] = 1.0;
    }
    const auto order = magnitude_order(es.eigenvalues());
    basis.eigenvalues.resize(n);
    basis.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
      basis.eigenvalues[i] = es.eigenvalues()[order[i]];
      basis.eigenvectors.col(i) = s.cwiseProduct(es.eigenvectors().col(order[i])).normalized();
    }
    basis.orthonormal = false;
    return basis;
  }

  Eigen::EigenSolver<MatrixXd> es(L.to_dense());
  if (es.info() != Eigen::Success) throw NumericFailure("dense_gft: eigensolver failed");
  const VectorXcd lambda = es.eigenvalues();
  MatrixXcd u = es.eigenvectors();
  for (int i = 0; i < n; ++i) u.col(i).normalize();
  Eigen::JacobiSVD<MatrixXcd> svd(u);
  const auto& sv = svd.singularValues();
  if (sv[n - 1] <= 1e-12 * sv[0]) {
    throw NumericFailure("dense_gft: eigenvector matrix is numerically singular (L not diagonalizable)",
                         sv[n - 1] / sv[0]);
  }
  const auto order = magnitude_order(lambda);
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const bool real = (lambda.imag().cwiseAbs().array() <= 1e-12 * scale).all();
  basis.orthonormal = false;
  basis.eigenvalues.resize(n);
  if (real) {
    basis.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
      basis.eigenvalues[i] = lambda[order[i]].real();
      // A real eigenvalue of a real matrix has a real eigenvector up to a
      // complex phase; rotate the largest entry onto the real axis.
      VectorXcd v = u.col(order[i]);
      Eigen::Index imax;
      v.cwiseAbs().maxCoeff(&imax);
      v *= std::conj(v[imax]) / std::abs(v[imax]);
      basis.eigenvectors.col(i) = v.real().normalized();
    }
    return basis;
  }
  basis.is_complex = true;
  basis.complex_eigenvalues.resize(n);
  basis.complex_eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    basis.complex_eigenvalues[i] = lambda[order[i]];
    basis.complex_eigenvectors.col(i) = u.col(order[i]);
    basis.eigenvalues[i] = std::abs(lambda[order[i]]);
  }
  return basis;
}

double bandwidth(const VectorXd& f, const GftBasis& basis, double tol) {
  if (f.norm() == 0.0) throw InvalidArgument("bandwidth: zero signal");
  const VectorXd c = basis.coefficient_magnitudes(f);
  const double cut = tol * c.norm();
  int last = -1;
  double omega = 0.0;
  int count = 0;
  for (int i = 0; i < c.size(); ++i) {
    if (c[i] > cut) {
      omega = std::max(omega, std::abs(basis.eigenvalues[i]));
      last = i;
      ++count;
    }
  }
  // A lone first coefficient reads as zero frequency when lambda_1 is at the
  // rounding level of the eigensolver.
  if (count == 1 && last == 0) {
    const double top = basis.eigenvalues.cwiseAbs().maxCoeff();
    if (omega <= 64.0 * std::numeric_limits<double>::epsilon() * basis.size() * top) return 0.0;
  }
  return omega;
}

double spectral_proxy(const VariationOperator& L, const VectorXd& f, int k) {
  if (k < 1) throw InvalidArgument("spectral_proxy: k must be >= 1");
  const double nf = f.norm();
  if (nf == 0.0) throw InvalidArgument("spectral_proxy: zero signal");
  VectorXd y = f / nf;
  double log_norm = 0.0;
  for (int i = 0; i < k; ++i) {
    y = L.apply(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    log_norm += std::log(ny);
    y /= ny;
  }
  return std::exp(log_norm / k);
}

double cos_theta_max(const GftBasis& basis, const std::vector<int>& S, int r) {
  const int n = basis.size();
  if (S.empty()) throw InvalidArgument("cos_theta_max: empty sampling set");
  if (r < 1 || r > n) throw InvalidArgument("cos_theta_max: r out of range");
  if (basis.is_complex) throw InvalidArgument("cos_theta_max: basis must be real");
  if (static_cast<int>(S.size()) < r) return 0.0;
  MatrixXd usr(S.size(), r);
  for (size_t i = 0; i < S.size(); ++i) {
    if (S[i] < 0 || S[i] >= n) throw InvalidArgument("cos_theta_max: node out of range");
    usr.row(i) = basis.eigenvectors.row(S[i]).head(r);
  }
  Eigen::JacobiSVD<MatrixXd> svd(usr);
  return svd.singularValues()[r - 1];
}

}  // namespace gsp
