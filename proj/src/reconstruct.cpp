#include "gsp/reconstruct.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gsp/errors.hpp"
#include "gsp/sampling.hpp"

namespace gsp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::VectorXd gather(const VectorXd& f, const std::vector<int>& idx) {
  VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = f[idx[i]];
  return out;
}

namespace {

void check_samples(int n, const std::vector<int>& S, const VectorXd& y) {
  if (static_cast<Eigen::Index>(S.size()) != y.size()) {
    throw InvalidArgument("sample count differs from |S|");
  }
  std::vector<char> seen(n, 0);
  for (int v : S) {
    if (v < 0 || v >= n) throw InvalidArgument("sample node out of range");
    if (seen[v]) throw InvalidArgument("repeated node in S");
    seen[v] = 1;
  }
}

}  // namespace

ReconstructionResult consistent_reconstruct(const GftBasis& basis, int r, const std::vector<int>& S,
                                            const VectorXd& y_S) {
  const int n = basis.size();
  if (basis.is_complex) throw InvalidArgument("consistent_reconstruct: basis must be real");
  if (S.empty()) throw InvalidArgument("consistent_reconstruct: empty sampling set");
  if (r < 1 || r > n) throw InvalidArgument("consistent_reconstruct: r out of range");
  check_samples(n, S, y_S);
  if (static_cast<int>(S.size()) < r) {
    throw NonUniqueReconstruction("consistent_reconstruct: |S| < r, U_SR cannot have full column rank");
  }
  MatrixXd usr(S.size(), r);
  for (size_t i = 0; i < S.size(); ++i) usr.row(i) = basis.eigenvectors.row(S[i]).head(r);
  Eigen::HouseholderQR<MatrixXd> qr(usr);
  // U_SR and its R factor share singular values.
  const MatrixXd rfac = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<MatrixXd> svd(rfac);
  const double smin = svd.singularValues()[r - 1];
  if (smin < 1e-10) {
    throw NonUniqueReconstruction("consistent_reconstruct: U_SR is rank deficient (sigma_min = " +
                                      std::to_string(smin) + ")",
                                  smin);
  }
  const VectorXd c = qr.solve(y_S);
  ReconstructionResult out;
  out.method = "consistent";
  out.f_hat = basis.eigenvectors.leftCols(r) * c;
  out.residual = (usr * c - y_S).norm();
  out.condition_hint = smin;
  return out;
}

ReconstructionResult variational_reconstruct(const VariationOperator& L, int m,
                                             const std::vector<int>& S, const VectorXd& y_S,
                                             const VariationalOptions& opts) {
  const int n = L.size();
  if (S.empty()) throw InvalidArgument("variational_reconstruct: empty sampling set");
  if (m < 1) throw InvalidArgument("variational_reconstruct: m must be >= 1");
  check_samples(n, S, y_S);
  const auto sc = complement(n, S);
  const int nc = static_cast<int>(sc.size());

  ReconstructionResult out;
  out.method = "variational";
  out.power = m;
  VectorXd f = VectorXd::Zero(n);
  for (size_t i = 0; i < S.size(); ++i) f[S[i]] = y_S[i];
  if (nc == 0) {
    out.f_hat = f;
    return out;
  }

  auto power = [&](VectorXd v) {
    for (int i = 0; i < m; ++i) v = L.apply(v);
    return v;
  };
  auto power_adjoint = [&](VectorXd v) {
    for (int i = 0; i < m; ++i) v = L.apply_adjoint(v);
    return v;
  };
  auto embed = [&](const VectorXd& xc) {
    VectorXd v = VectorXd::Zero(n);
    for (int i = 0; i < nc; ++i) v[sc[i]] = xc[i];
    return v;
  };

  // CGLS for min |B x + g|, B = L^m E_{S^c}, g = L^m (samples on S). This is
  // CG on the normal system B'B x = -B'g; starting from 0 it returns the
  // minimum-norm solution when B'B is singular.
  VectorXd x = VectorXd::Zero(nc);
  VectorXd res = -power(f);  // -g - B x
  VectorXd s = gather(power_adjoint(res), sc);
  VectorXd p = s;
  double gamma = s.squaredNorm();
  const double gamma0 = gamma;
  const int cap = opts.max_iterations > 0 ? opts.max_iterations : 20 * nc;
  int it = 0;
  while (gamma > opts.tol * opts.tol * gamma0 && gamma > 0.0) {
    if (it == cap) {
      out.f_hat = f + embed(x);
      throw NumericFailure("variational_reconstruct: CG did not converge", std::sqrt(gamma / gamma0),
                           out.f_hat);
    }
    const VectorXd q = power(embed(p));
    const double qq = q.squaredNorm();
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    x += alpha * p;
    res -= alpha * q;
    s = gather(power_adjoint(res), sc);
    const double gamma_next = s.squaredNorm();
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
    ++it;
  }
  out.f_hat = f + embed(x);
  out.iterations = it;
  out.residual = gamma0 > 0.0 ? std::sqrt(gamma / gamma0) : 0.0;
  return out;
}

ReconstructionMetrics reconstruction_metrics(const VectorXd& f_true, const VectorXd& f_hat) {
  if (f_true.size() != f_hat.size()) throw InvalidArgument("reconstruction_metrics: length mismatch");
  if (f_true.size() == 0) throw InvalidArgument("reconstruction_metrics: empty signal");
  ReconstructionMetrics out;
  const double err = (f_true - f_hat).norm();
  out.mse = err * err / static_cast<double>(f_true.size());
  const double nf = f_true.norm();
  if (nf > 0.0) out.relative_error = err / nf;
  return out;
}

BoundCheck check_theorem2_bound(const VariationOperator& L, const GftBasis& basis,
                                const std::vector<int>& S, int k, int m, const VectorXd& f) {
  if (k > m) throw InvalidArgument("check_theorem2_bound: need k <= m");
  BoundCheck out;
  out.omega = bandwidth(f, basis, 1e-12);
  out.cutoff = cutoff_estimate(L, S, k).omega;
  if (!(out.cutoff > 0.0)) throw PreconditionError("check_theorem2_bound: Omega_k(S) is zero");
  const VectorXd f_hat = variational_reconstruct(L, m, S, gather(f, S)).f_hat;
  out.lhs = (f_hat - f).norm();
  out.rhs = 2.0 * std::pow(out.omega / out.cutoff, m) * f.norm();
  // Absolute slack for the solve's rounding, which matters when omega = 0.
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-8) + 1e-9 * f.norm();
  return out;
}

}  // namespace gsp
