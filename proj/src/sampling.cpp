#include "gsp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gsp/errors.hpp"
#include "gsp/random.hpp"

namespace gsp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Values within rel_tol of the maximum count as ties; lowest index wins.
int argmax_ties(const VectorXd& values, const std::vector<char>& taken, double rel_tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!taken[i]) best = std::max(best, values[i]);
  }
  const double cut = best - rel_tol * std::abs(best);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!taken[i] && values[i] >= cut) return static_cast<int>(i);
  }
  return -1;
}

void require_real(const GftBasis& basis, const char* who) {
  if (basis.is_complex) throw InvalidArgument(std::string(who) + ": basis must be real");
}

}  // namespace

SamplingSet SamplingSet::prefix(int m) const {
  SamplingSet out = *this;
  out.nodes.resize(std::min<size_t>(m, nodes.size()));
  out.per_step_cutoff.resize(std::min(out.per_step_cutoff.size(), out.nodes.size()));
  return out;
}

std::vector<int> complement(int n, const std::vector<int>& S) {
  std::vector<char> in(n, 0);
  for (int v : S) in[v] = 1;
  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

SamplingSet select_greedy_proxy(const VariationOperator& L, int m, int k, const SolverConfig& cfg,
                                GreedyStats* stats) {
  const int n = L.size();
  if (m < 1 || m > n) throw InvalidArgument("select_greedy_proxy: need 1 <= m <= N");
  SamplingSet out;
  out.method = "greedy_proxy";
  out.k = k;
  CutoffSolver solver(L, k, cfg);
  std::vector<char> taken(n, 0);
  VectorXd start;
  long iterations = 0;
  for (int step = 0; step <= m; ++step) {
    if (static_cast<int>(out.nodes.size()) == n) {
      out.per_step_cutoff.push_back(std::numeric_limits<double>::infinity());
      break;
    }
    CutoffEstimate est;
    try {
      est = solver.solve(out.nodes, start.size() ? &start : nullptr);
    } catch (const NumericFailure& e) {
      throw NumericFailure("greedy step " + std::to_string(step) + ": " + e.what(), e.residual(),
                           e.best_iterate());
    }
    iterations += est.iterations;
    if (step > 0) out.per_step_cutoff.push_back(est.omega);
    if (step == m) break;
    const VectorXd energy = est.phi_star.cwiseAbs2();
    const int v = argmax_ties(energy, taken, 1e-6);
    out.nodes.push_back(v);
    taken[v] = 1;
    start = est.phi_star;
    start[v] = 0.0;
    solver.set_omega_hint(est.omega);
  }
  if (stats) {
    stats->matvecs = solver.matvecs();
    stats->iterations = iterations;
  }
  return out;
}

SamplingSet select_optimal_design(const GftBasis& basis, int m, int r, DesignCriterion criterion) {
  require_real(basis, "select_optimal_design");
  const int n = basis.size();
  if (m < 1 || m > n) throw InvalidArgument("select_optimal_design: need 1 <= m <= N");
  if (r < 1 || r > n) throw InvalidArgument("select_optimal_design: need 1 <= r <= N");
  const MatrixXd u = basis.eigenvectors.leftCols(r);
  SamplingSet out;
  out.method = criterion == DesignCriterion::e_opt ? "e_opt" : "a_opt";
  std::vector<char> taken(n, 0);
  MatrixXd gram = MatrixXd::Zero(r, r);  // U_SR' U_SR
  VectorXd score(n);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es;

  for (int step = 0; step < m; ++step) {
    const int s = step;  // current |S|
    if (criterion == DesignCriterion::e_opt) {
      // Smallest of the min(|S|+1, r) singular values of U_{S+v,R}.
      MatrixXd us(s, r);
      for (int i = 0; i < s; ++i) us.row(i) = u.row(out.nodes[i]);
      const MatrixXd kss = us * us.transpose();
      for (int v = 0; v < n; ++v) {
        if (taken[v]) {
          score[v] = -1.0;
          continue;
        }
        double lmin;
        if (s + 1 <= r) {
          MatrixXd kk(s + 1, s + 1);
          kk.topLeftCorner(s, s) = kss;
          const VectorXd cross = us * u.row(v).transpose();
          kk.col(s).head(s) = cross;
          kk.row(s).head(s) = cross.transpose();
          kk(s, s) = u.row(v).squaredNorm();
          es.compute(kk, Eigen::EigenvaluesOnly);
        } else {
          es.compute(gram + u.row(v).transpose() * u.row(v), Eigen::EigenvaluesOnly);
        }
        lmin = es.eigenvalues()[0];
        score[v] = std::sqrt(std::max(lmin, 0.0));
      }
    } else {
      // Trace of the inverse Gram where invertible; otherwise the
      // bootstrap score |U_SR|_F^2, i.e. the candidate's row energy.
      bool any_invertible = false;
      VectorXd trace_inv(n);
      for (int v = 0; v < n; ++v) {
        trace_inv[v] = std::numeric_limits<double>::infinity();
        if (taken[v] || s + 1 < r) continue;
        es.compute(gram + u.row(v).transpose() * u.row(v), Eigen::EigenvaluesOnly);
        const VectorXd& ev = es.eigenvalues();
        if (ev[0] > 1e-10 * std::max(ev[r - 1], 1e-300)) {
          trace_inv[v] = ev.cwiseInverse().sum();
          any_invertible = true;
        }
      }
      for (int v = 0; v < n; ++v) {
        if (taken[v]) score[v] = -std::numeric_limits<double>::infinity();
        else score[v] = any_invertible ? -trace_inv[v] : u.row(v).squaredNorm();
      }
    }
    const int v = argmax_ties(score, taken, 1e-12);
    out.nodes.push_back(v);
    taken[v] = 1;
    gram += u.row(v).transpose() * u.row(v);
  }
  return out;
}

SamplingSet select_m2(const GftBasis& basis, int m) {
  require_real(basis, "select_m2");
  const int n = basis.size();
  if (m < 1 || m > n) throw InvalidArgument("select_m2: need 1 <= m <= N");
  const MatrixXd& u = basis.eigenvectors;
  SamplingSet out;
  out.method = "m2";
  std::vector<char> taken(n, 0);
  VectorXd alpha(n);
  for (int i = 0; i < m; ++i) {
    // u_i = sum_{j<i} beta_j u_j + sum_{v not in S} alpha_v 1_v. Rows in S
    // fix beta through U_{S,<i} beta = u_i(S); the rest give alpha.
    VectorXd beta;
    if (i > 0) {
      MatrixXd uss(i, i);
      VectorXd rhs(i);
      for (int a = 0; a < i; ++a) {
        uss.row(a) = u.row(out.nodes[a]).head(i);
        rhs[a] = u(out.nodes[a], i);
      }
      Eigen::FullPivLU<MatrixXd> lu(uss);
      if (!lu.isInvertible()) {
        throw NumericFailure("select_m2: singular least-squares system at step " +
                             std::to_string(i));
      }
      beta = lu.solve(rhs);
    }
    for (int v = 0; v < n; ++v) {
      alpha[v] = taken[v] ? -1.0
                          : std::abs(u(v, i) - (i > 0 ? u.row(v).head(i).dot(beta) : 0.0));
    }
    const int v = argmax_ties(alpha, taken, 1e-12);
    out.nodes.push_back(v);
    taken[v] = 1;
  }
  return out;
}

SamplingSet select_gauss_pivot(const GftBasis& basis, int m) {
  require_real(basis, "select_gauss_pivot");
  const int n = basis.size();
  if (m < 1 || m > n) throw InvalidArgument("select_gauss_pivot: need 1 <= m <= N");
  MatrixXd a = basis.eigenvectors.leftCols(m);
  SamplingSet out;
  out.method = "gauss_pivot";
  std::vector<char> taken(n, 0);
  VectorXd mag(n);
  for (int c = 0; c < m; ++c) {
    for (int v = 0; v < n; ++v) mag[v] = taken[v] ? -1.0 : std::abs(a(v, c));
    const int p = argmax_ties(mag, taken, 1e-12);
    if (mag[p] <= 1e-14) {
      throw NumericFailure("select_gauss_pivot: zero column " + std::to_string(c) +
                           " after elimination");
    }
    out.nodes.push_back(p);
    taken[p] = 1;
    // Eliminate row p from the remaining columns.
    for (int j = c + 1; j < m; ++j) a.col(j) -= (a(p, j) / a(p, c)) * a.col(c);
  }
  return out;
}

SamplingSet select_random(int n, int m, std::uint64_t seed) {
  if (m < 0 || m > n) throw InvalidArgument("select_random: need 0 <= m <= n");
  Rng rng(mix_seed(seed));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  SamplingSet out;
  out.method = "random";
  out.nodes.assign(perm.begin(), perm.begin() + m);
  return out;
}

double dense_cutoff(const MatrixXd& L, const std::vector<int>& S, int k) {
  const int n = static_cast<int>(L.rows());
  const auto sc = complement(n, S);
  if (sc.empty()) return std::numeric_limits<double>::infinity();
  MatrixXd lk = L;
  for (int i = 1; i < k; ++i) lk = L * lk;
  MatrixXd b(n, sc.size());
  for (size_t j = 0; j < sc.size(); ++j) b.col(j) = lk.col(sc[j]);
  Eigen::JacobiSVD<MatrixXd> svd(b);
  const double smin = svd.singularValues()[sc.size() - 1];
  return std::pow(smin, 1.0 / k);
}

std::pair<SamplingSet, double> brute_force_best_set(const VariationOperator& L, int m, int k) {
  const int n = L.size();
  if (m < 1 || m > n) throw InvalidArgument("brute_force_best_set: need 1 <= m <= N");
  // C(n, m) without overflow.
  double combos = 1.0;
  for (int i = 0; i < m; ++i) combos = combos * (n - i) / (i + 1);
  if (combos > 1e6 + 0.5) {
    throw InvalidArgument("brute_force_best_set: C(N, m) exceeds the 1e6 budget");
  }
  const MatrixXd l = L.to_dense();
  MatrixXd lk = l;
  for (int i = 1; i < k; ++i) lk = l * lk;

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> best_set;
  double best = -1.0;
  std::vector<char> in(n);
  while (true) {
    std::fill(in.begin(), in.end(), 0);
    for (int v : idx) in[v] = 1;
    double omega = std::numeric_limits<double>::infinity();
    if (m < n) {
      MatrixXd b(n, n - m);
      for (int v = 0, j = 0; v < n; ++v) {
        if (!in[v]) b.col(j++) = lk.col(v);
      }
      Eigen::JacobiSVD<MatrixXd> svd(b);
      omega = std::pow(svd.singularValues()[n - m - 1], 1.0 / k);
    }
    // Lexicographic enumeration: only a clear improvement replaces.
    if (best < 0.0 || omega > best * (1.0 + 1e-12)) {
      best = omega;
      best_set = idx;
    }
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  SamplingSet out;
  out.method = "brute_force";
  out.k = k;
  out.nodes = best_set;
  out.per_step_cutoff.clear();
  return {out, best};
}

}  // namespace gsp
