// Smallest eigenpair of M = ((L')^k L^k) restricted to S^c.
//
// M is never formed. With B = L^k E (E embeds S^c into V), M = B'B and the
// Rayleigh-Ritz step takes an SVD of B Q rather than an eigendecomposition of
// Q'MQ, which would square away half the available digits. L is scaled by an
// estimate of 1/|L| so that all chains stay bounded.
//
// For large (|L| / Omega)^2k plain LOBPCG stalls. The preconditioner is then
// T = (E' G E)^-1 with G = (L'L + a^2)^k, or G = (L + a)^2k when L is
// symmetric PSD. G^-1 comes from Chebyshev semi-iterations and the
// restriction to S^c from a Schur correction on cached columns
// H = G^-1 E_S, so that T x = [z - H (H_S)^-1 z_S]_{S^c}, z = G^-1 E x.
// The shift a tracks a fixed fraction of the current Omega_k estimate.
//
// G^-1 is of order a^-2k on the low modes of L while T is of order
// (Omega + a)^-2k, so at high k that correction cancels most digits. In that
// case Lanczos Ritz pairs V of C = L (or L'L) below Omega are split off,
// G^-1 = K + V D V', and the low-rank part enters T in closed form.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gsp/errors.hpp"
#include "gsp/random.hpp"
#include "gsp/spectral.hpp"

namespace gsp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Unpreconditioned steps under `automatic` before Chebyshev is switched on.
constexpr int kPlainStepLimit = 150;

using BlockOp = std::function<MatrixXd(const MatrixXd&)>;

struct LobpcgOptions {
  double tol = 1e-8;
  double sigma_floor = 1e-12;  // tol * max(sigma, sigma_floor) residual test
  int max_iterations = 1000;
  bool preconditioned = false;
  bool loose = false;  // stop on the vector-error estimate alone
  bool strict = false;  // residual and stagnation tests only
};

struct LobpcgResult {
  VectorXd x;
  double sigma = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Orthogonalize v against the columns of q, twice.
void orthogonalize(Eigen::Ref<VectorXd> v, const MatrixXd& q) {
  if (q.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) v -= q * (q.transpose() * v);
}

// Single-vector LOBPCG for the smallest eigenpair of B'B.
// `adapt(sigma)` may swap the preconditioner; returning true restarts the
// search directions.
LobpcgResult lobpcg(const BlockOp& fwd, const BlockOp& adj, const BlockOp& prec,
                    VectorXd x0, const LobpcgOptions& opt,
                    const std::function<bool(double)>& adapt = {}) {
  const Eigen::Index nc = x0.size();
  LobpcgResult res;
  VectorXd x = x0.normalized();
  MatrixXd bx = fwd(x);
  VectorXd p, bp;
  double sig_prev = std::numeric_limits<double>::infinity();
  double theta2 = std::numeric_limits<double>::quiet_NaN();
  int stagnant = 0;
  res.x = x;
  res.sigma = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= opt.max_iterations; ++it) {
    if (it > 0 && it % 25 == 0) {
      // Refresh the tracked images against drift.
      bx = fwd(x);
      if (p.size()) bp = fwd(p).col(0);
    }
    const double nx = x.norm();
    x /= nx;
    bx /= nx;
    const double sig = bx.squaredNorm();
    const VectorXd r = adj(bx).col(0) - sig * x;
    const double rn = r.norm();
    res.x = x;
    res.sigma = sig;
    res.residual = rn;
    res.iterations = it;

    const double change = sig_prev - sig;
    const double floor = std::max(1e-14, 4.0 * kEps / std::sqrt(std::max(sig, 1e-300)));
    stagnant = (it > 0 && std::abs(change) <= floor * sig) ? stagnant + 1 : 0;
    sig_prev = sig;
    if (rn <= opt.tol * std::max(sig, opt.sigma_floor) || rn <= 16.0 * kEps || stagnant >= 2) {
      res.converged = true;
      return res;
    }
    if (it == opt.max_iterations) break;
    if (adapt && adapt(sig)) {
      p.resize(0);
      bp.resize(0);
      theta2 = std::numeric_limits<double>::quiet_NaN();
    }

    VectorXd w = prec(r).col(0);
    if (opt.strict) {
      // Vector-error tests below bound sigma only in absolute terms.
    } else if (opt.preconditioned) {
      if (w.norm() <= opt.tol) {
        res.converged = true;
        return res;
      }
    } else if (std::isfinite(theta2) && theta2 > sig && rn <= opt.tol * (theta2 - sig)) {
      res.converged = true;
      return res;
    }
    if (opt.loose && std::isfinite(theta2) && theta2 > sig && rn <= 1e-3 * (theta2 - sig)) {
      res.converged = true;
      return res;
    }

    MatrixXd basis(nc, 1 + (p.size() ? 1 : 0));
    basis.col(0) = x;
    if (p.size()) basis.col(1) = p;
    const double nw0 = w.norm();
    orthogonalize(w, basis);
    const double nw = w.norm();
    const bool use_w = nw > 1e-10 * nw0 && nw > 0.0;

    const int q = 1 + (use_w ? 1 : 0) + (p.size() ? 1 : 0);
    MatrixXd qm(nc, q), bq(bx.rows(), q);
    qm.col(0) = x;
    bq.col(0) = bx.col(0);
    int c = 1;
    if (use_w) {
      w /= nw;
      qm.col(c) = w;
      bq.col(c) = fwd(w).col(0);
      ++c;
    }
    if (p.size()) {
      qm.col(c) = p;
      bq.col(c) = bp;
    }
    if (q == 1) {
      // Nothing new to search; x spans the whole space reachable.
      res.converged = true;
      return res;
    }

    Eigen::JacobiSVD<MatrixXd> svd(bq, Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    VectorXd coef = svd.matrixV().col(q - 1);
    theta2 = sv[q - 2] * sv[q - 2];
    // Conjugate direction: the part of the new iterate outside span(x).
    VectorXd cp = coef;
    cp[0] = 0.0;
    cp -= coef * coef.dot(cp);
    const double ncp = cp.norm();

    x = qm * coef;
    bx = bq * coef;
    if (ncp > 1e-14) {
      cp /= ncp;
      p = qm * cp;
      bp = bq * cp;
    } else {
      p.resize(0);
      bp.resize(0);
    }
  }
  res.converged = false;
  return res;
}

}  // namespace

struct CutoffSolver::Impl {
  VariationOperator op;
  int k;
  SolverConfig cfg;
  int n;
  double scale = 1.0;  // A = scale * L, |A| < 1
  long matvecs = 0;
  double hint = 0.0;  // scaled lower estimate of Omega_k, 0 when unknown

  double shift = 0.0;
  int degree = 0;
  bool psd = false;  // symmetric kinds here are all positive semidefinite
  std::unordered_map<int, VectorXd> hcols;

  // Low modes of C (A when psd, else A'A) split off the preconditioner, so
  // that G^-1 = K + V D V' with K of moderate size.
  MatrixXd vlow;
  VectorXd vlow_vals;
  double vlow_bound = -1.0;  // Ritz values below this were kept
  bool deflating = false;
  double defl_c = 0.0;  // K = G^-1 on the complement of V, plus defl_c V V'
  VectorXd defl_dinv;   // 1 / D

  Impl(const VariationOperator& L, int k_, SolverConfig c) : op(L), k(k_), cfg(c), n(L.size()) {
    if (k < 1) throw InvalidArgument("cutoff_estimate: k must be >= 1");
    psd = op.symmetric();
    const double top = largest_gram_eigenvalue();
    scale = top > 0.0 ? 1.0 / std::sqrt(1.05 * top) : 1.0;
  }

  MatrixXd a(const MatrixXd& x) {
    matvecs += x.cols();
    return scale * op.apply(x);
  }
  MatrixXd at(const MatrixXd& x) {
    matvecs += x.cols();
    return scale * op.apply_adjoint(x);
  }

  // Lanczos estimate of the top eigenvalue of L'L, from below.
  double largest_gram_eigenvalue() {
    const int steps = std::min(n, 40);
    if (steps == 0) return 0.0;
    Rng rng(derive_seed(cfg.seed, 0x1a9c));
    MatrixXd q(n, steps + 1);
    q.col(0) = normal_vector(n, rng).normalized();
    VectorXd alpha(steps), beta(steps);
    int m = 0;
    for (; m < steps; ++m) {
      VectorXd w = op.apply_adjoint(op.apply(q.col(m)));
      matvecs += 2;
      alpha[m] = q.col(m).dot(w);
      orthogonalize(w, q.leftCols(m + 1));
      beta[m] = w.norm();
      if (beta[m] <= 1e-12 * std::max(std::abs(alpha[m]), 1e-300)) {
        ++m;
        break;
      }
      q.col(m + 1) = w / beta[m];
    }
    MatrixXd t = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
  }

  MatrixXd c_apply(const MatrixXd& x) { return psd ? a(x) : at(a(x)); }

  // Ritz pairs of C below `bound` from Lanczos with full reorthogonalization.
  // A missed eigenvalue only weakens the preconditioner.
  void compute_low_modes(double bound) {
    const int cap = std::min(n, 600);
    Rng rng(derive_seed(cfg.seed, 0x10d3));
    MatrixXd q(n, cap + 1);
    q.col(0) = normal_vector(n, rng).normalized();
    VectorXd alpha(cap), beta(cap);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    int m = 0;
    auto ritz = [&](int steps) {
      MatrixXd t = MatrixXd::Zero(steps, steps);
      for (int i = 0; i < steps; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      es.compute(t);
    };
    auto settled = [&](int steps) {
      ritz(steps);
      for (int i = 0; i < steps && es.eigenvalues()[i] < 1.5 * bound; ++i) {
        if (beta[steps - 1] * std::abs(es.eigenvectors()(steps - 1, i)) > 1e-8) return false;
      }
      return true;
    };
    bool done = false;
    for (; m < cap && !done; ++m) {
      VectorXd w = c_apply(q.col(m)).col(0);
      alpha[m] = q.col(m).dot(w);
      orthogonalize(w, q.leftCols(m + 1));
      beta[m] = w.norm();
      if (beta[m] <= 1e-12) {
        ++m;
        done = true;
        break;
      }
      q.col(m + 1) = w / beta[m];
      if ((m + 1) % 10 == 0 && m + 1 >= 20) done = settled(m + 1);
    }
    ritz(m);
    int l = 0;
    while (l < m && es.eigenvalues()[l] < bound) ++l;
    vlow = q.leftCols(m) * es.eigenvectors().leftCols(l);
    vlow_vals = es.eigenvalues().head(l).cwiseMax(0.0);
    vlow_bound = bound;
  }

  // Decide on deflation for the current shift and Omega estimate (scaled).
  void configure_deflation(double omega) {
    const double lo = psd ? shift : shift * shift;
    const double theta = psd ? omega : omega * omega;
    const int power = psd ? 2 * k : k;
    // Relative size of the result against the terms the Schur correction
    // subtracts.
    const bool want = std::pow(lo / (theta + lo), power) < 1e-4;
    if (!want) {
      if (deflating) hcols.clear();
      deflating = false;
      return;
    }
    if (vlow_bound < theta) compute_low_modes(1.5 * theta);
    const double c = std::pow(vlow_bound + lo, -power);
    VectorXd dinv(vlow_vals.size());
    for (Eigen::Index i = 0; i < dinv.size(); ++i) {
      dinv[i] = 1.0 / (std::pow(vlow_vals[i] + lo, -power) - c);
    }
    if (!deflating || c != defl_c || dinv.size() != defl_dinv.size()) hcols.clear();
    deflating = true;
    defl_c = c;
    defl_dinv = dinv;
  }

  // K b: G^-1 b, or with deflation G^-1 on the complement of V plus c V V' b.
  MatrixXd k_apply(const MatrixXd& b) {
    if (!deflating || vlow.cols() == 0) return g_inverse(b);
    const MatrixXd vb = vlow.transpose() * b;
    MatrixXd z = g_inverse(b - vlow * vb);
    z -= vlow * (vlow.transpose() * z);
    return z + defl_c * (vlow * vb);
  }

  MatrixXd embed(const MatrixXd& xc, const std::vector<int>& sc) const {
    MatrixXd y = MatrixXd::Zero(n, xc.cols());
    for (size_t i = 0; i < sc.size(); ++i) y.row(sc[i]) = xc.row(i);
    return y;
  }
  static MatrixXd restrict_rows(const MatrixXd& y, const std::vector<int>& idx) {
    MatrixXd out(idx.size(), y.cols());
    for (size_t i = 0; i < idx.size(); ++i) out.row(i) = y.row(idx[i]);
    return out;
  }

  // y <- A^p E x, x <- E' (A')^p y
  MatrixXd chain(const MatrixXd& xc, const std::vector<int>& sc, int p) {
    MatrixXd y = embed(xc, sc);
    for (int i = 0; i < p; ++i) y = a(y);
    return y;
  }
  MatrixXd chain_adjoint(MatrixXd y, const std::vector<int>& sc, int p) {
    for (int i = 0; i < p; ++i) y = at(y);
    return restrict_rows(y, sc);
  }

  // Chebyshev semi-iteration for C x = b with C = A + shift (symmetric
  // PSD A) or C = A'A + shift^2, spectrum inside [lo, lo + 1]. Fixed
  // degree, so the map is linear and symmetric.
  MatrixXd chebyshev(const MatrixXd& b) {
    const double lo = psd ? shift : shift * shift, hi = 1.0 + lo;
    const double theta = 0.5 * (hi + lo), delta = 0.5 * (hi - lo);
    const double sigma1 = theta / delta;
    double rho = 1.0 / sigma1;
    MatrixXd x = MatrixXd::Zero(b.rows(), b.cols());
    MatrixXd r = b;
    MatrixXd d = r / theta;
    for (int i = 0; i < degree; ++i) {
      x += d;
      r -= (psd ? a(d) : at(a(d))) + lo * d;
      const double rho_next = 1.0 / (2.0 * sigma1 - rho);
      d = (rho_next * rho) * d + (2.0 * rho_next / delta) * r;
      rho = rho_next;
    }
    return x;
  }

  // G^-1 with G = (A + a)^2k or (A'A + a^2)^k.
  MatrixXd g_inverse(MatrixXd b) {
    const int solves = psd ? 2 * k : k;
    for (int i = 0; i < solves; ++i) b = chebyshev(b);
    return b;
  }

  void set_shift(double a_new) {
    shift = a_new;
    const double lo = psd ? shift : shift * shift;
    const double kappa = (1.0 + lo) / lo;
    degree = static_cast<int>(
        std::ceil(0.5 * std::sqrt(kappa) * std::log(2.0 / cfg.chebyshev_reduction)));
    degree = std::clamp(degree, 1, 4000);
    hcols.clear();
  }

  const VectorXd& hcol(int v) {
    auto it = hcols.find(v);
    if (it != hcols.end()) return it->second;
    MatrixXd e = MatrixXd::Zero(n, 1);
    e(v, 0) = 1.0;
    return hcols.emplace(v, k_apply(e).col(0)).first->second;
  }

  std::vector<int> complement_of(const std::vector<int>& S) const {
    std::vector<char> in(n, 0);
    for (int v : S) {
      if (v < 0 || v >= n) throw InvalidArgument("cutoff_estimate: node out of range");
      if (in[v]) throw InvalidArgument("cutoff_estimate: repeated node in S");
      in[v] = 1;
    }
    std::vector<int> sc;
    for (int v = 0; v < n; ++v) {
      if (!in[v]) sc.push_back(v);
    }
    return sc;
  }

  // Column norms of A restricted to S^c: the diagonal of (A'A)_{S^c}.
  VectorXd jacobi_diagonal(const std::vector<int>& sc) {
    const SpMat l = op.to_sparse();
    VectorXd col = VectorXd::Zero(n);
    for (int i = 0; i < l.outerSize(); ++i) {
      for (SpMat::InnerIterator it(l, i); it; ++it) col[it.col()] += it.value() * it.value();
    }
    VectorXd d(sc.size());
    for (size_t i = 0; i < sc.size(); ++i) d[i] = std::max(scale * scale * col[sc[i]], 1e-300);
    return d;
  }

  CutoffEstimate solve(const std::vector<int>& S, const VectorXd* start) {
    const std::vector<int> sc = complement_of(S);
    const int nc = static_cast<int>(sc.size());
    if (nc == 0) throw InvalidArgument("cutoff_estimate: S = V leaves nothing to estimate");
    const long mv0 = matvecs;
    const int maxit = cfg.max_iterations > 0 ? cfg.max_iterations : 50 * nc;

    VectorXd x0;
    if (start) {
      if (start->size() != n) throw InvalidArgument("cutoff_estimate: start vector length");
      x0 = restrict_rows(*start, sc).col(0);
    }
    if (x0.size() == 0 || !(x0.norm() > 0.0) || !x0.allFinite()) {
      Rng rng(derive_seed(cfg.seed, 0x57a7));
      x0 = VectorXd::Ones(nc) + cfg.perturbation * normal_vector(nc, rng);
    }

    const BlockOp fwd = [&](const MatrixXd& x) { return chain(x, sc, k); };
    const BlockOp adj = [&](const MatrixXd& y) { return chain_adjoint(y, sc, k); };
    LobpcgOptions opt;
    opt.tol = cfg.tol;
    opt.max_iterations = maxit;
    opt.sigma_floor = 1e-12 * std::pow(scale, 2.0 * k);

    Preconditioner mode = cfg.preconditioner;
    double a_est = hint;
    double rq_start = std::numeric_limits<double>::infinity();
    if (start && mode != Preconditioner::none) rq_start = fwd(x0.normalized()).squaredNorm();
    // A hint far below what the start vector achieves is stale (e.g. Omega of
    // the empty set); a shift built on it starves the preconditioner.
    const bool stale = a_est < 1e-2 * std::pow(rq_start, 1.0 / (2.0 * k));
    if (mode != Preconditioner::none && (a_est < 1e-6 || stale)) {
      // Bootstrap: Omega_1 <= Omega_k for symmetric L, from a loose
      // Jacobi-preconditioned k = 1 solve.
      const VectorXd diag = jacobi_diagonal(sc);
      const BlockOp f1 = [&](const MatrixXd& x) { return chain(x, sc, 1); };
      const BlockOp a1 = [&](const MatrixXd& y) { return chain_adjoint(y, sc, 1); };
      const BlockOp p1 = [&](const MatrixXd& r) -> MatrixXd {
        return r.array().colwise() / diag.array();
      };
      LobpcgOptions o1;
      // A few dozen steps suffice: the Ritz value only overestimates
      // Omega_1, and shift_factor absorbs that.
      o1.max_iterations = std::min(maxit, 40);
      o1.loose = true;
      o1.tol = cfg.tol;
      o1.sigma_floor = 1e-12 * scale * scale;
      const LobpcgResult boot = lobpcg(f1, a1, p1, x0, o1);
      // The order-k Rayleigh quotient of the k = 1 vector bounds Omega_k
      // from above; the shift is lowered later if the iteration finds less.
      const double rq_boot = fwd(boot.x.normalized()).squaredNorm();
      const double rq = std::min(rq_boot, rq_start);
      if (!start || rq_boot <= rq) x0 = boot.x;
      a_est = std::pow(rq, 1.0 / (2.0 * k));
    }
    const bool automatic = mode == Preconditioner::automatic;
    if (automatic) {
      const double a_cl = std::max(a_est, 1e-300);
      mode = std::pow(1.0 / a_cl, 2.0 * k) <= cfg.plain_condition_limit
                 ? Preconditioner::none
                 : Preconditioner::chebyshev_schur;
    }

    Eigen::PartialPivLU<MatrixXd> hs_lu, inner_lu;
    MatrixXd hmat, wmat;
    bool prec_ready = false;
    bool cheb = false;
    double omega_run = a_est;  // running Omega estimate (scaled)
    auto enable_cheb = [&, this](double a_target) {
      cheb = true;
      opt.preconditioned = true;
      omega_run = a_target;
      const double a_new = std::clamp(cfg.shift_factor * a_target, 1e-3, 1.0);
      if (shift == 0.0 || a_new > 1.5 * shift || a_new < shift / 1.5) set_shift(a_new);
      prec_ready = false;
    };
    if (mode == Preconditioner::chebyshev_schur) enable_cheb(a_est);
    // Inverse of the S^c block of G from K = G^-1 - V D V':
    // K/K_SS + W (D^-1 + V_S' K_SS^-1 V_S)^-1 W', W = V - K_:S K_SS^-1 V_S.
    const BlockOp prec = [&, this](const MatrixXd& r) -> MatrixXd {
      if (!cheb) return r;
      if (!prec_ready) {
        configure_deflation(omega_run);
        hmat.resize(n, S.size());
        MatrixXd hs(S.size(), S.size());
        for (size_t j = 0; j < S.size(); ++j) hmat.col(j) = hcol(S[j]);
        for (size_t i = 0; i < S.size(); ++i) hs.row(i) = hmat.row(S[i]);
        if (!S.empty()) hs_lu.compute(hs);
        wmat.resize(0, 0);
        if (deflating && vlow.cols() > 0) {
          const MatrixXd vs = restrict_rows(vlow, S);
          MatrixXd inner = defl_dinv.asDiagonal();
          wmat = vlow;
          if (!S.empty()) {
            const MatrixXd kv = hs_lu.solve(vs);
            wmat -= hmat * kv;
            inner += vs.transpose() * kv;
          }
          inner_lu.compute(inner);
        }
        prec_ready = true;
      }
      const MatrixXd re = embed(r, sc);
      MatrixXd z = k_apply(re);
      if (!S.empty()) {
        const MatrixXd zs = restrict_rows(z, S);
        z -= hmat * hs_lu.solve(zs);
      }
      if (wmat.size()) z += wmat * inner_lu.solve(wmat.transpose() * re);
      return restrict_rows(z, sc);
    };

    std::function<bool(double)> adapt;
    int plain_steps = 0;
    if (mode == Preconditioner::chebyshev_schur || automatic) {
      adapt = [&, this](double sig) {
        const double root = std::pow(sig, 1.0 / (2.0 * k));
        if (!cheb) {
          // The start estimate was too optimistic; switch once the running
          // Rayleigh quotient shows an ill-conditioned problem, or when a
          // small gap stalls the plain iteration.
          ++plain_steps;
          if (sig <= 0.0) return false;
          if (1.0 / sig <= cfg.plain_condition_limit && plain_steps < kPlainStepLimit) return false;
          enable_cheb(root);
          return true;
        }
        const double target = std::max(cfg.shift_factor * root, 1e-3);
        if (target >= shift / 1.5) return false;
        omega_run = root;
        set_shift(target);
        prec_ready = false;
        return true;
      };
    }
    const LobpcgResult res = lobpcg(fwd, adj, prec, x0, opt, adapt);

    CutoffEstimate est;
    est.k = k;
    est.iterations = res.iterations;
    VectorXd x = res.x.normalized();
    Eigen::Index imax;
    x.cwiseAbs().maxCoeff(&imax);
    if (x[imax] < 0) x = -x;
    MatrixXd bx = fwd(x);
    double sig = bx.squaredNorm();
    if (res.converged && sig <= 1e-14 && chain(x, sc, 1).norm() <= 1e-6) {
      // Sigma is at the resolution of the stopping test. If A x can be driven
      // to rounding level on S^c, then A^k x = 0 as well and sigma is exactly 0.
      const BlockOp f1 = [&](const MatrixXd& y) { return chain(y, sc, 1); };
      const BlockOp a1 = [&](const MatrixXd& y) { return chain_adjoint(y, sc, 1); };
      LobpcgOptions o1;
      o1.strict = true;
      o1.max_iterations = maxit;
      const LobpcgResult pol = lobpcg(f1, a1, [](const MatrixXd& r) { return r; }, x, o1);
      const VectorXd xp = pol.x.normalized();
      if (chain(xp, sc, 1).norm() <= 64.0 * kEps * std::sqrt(double(sc.size()))) {
        x = xp;
        x.cwiseAbs().maxCoeff(&imax);
        if (x[imax] < 0) x = -x;
        bx = fwd(x);
        sig = 0.0;
      }
    }
    const double rn = (adj(bx).col(0) - sig * x).norm();
    // |A^k x| at the rounding level of the chain means x is a null vector;
    // the 1/2k root would otherwise turn that noise into a sizeable Omega.
    if (std::sqrt(sig) <= 8.0 * k * kEps) sig = 0.0;
    const double unscale = std::pow(scale, -2.0 * k);
    est.sigma = sig * unscale;
    est.omega = std::pow(sig, 1.0 / (2.0 * k)) / scale;
    est.residual = rn * unscale;
    est.phi_star = embed(x, sc).col(0);
    est.matvecs = matvecs - mv0;
    if (!res.converged) {
      throw NumericFailure("cutoff_estimate: no convergence after " +
                               std::to_string(res.iterations) + " iterations",
                           est.residual, est.phi_star);
    }
    return est;
  }
};

CutoffSolver::CutoffSolver(const VariationOperator& L, int k, SolverConfig cfg)
    : impl_(std::make_unique<Impl>(L, k, cfg)) {}
CutoffSolver::~CutoffSolver() = default;
CutoffSolver::CutoffSolver(CutoffSolver&&) noexcept = default;
CutoffSolver& CutoffSolver::operator=(CutoffSolver&&) noexcept = default;

CutoffEstimate CutoffSolver::solve(const std::vector<int>& S, const VectorXd* start) {
  return impl_->solve(S, start);
}

void CutoffSolver::set_omega_hint(double omega) { impl_->hint = std::max(0.0, omega) * impl_->scale; }

long CutoffSolver::matvecs() const { return impl_->matvecs; }
int CutoffSolver::k() const { return impl_->k; }

CutoffEstimate cutoff_estimate(const VariationOperator& L, const std::vector<int>& S, int k,
                               const SolverConfig& cfg) {
  CutoffSolver solver(L, k, cfg);
  return solver.solve(S);
}

}  // namespace gsp
