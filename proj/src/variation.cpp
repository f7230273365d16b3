#include "gsp/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gsp/errors.hpp"
#include "gsp/random.hpp"
#include "gsp/scc.hpp"

namespace gsp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int iteration_cap(int n) { return std::max(10 * n, 10000); }

SpMat identity(int n) {
  SpMat eye(n, n);
  eye.setIdentity();
  return eye;
}

// sqrt(|A|_1 |A|_inf) >= |A|_2.
double holder_bound(const SpMat& a) {
  VectorXd row = VectorXd::Zero(a.rows()), col = VectorXd::Zero(a.cols());
  for (int i = 0; i < a.outerSize(); ++i) {
    for (SpMat::InnerIterator it(a, i); it; ++it) {
      row[i] += std::abs(it.value());
      col[it.col()] += std::abs(it.value());
    }
  }
  if (a.rows() == 0) return 0.0;
  return std::sqrt(row.maxCoeff() * col.maxCoeff());
}

}  // namespace

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::combinatorial: return "combinatorial";
    case OperatorKind::sym_normalized: return "sym_normalized";
    case OperatorKind::random_walk_undirected: return "random_walk_undirected";
    case OperatorKind::adjacency_based: return "adjacency_based";
    case OperatorKind::hub_authority: return "hub_authority";
    case OperatorKind::random_walk_directed: return "random_walk_directed";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  for (auto k : {OperatorKind::combinatorial, OperatorKind::sym_normalized,
                 OperatorKind::random_walk_undirected, OperatorKind::adjacency_based,
                 OperatorKind::hub_authority, OperatorKind::random_walk_directed}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown operator kind '" + name + "'");
}

VectorXd degree_power(const VectorXd& d, double exponent) {
  VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) out[i] = d[i] > 0.0 ? std::pow(d[i], exponent) : 0.0;
  return out;
}

VectorXd stationary_distribution(const Graph& g) {
  const int n = g.num_nodes();
  if (n == 0) throw PreconditionError("stationary_distribution: empty graph");
  const VectorXd q = g.out_degrees();
  if ((q.array() <= 0.0).any()) {
    throw PreconditionError("stationary_distribution: node with zero out-degree");
  }
  if (!is_strongly_connected(g)) {
    throw PreconditionError("stationary_distribution: graph is not strongly connected");
  }
  const VectorXd qinv = q.cwiseInverse();
  const SpMat& wt = g.weights_transposed();
  // Lazy chain pi <- (pi + P'pi) / 2: the mean of two consecutive iterates,
  // which converges for any period and keeps the same fixed point.
  VectorXd pi = VectorXd::Constant(n, 1.0 / n);
  double change = 0.0, prev = std::numeric_limits<double>::infinity();
  const int cap = iteration_cap(n);
  for (int it = 0; it < cap; ++it) {
    const VectorXd step = wt * qinv.cwiseProduct(pi);
    change = 0.5 * (step - pi).lpNorm<1>();
    pi = 0.5 * (pi + step);
    pi /= pi.sum();
    // Run to rounding level; stop once the change stalls there.
    if (change <= 1e-15 || (change <= 1e-12 && change >= prev)) return pi;
    prev = change;
  }
  throw NumericFailure("stationary_distribution: no convergence", change, pi);
}

double max_magnitude_eigenvalue(const Graph& g) {
  const int n = g.num_nodes();
  if (g.num_edges() == 0) throw InvalidArgument("max_magnitude_eigenvalue: graph has no edges");
  Rng rng(0x6d75u);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  x.normalize();
  const SpMat& w = g.weights();
  const int cap = iteration_cap(n);
  double est = 0.0, change = 0.0, prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cap; ++it) {
    double next;
    if (!g.directed()) {
      // Two steps per update: W^2 has spectrum mu^2 >= 0, so the +-mu_max
      // pair of a bipartite graph cannot make the iteration oscillate.
      const VectorXd y = w * x;
      next = y.norm();  // sqrt(x'W^2x), x unit
      x = w * y;
    } else {
      // Nonnegative W: the Perron root is the only eigenvalue of W + I with
      // modulus rho + 1, whatever the period.
      const VectorXd y = w * x + x;
      next = y.norm() - 1.0;
      x = y;
    }
    const double nx = x.norm();
    if (nx == 0.0) return 0.0;  // nilpotent W, e.g. a DAG
    x /= nx;
    change = std::abs(next - est);
    est = next;
    if (it > 0 && (change <= 1e-15 * est || (change <= 1e-12 * est && change >= prev))) return est;
    prev = change;
  }
  throw NumericFailure("max_magnitude_eigenvalue: no convergence", change);
}

VariationOperator build_variation_operator(const Graph& g, OperatorKind kind,
                                           const OperatorParams& params) {
  VariationOperator op;
  op.kind_ = kind;
  op.graph_ = std::make_shared<const Graph>(g);
  const bool undirected = !g.directed();
  switch (kind) {
    case OperatorKind::combinatorial:
      op.a_ = g.out_degrees();
      op.symmetric_ = undirected;
      break;
    case OperatorKind::sym_normalized:
      op.a_ = degree_power(g.out_degrees(), -0.5);
      op.symmetric_ = undirected;
      break;
    case OperatorKind::random_walk_undirected:
      op.a_ = degree_power(g.out_degrees(), -1.0);
      op.symmetric_ = false;
      break;
    case OperatorKind::adjacency_based:
      op.mu_max_ = max_magnitude_eigenvalue(g);
      if (!(op.mu_max_ > 0.0)) throw PreconditionError("adjacency_based: W is nilpotent");
      op.symmetric_ = undirected;
      break;
    case OperatorKind::hub_authority:
      if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) {
        throw InvalidArgument("hub_authority: gamma must lie in [0, 1]");
      }
      op.gamma_ = params.gamma;
      op.a_ = degree_power(g.out_degrees(), -0.5);
      op.b_ = degree_power(g.in_degrees(), -0.5);
      op.symmetric_ = true;
      break;
    case OperatorKind::random_walk_directed:
      if (!is_strongly_connected(g) || g.num_nodes() < 2) {
        throw PreconditionError(
            "random_walk_directed: graph must be strongly connected (run largest_scc first)");
      }
      op.pi_ = stationary_distribution(g);
      op.a_ = op.pi_.cwiseSqrt();
      op.b_ = g.out_degrees().cwiseInverse();
      op.symmetric_ = true;
      break;
  }
  switch (kind) {
    case OperatorKind::hub_authority:
      op.norm_bound_ = 1.0;  // |T| <= 1 by the Schur test
      break;
    case OperatorKind::random_walk_directed:
      op.norm_bound_ = 2.0;
      break;
    default:
      op.norm_bound_ = holder_bound(op.to_sparse());
  }
  return op;
}

MatrixXd VariationOperator::apply_t(const Eigen::Ref<const MatrixXd>& x) const {
  return a_.asDiagonal() * (graph_->weights() * (b_.asDiagonal() * x));
}

MatrixXd VariationOperator::apply_tt(const Eigen::Ref<const MatrixXd>& x) const {
  return b_.asDiagonal() * (graph_->weights_transposed() * (a_.asDiagonal() * x));
}

// Pi^1/2 P Pi^-1/2 x, or its transpose.
MatrixXd VariationOperator::apply_m(const Eigen::Ref<const MatrixXd>& x, bool adjoint) const {
  if (!adjoint) {
    const MatrixXd y = a_.cwiseInverse().asDiagonal() * x;
    return a_.asDiagonal() * (b_.asDiagonal() * (graph_->weights() * y));
  }
  const MatrixXd y = b_.asDiagonal() * (a_.asDiagonal() * x);
  return a_.cwiseInverse().asDiagonal() * (graph_->weights_transposed() * y);
}

MatrixXd VariationOperator::apply(const Eigen::Ref<const MatrixXd>& x) const {
  if (x.rows() != size()) throw InvalidArgument("apply: dimension mismatch");
  const SpMat& w = graph_->weights();
  switch (kind_) {
    case OperatorKind::combinatorial:
      return a_.asDiagonal() * x - w * x;
    case OperatorKind::sym_normalized:
      return x - a_.asDiagonal() * (w * (a_.asDiagonal() * x));
    case OperatorKind::random_walk_undirected:
      return x - a_.asDiagonal() * (w * x);
    case OperatorKind::adjacency_based:
      return x - (w * x) / mu_max_;
    case OperatorKind::hub_authority:
      return x - gamma_ * apply_tt(apply_t(x)) - (1.0 - gamma_) * apply_t(apply_tt(x));
    case OperatorKind::random_walk_directed:
      return x - 0.5 * (apply_m(x, false) + apply_m(x, true));
  }
  return x;
}

MatrixXd VariationOperator::apply_adjoint(const Eigen::Ref<const MatrixXd>& x) const {
  if (x.rows() != size()) throw InvalidArgument("apply_adjoint: dimension mismatch");
  if (symmetric_) return apply(x);
  const SpMat& wt = graph_->weights_transposed();
  switch (kind_) {
    case OperatorKind::combinatorial:
      return a_.asDiagonal() * x - wt * x;
    case OperatorKind::sym_normalized:
      return x - a_.asDiagonal() * (wt * (a_.asDiagonal() * x));
    case OperatorKind::random_walk_undirected:
      return x - wt * (a_.asDiagonal() * x);
    case OperatorKind::adjacency_based:
      return x - (wt * x) / mu_max_;
    default:
      return apply(x);
  }
}

SpMat VariationOperator::to_sparse() const {
  const int n = size();
  const SpMat& w = graph_->weights();
  const SpMat eye = identity(n);
  SpMat out;
  switch (kind_) {
    case OperatorKind::combinatorial:
      out = SpMat(a_.asDiagonal() * eye) - w;
      break;
    case OperatorKind::sym_normalized:
      out = eye - SpMat(a_.asDiagonal() * w * a_.asDiagonal());
      break;
    case OperatorKind::random_walk_undirected:
      out = eye - SpMat(a_.asDiagonal() * w);
      break;
    case OperatorKind::adjacency_based:
      out = eye - w / mu_max_;
      break;
    case OperatorKind::hub_authority: {
      const SpMat t = a_.asDiagonal() * w * b_.asDiagonal();
      const SpMat tt = t.transpose();
      out = eye - gamma_ * SpMat(tt * t) - (1.0 - gamma_) * SpMat(t * tt);
      break;
    }
    case OperatorKind::random_walk_directed: {
      const VectorXd ab = a_.cwiseProduct(b_);
      const SpMat m = ab.asDiagonal() * w * a_.cwiseInverse().asDiagonal();
      out = eye - 0.5 * (m + SpMat(m.transpose()));
      break;
    }
  }
  out.prune(0.0, 0.0);
  out.makeCompressed();
  return out;
}

MatrixXd VariationOperator::to_dense() const { return MatrixXd(to_sparse()); }

}  // namespace gsp
