#include <doctest.h>

#include "gsp/errors.hpp"
#include "gsp/generators.hpp"
#include "gsp/variation.hpp"
#include "gsp/scc.hpp"
#include "helpers.hpp"

using namespace gsp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const OperatorKind kAllKinds[] = {OperatorKind::combinatorial, OperatorKind::sym_normalized,
                                  OperatorKind::random_walk_undirected,
                                  OperatorKind::adjacency_based, OperatorKind::hub_authority,
                                  OperatorKind::random_walk_directed};

bool kind_is_symmetric(OperatorKind k) {
  return k == OperatorKind::combinatorial || k == OperatorKind::sym_normalized ||
         k == OperatorKind::hub_authority || k == OperatorKind::random_walk_directed;
}

VectorXd random_vector(int n, std::uint64_t seed) {
  gsp::Rng rng(seed);
  return gsp::normal_vector(n, rng);
}

}  // namespace

TEST_CASE("operator kind names round trip") {
  for (auto k : kAllKinds) CHECK(operator_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(operator_kind_from_string("laplacian"), InvalidArgument);
}

TEST_CASE("two-node examples") {
  const Graph g = testing::two_node();
  MatrixXd expect(2, 2);
  expect << 1, -1, -1, 1;
  const auto comb = build_variation_operator(g, OperatorKind::combinatorial);
  CHECK(comb.to_dense() == expect);
  const auto adj = build_variation_operator(g, OperatorKind::adjacency_based);
  CHECK(adj.mu_max() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((adj.to_dense() - expect).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(comb.apply(VectorXd::Ones(2)).norm() == 0.0);
  VectorXd e0(2);
  e0 << 1, 0;
  VectorXd col(2);
  col << 1, -1;
  CHECK(comb.apply(e0).col(0) == col);
  CHECK_THROWS_AS(comb.apply(VectorXd::Ones(3)), InvalidArgument);
}

TEST_CASE("apply matches the dense definition for every kind") {
  for (bool directed : {false, true}) {
    const Graph g = directed ? testing::random_strong_digraph(50, 0.08, 5)
                             : testing::random_weighted(50, 0.12, 5, false);
    for (auto kind : kAllKinds) {
      if (directed && (kind == OperatorKind::sym_normalized ||
                       kind == OperatorKind::random_walk_undirected)) {
        continue;
      }
      CAPTURE(to_string(kind));
      CAPTURE(directed);
      const auto op = build_variation_operator(g, kind);
      const MatrixXd dense = testing::dense_operator(g, kind);
      const MatrixXd x = MatrixXd::NullaryExpr(
          50, 3, [](Eigen::Index i, Eigen::Index j) { return std::sin(1.7 * double(i + 50 * j + 1)); });
      const MatrixXd y = op.apply(x), yt = op.apply_adjoint(x);
      CHECK((y - dense * x).norm() <= 1e-12 * (dense * x).norm());
      CHECK((yt - dense.transpose() * x).norm() <= 1e-12 * (dense.transpose() * x).norm());
      CHECK((op.to_dense() - dense).norm() <= 1e-12 * dense.norm());
      // |L|_2 <= norm_bound
      Eigen::JacobiSVD<MatrixXd> svd(dense);
      CHECK(svd.singularValues()[0] <= op.norm_bound() * (1 + 1e-12));
    }
  }
}

TEST_CASE("adjoint consistency and symmetric kinds") {
  for (int s = 0; s < 5; ++s) {
    const Graph und = testing::random_weighted(40, 0.15, 100 + s, false);
    const Graph dir = testing::random_strong_digraph(40, 0.1, 200 + s);
    for (const Graph* g : {&und, &dir}) {
      for (auto kind : kAllKinds) {
        if (g->directed() && (kind == OperatorKind::sym_normalized ||
                              kind == OperatorKind::random_walk_undirected)) {
          continue;
        }
        if (kind == OperatorKind::random_walk_directed && !is_strongly_connected(*g)) continue;
        const auto op = build_variation_operator(*g, kind);
        const VectorXd x = random_vector(40, 7 * s + 1), y = random_vector(40, 7 * s + 2);
        const double lhs = op.apply(x).col(0).dot(y);
        const double rhs = x.dot(op.apply_adjoint(y).col(0));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        const bool sym = !g->directed() ? kind != OperatorKind::random_walk_undirected
                                        : kind_is_symmetric(kind) &&
                                              kind != OperatorKind::combinatorial &&
                                              kind != OperatorKind::sym_normalized;
        CHECK(op.symmetric() == sym);
        if (op.symmetric()) {
          CHECK((op.apply(x) - op.apply_adjoint(x)).norm() <= 1e-13 * op.apply(x).norm());
          if (kind != OperatorKind::adjacency_based) {
            CHECK(x.dot(op.apply(x).col(0)) >= -1e-10 * x.squaredNorm());
          }
        }
      }
    }
  }
}

TEST_CASE("random_walk_directed on an undirected graph equals sym_normalized") {
  const Graph g = testing::random_weighted(30, 0.3, 17, false);
  const auto rw = build_variation_operator(g, OperatorKind::random_walk_directed);
  const auto sn = build_variation_operator(g, OperatorKind::sym_normalized);
  CHECK((rw.to_dense() - sn.to_dense()).cwiseAbs().maxCoeff() < 1e-10);
  const VectorXd d = g.out_degrees();
  CHECK((rw.stationary() - d / d.sum()).lpNorm<1>() < 1e-10);
}

TEST_CASE("stationary distribution") {
  SUBCASE("directed 3-cycle") {
    const VectorXd pi = stationary_distribution(testing::cycle(3, true));
    for (int i = 0; i < 3; ++i) CHECK(pi[i] == doctest::Approx(1.0 / 3).epsilon(1e-10));
  }
  SUBCASE("star K_{1,3}") {
    const Graph star = Graph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, false);
    const VectorXd pi = stationary_distribution(star);
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-10));
    for (int i = 1; i < 4; ++i) CHECK(pi[i] == doctest::Approx(1.0 / 6).epsilon(1e-10));
  }
  SUBCASE("random strongly connected digraphs against the dense eigenvector") {
    for (int s = 0; s < 5; ++s) {
      const Graph g = testing::random_strong_digraph(20, 0.15, 300 + s);
      const VectorXd pi = stationary_distribution(g);
      const VectorXd oracle = testing::dense_stationary(testing::dense_w(g));
      CHECK((pi - oracle).lpNorm<1>() <= 1e-8);
      CHECK(pi.minCoeff() > 0.0);
      CHECK(std::abs(pi.sum() - 1.0) <= 1e-10);
      const MatrixXd w = testing::dense_w(g);
      const MatrixXd p = testing::pinv_pow(w.rowwise().sum(), -1.0).asDiagonal() * w;
      CHECK((p.transpose() * pi - pi).lpNorm<1>() <= 1e-8);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(stationary_distribution(Graph::from_edges(3, {{0, 1, 1}, {1, 2, 1}}, true)),
                    PreconditionError);
    CHECK_THROWS_AS(build_variation_operator(Graph::from_edges(3, {{0, 1, 1}, {1, 2, 1}}, true),
                                             OperatorKind::random_walk_directed),
                    PreconditionError);
  }
}

TEST_CASE("max magnitude eigenvalue") {
  CHECK(max_magnitude_eigenvalue(erdos_renyi(7, 1.0, 1)) == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(max_magnitude_eigenvalue(testing::two_node()) == doctest::Approx(1.0).epsilon(1e-8));
  // Bipartite and periodic cases.
  CHECK(max_magnitude_eigenvalue(testing::path(9)) ==
        doctest::Approx(2 * std::cos(M_PI / 10)).epsilon(1e-8));
  CHECK(max_magnitude_eigenvalue(testing::cycle(6, true)) == doctest::Approx(1.0).epsilon(1e-8));
  for (int s = 0; s < 5; ++s) {
    for (bool directed : {false, true}) {
      const Graph g = directed ? testing::random_strong_digraph(30, 0.1, 400 + s)
                               : testing::random_weighted(30, 0.2, 400 + s, false);
      Eigen::EigenSolver<MatrixXd> es(testing::dense_w(g), false);
      const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
      CHECK(testing::rel_diff(max_magnitude_eigenvalue(g), rho) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(max_magnitude_eigenvalue(Graph::from_edges(3, {}, false)), InvalidArgument);
}

TEST_CASE("quadratic form identities") {
  for (int s = 0; s < 10; ++s) {
    const Graph g = testing::random_weighted(60, 0.1, 500 + s, false);
    const MatrixXd w = testing::dense_w(g);
    const VectorXd d = w.rowwise().sum();
    const VectorXd x = random_vector(60, 600 + s);
    double comb = 0.0, norm = 0.0;
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j < 60; ++j) {
        if (w(i, j) == 0.0) continue;
        comb += 0.5 * w(i, j) * std::pow(x[i] - x[j], 2);
        const double a = d[i] > 0 ? x[i] / std::sqrt(d[i]) : 0.0;
        const double b = d[j] > 0 ? x[j] / std::sqrt(d[j]) : 0.0;
        norm += 0.5 * w(i, j) * std::pow(a - b, 2);
      }
    }
    const auto lc = build_variation_operator(g, OperatorKind::combinatorial);
    const auto ls = build_variation_operator(g, OperatorKind::sym_normalized);
    CHECK(testing::rel_diff(x.dot(lc.apply(x).col(0)), comb) <= 1e-10);
    // Isolated nodes contribute x_i^2 through the identity term.
    double iso = 0.0;
    for (int i = 0; i < 60; ++i) iso += d[i] == 0 ? x[i] * x[i] : 0.0;
    CHECK(testing::rel_diff(x.dot(ls.apply(x).col(0)), norm + iso) <= 1e-10);
  }
  for (int s = 0; s < 10; ++s) {
    const Graph g = testing::random_strong_digraph(40, 0.1, 700 + s);
    const MatrixXd w = testing::dense_w(g);
    const VectorXd q = w.rowwise().sum();
    const VectorXd pi = testing::dense_stationary(w);
    const VectorXd x = random_vector(40, 800 + s);
    double form = 0.0;
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        if (w(i, j) == 0.0) continue;
        const double pij = w(i, j) / q[i];
        form += 0.5 * pi[i] * pij * std::pow(x[i] / std::sqrt(pi[i]) - x[j] / std::sqrt(pi[j]), 2);
      }
    }
    const auto l = build_variation_operator(g, OperatorKind::random_walk_directed);
    CHECK(testing::rel_diff(x.dot(l.apply(x).col(0)), form) <= 1e-10);
  }
}

TEST_CASE("hub_authority is symmetric PSD and matches the co-linkage form") {
  for (int s = 0; s < 5; ++s) {
    const Graph g = testing::random_weighted(35, 0.1, 900 + s, true);
    for (double gamma : {0.0, 0.5, 1.0}) {
      OperatorParams prm;
      prm.gamma = gamma;
      const MatrixXd l = build_variation_operator(g, OperatorKind::hub_authority, prm).to_dense();
      CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(l);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
    // With gamma = 1, L = I - T'T and C = D_p^1/2 T'T D_p^1/2 has row sums p_i.
    OperatorParams one;
    one.gamma = 1.0;
    const MatrixXd l = build_variation_operator(g, OperatorKind::hub_authority, one).to_dense();
    const MatrixXd w = testing::dense_w(g);
    const VectorXd p = w.colwise().sum().transpose();
    const VectorXd q = w.rowwise().sum();
    const MatrixXd tt = MatrixXd::Identity(35, 35) - l;
    const MatrixXd c = p.cwiseSqrt().asDiagonal() * tt * p.cwiseSqrt().asDiagonal();
    for (int i = 0; i < 35; ++i) {
      if (p[i] == 0.0) continue;
      CHECK(std::abs(c.row(i).sum() - p[i]) <= 1e-10 * std::max(1.0, p[i]));
    }
    // Direct co-linkage c_ij = sum_k w_ki w_kj / q_k.
    MatrixXd cd = MatrixXd::Zero(35, 35);
    for (int k = 0; k < 35; ++k) {
      if (q[k] > 0) cd += w.row(k).transpose() * w.row(k) / q[k];
    }
    CHECK((c - cd).cwiseAbs().maxCoeff() <= 1e-10);
  }
  OperatorParams bad;
  bad.gamma = 1.5;
  CHECK_THROWS_AS(build_variation_operator(testing::two_node(), OperatorKind::hub_authority, bad),
                  InvalidArgument);
}

TEST_CASE("adjacency_based eigenvalues have nonnegative real part") {
  for (int s = 0; s < 5; ++s) {
    const Graph g = testing::random_weighted(30, 0.15, 1000 + s, s % 2 == 1);
    if (g.num_edges() == 0) continue;
    const MatrixXd l = build_variation_operator(g, OperatorKind::adjacency_based).to_dense();
    Eigen::EigenSolver<MatrixXd> es(l, false);
    CHECK(es.eigenvalues().real().minCoeff() >= -1e-10);
  }
}

TEST_CASE("zero-degree nodes use the pseudo-inverse convention") {
  const Graph g = Graph::from_edges(3, {{0, 1, 2.0}}, false);
  const MatrixXd sn = build_variation_operator(g, OperatorKind::sym_normalized).to_dense();
  CHECK(sn(2, 2) == 1.0);
  const MatrixXd rw = build_variation_operator(g, OperatorKind::random_walk_undirected).to_dense();
  CHECK(rw(2, 2) == 1.0);
  CHECK(rw(0, 1) == -1.0);
}
