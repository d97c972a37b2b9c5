#include <catch2/catch_amalgamated.hpp>

#include "graphcalc/operators.hpp"

using namespace graphcalc;

namespace {
WeightedGraph two_vertex_lazy() {
  return build_graph(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
}

VertexFunction random_fn(const WeightedGraph& g, Rng& rng) {
  Eigen::VectorXd v(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) v[x] = rng.normal();
  return {g, std::move(v)};
}
}  // namespace

TEST_CASE("apply_P on the two-vertex graph and on constants") {
  auto g = two_vertex_lazy();
  VertexFunction f{g, Eigen::Vector2d(1.0, -1.0)};
  auto pf = apply_P(g, f);
  CHECK(pf(0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(pf(1) == Catch::Approx(0.0).margin(1e-15));

  auto c = VertexFunction::constant(g, 3.25);
  auto pc = apply_P(g, c);
  CHECK(pc(0) == Catch::Approx(3.25));
  CHECK(pc(1) == Catch::Approx(3.25));
}

TEST_CASE("apply_P reproduces the circulant eigenvalue on C_4") {
  auto g = gen_cycle(4, 2.0);
  Eigen::VectorXd mode(4);
  for (int x = 0; x < 4; ++x) mode[x] = std::cos(2.0 * M_PI * x / 4.0);
  VertexFunction f{g, mode};
  auto pf = apply_P(g, f);
  for (int x = 0; x < 4; ++x) CHECK(pf(x) == Catch::Approx(0.5 * f(x)).margin(1e-15));
}

TEST_CASE("P is an L^p contraction") {
  auto g = gen_grid(2, 6, 1.0);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    auto f = random_fn(g, rng);
    auto pf = apply_P(g, f);
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
      CHECK(lp_norm(pf, p) <= lp_norm(f, p) * (1 + 1e-13));
  }
}

TEST_CASE("kernel rows: delta at k=0, averaging projection afterwards") {
  auto g = two_vertex_lazy();
  auto row0 = kernel_row(g, 0, 0);
  CHECK(row0(0) == 1.0);
  CHECK(row0(1) == 0.0);
  for (int k = 1; k <= 5; ++k) {
    auto row = kernel_row(g, 0, k);
    CHECK(row(0) == Catch::Approx(0.5));
    CHECK(row(1) == Catch::Approx(0.5));
  }

  auto grid = gen_grid(2, 5, 1.0);
  for (int k : {0, 1, 3, 9}) {
    auto row = kernel_row(grid, 7, k);
    CHECK(row.values().sum() == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gradient values") {
  auto g = two_vertex_lazy();
  CHECK(lp_norm(gradient(g, VertexFunction::constant(g, 5.0)), 1.0) == 0.0);
  VertexFunction f{g, Eigen::Vector2d(1.0, -1.0)};
  auto gf = gradient(g, f);
  CHECK(gf(0) == Catch::Approx(1.0));  // sqrt(1/2 * 1/2 * 4)
  CHECK(gf(1) == Catch::Approx(1.0));

  // lazy path, f(x) = x: p(x,x+-1) = 1/4, gradient = sqrt(1/2 * 1/2) = 1/2;
  // without self-loops p = 1/2 and the value is 1/sqrt(2)
  auto path = gen_grid(1, 9, 1.0);
  VertexFunction id{path, Eigen::VectorXd::LinSpaced(9, 0.0, 8.0)};
  CHECK(gradient(path, id)(4) == Catch::Approx(0.5));

  std::vector<WeightEntry> bare;
  for (int i = 0; i < 8; ++i) bare.push_back({i, i + 1, 1.0});
  auto bare_path = build_graph(9, bare);
  VertexFunction id2{bare_path, Eigen::VectorXd::LinSpaced(9, 0.0, 8.0)};
  CHECK(gradient(bare_path, id2)(4) == Catch::Approx(1.0 / std::sqrt(2.0)));

  // gradient ignores additive constants
  auto grid = gen_grid(2, 5, 1.0);
  Rng rng(11);
  auto h = random_fn(grid, rng);
  auto g1 = gradient(grid, h);
  auto g2 = gradient(grid, VertexFunction{grid, h.values().array() + 17.0});
  CHECK((g1.values() - g2.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("differential and codifferential are adjoint; I-P = -delta d") {
  auto g = two_vertex_lazy();
  EdgeSpace es(g);
  VertexFunction f{g, Eigen::Vector2d(1.0, -1.0)};
  auto df = differential(es, f);
  CHECK(df.at(0, 1) == -2.0);
  CHECK(lp_norm_edge(df, 2.0) == Catch::Approx(2.0));
  CHECK(lp_norm_edge(df, 2.0) == Catch::Approx(lp_norm(gradient(g, f), 2.0)));

  CHECK(lp_norm_edge(differential(es, VertexFunction::constant(g, 2.0)), 1.0) == 0.0);

  auto grid = gen_grid(2, 5, 1.0);
  EdgeSpace ges(grid);
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    auto u = random_fn(grid, rng);
    auto G = differential(ges, random_fn(grid, rng));
    // <du, G>_E = -<u, delta G>_Gamma
    CHECK(inner_edge(differential(ges, u), G) ==
          Catch::Approx(-inner_m(u, codifferential(ges, G))).margin(1e-12));
    // (I-P)u = -delta(du)
    Eigen::VectorXd lhs = u.values() - apply_P(grid, u).values();
    Eigen::VectorXd rhs = -codifferential(ges, differential(ges, u)).values();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    // ||delta F||_2 <= ||F||_2
    CHECK(lp_norm(codifferential(ges, G), 2.0) <= lp_norm_edge(G, 2.0) * (1 + 1e-12));
  }
}

TEST_CASE("I-P = -delta d entrywise as matrices") {
  for (const auto& g : {two_vertex_lazy(), gen_cycle(4, 2.0), gen_grid(2, 4, 1.0)}) {
    EdgeSpace es(g);
    const int n = g.vertex_count();
    Eigen::MatrixXd P = p_matrix(g);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd ej = Eigen::VectorXd::Zero(n);
      ej[j] = 1.0;
      VertexFunction e{g, ej};
      Eigen::VectorXd col = -codifferential(es, differential(es, e)).values();
      Eigen::VectorXd expect = ej - P.col(j);
      CHECK((col - expect).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("||df||_p and ||nabla f||_p are comparable with alpha-constants") {
  auto g = gen_grid(2, 6, 1.0);
  EdgeSpace es(g);
  double alpha = delta_alpha(g).alpha;
  Rng rng(17);
  const double inf = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    auto f = random_fn(g, rng);
    for (double p : {1.0, 2.0, 4.0, inf}) {
      double ratio = lp_norm_edge(differential(es, f), p) / lp_norm(gradient(g, f), p);
      double lo, hi;
      if (std::isinf(p)) {
        lo = std::pow(2.0, -0.5);
        hi = 1.0 / std::sqrt(2.0 * alpha);
      } else if (p >= 2.0) {
        lo = std::pow(2.0, 0.5 - 1.0 / p);
        hi = std::pow(2.0 / alpha, 0.5 - 1.0 / p);
      } else {
        lo = std::sqrt(alpha / 2.0);
        hi = 1.0 / std::sqrt(2.0 * alpha);
      }
      CHECK(ratio >= lo * (1 - 1e-12));
      CHECK(ratio <= hi * (1 + 1e-12));
    }
  }
}

TEST_CASE("maximal function: constants, point masses, domination") {
  auto g = gen_grid(1, 21, 1.0);
  auto c = VertexFunction::constant(g, -2.5);
  auto Mc = maximal_function(g, c);
  for (int x = 0; x < 21; ++x) CHECK(Mc(x) == Catch::Approx(2.5));

  Eigen::VectorXd ind = Eigen::VectorXd::Zero(21);
  ind[10] = 1.0;
  auto Mi = maximal_function(g, VertexFunction{g, ind});
  CHECK(Mi(10) == Catch::Approx(1.0));  // radius-0 ball at the vertex itself

  Rng rng(23);
  auto grid = gen_grid(2, 5, 1.0);
  for (int t = 0; t < 100; ++t) {
    auto f = random_fn(grid, rng);
    auto Mf = maximal_function(grid, f);
    for (int x = 0; x < grid.vertex_count(); ++x)
      CHECK(Mf(x) >= std::abs(f(x)) - 1e-13);
  }
}
