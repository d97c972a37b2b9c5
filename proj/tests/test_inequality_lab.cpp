#include <catch2/catch_amalgamated.hpp>

#include "graphcalc/inequality_lab.hpp"

using namespace graphcalc;

TEST_CASE("dirichlet boundary solve: linear data on the lazy path") {
  const int n = 21;
  auto g = gen_grid(1, n, 1.0);
  Eigen::VectorXd data(n);
  for (int x = 0; x < n; ++x) data[x] = double(x) / (n - 1);
  auto b = ball(g, n / 2, n / 2 - 1);  // interior {2..18}
  auto sol = dirichlet_solve_boundary(g, b, VertexFunction{g, data});
  for (int x = 0; x < n; ++x)
    CHECK(sol.solution(x) == Catch::Approx(double(x) / (n - 1)).margin(1e-12));
  CHECK(sol.residual_inf <= 1e-10);
}

TEST_CASE("dirichlet boundary solve: constants and the maximum principle") {
  auto g = gen_grid(2, 9, 1.0);
  auto b = ball(g, 4 * 9 + 4, 3);
  auto c = VertexFunction::constant(g, 2.5);
  auto sol = dirichlet_solve_boundary(g, b, c);
  CHECK((sol.solution.values().array() - 2.5).abs().maxCoeff() <= 1e-12);

  Rng rng(131);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd data(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) data[x] = rng.normal();
    VertexFunction bd{g, data};
    auto s = dirichlet_solve_boundary(g, b, bd);
    std::vector<char> interior(g.vertex_count(), 0);
    for (int x : s.interior) interior[x] = 1;
    double lo = 1e300, hi = -1e300;
    for (int x = 0; x < g.vertex_count(); ++x)
      if (!interior[x]) {
        lo = std::min(lo, data[x]);
        hi = std::max(hi, data[x]);
      }
    CHECK(s.solution.values().minCoeff() >= lo - 1e-12);
    CHECK(s.solution.values().maxCoeff() <= hi + 1e-12);
    CHECK(s.residual_inf <= 1e-10);
  }
}

TEST_CASE("dirichlet rhs solve and its degenerate case") {
  auto g2 = build_graph(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  auto whole = ball(g2, 0, 1);
  VertexFunction f2{g2, Eigen::Vector2d(1.0, -1.0)};
  CHECK_THROWS_MATCHES(dirichlet_solve_rhs(g2, whole, f2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::EmptyInterior;
                       }));

  auto g = gen_grid(1, 31, 1.0);
  auto b = ball(g, 15, 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(31);
  rhs[15] = 1.0;
  rhs[13] = -0.5;
  auto sol = dirichlet_solve_rhs(g, b, VertexFunction{g, rhs});
  CHECK(sol.residual_inf <= 1e-10);
  for (int x = 0; x < 31; ++x)
    if (std::abs(x - 15) > 5) CHECK(sol.solution(x) == 0.0);
  CHECK(sol.w12_ratio > 0.0);
  CHECK(std::isfinite(sol.w12_ratio));
}

TEST_CASE("riesz constants at p = 2 are exactly 1") {
  for (const auto& g : {gen_cycle(4, 2.0), gen_grid(2, 5, 1.0), gen_dumbbell(3)}) {
    auto spec = spectral_decompose(g);
    auto rep = riesz_constant(g, spec, 2.0, RieszStrategy::Exact);
    CHECK(rep.verdict == Verdict::PASS);
    CHECK(rep.constant("C").value == 1.0);
    CHECK(rep.constant("measured_sup").value == Catch::Approx(1.0).margin(1e-10));
    auto rrep = reverse_riesz_constant(g, spec, 2.0, RieszStrategy::Exact);
    CHECK(rrep.verdict == Verdict::PASS);
  }
}

TEST_CASE("exact strategy rejects p != 2") {
  auto g = gen_cycle(4, 2.0);
  auto spec = spectral_decompose(g);
  CHECK_THROWS_MATCHES(riesz_constant(g, spec, 4.0, RieszStrategy::Exact), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::StrategyUnsupported;
                       }));
}

TEST_CASE("riesz estimates: ascent beats sampling and duality holds") {
  for (const auto& g : {gen_cycle(6, 2.0), gen_grid(2, 4, 1.0)}) {
    auto spec = spectral_decompose(g);
    AscentOpts opts;
    opts.seed = 5;
    auto sampled = riesz_constant(g, spec, 4.0, RieszStrategy::Sample, opts);
    auto ascended = riesz_constant(g, spec, 4.0, RieszStrategy::Ascent, opts);
    CHECK(sampled.verdict == Verdict::ESTIMATE);
    CHECK(ascended.constant("C_lower").value >=
          sampled.constant("C_lower").value * (1 - 1e-12));

    // (R_p) implies (RR_{p'}) with 1/p + 1/p' = 1; the estimates should
    // reproduce the ordering within tolerance
    auto rr = reverse_riesz_constant(g, spec, 4.0 / 3.0, RieszStrategy::Ascent, opts);
    CHECK(rr.constant("C_lower").value <=
          ascended.constant("C_lower").value * 1.05);
  }
}

TEST_CASE("gp_report: exact spectral values at p = 2") {
  auto c4 = gen_cycle(4, 2.0);
  auto spec = spectral_decompose(c4);
  auto rep = gp_report(c4, spec, 2.0, {1});
  // sup over lambda in {1, 1/2, 1/2, 0} of sqrt((1-l) l^2) = sqrt(1/8)
  CHECK(rep.grid.rows[0][1] == Catch::Approx(std::sqrt(1.0 / 8.0)).margin(1e-12));
  CHECK(rep.verdict == Verdict::PASS);

  auto g2 = build_graph(2, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  auto spec2 = spectral_decompose(g2);
  auto rep2 = gp_report(g2, spec2, 2.0, {1, 2, 3});
  for (const auto& row : rep2.grid.rows)
    CHECK(row[1] == Catch::Approx(0.0).margin(1e-12));  // P annihilates mean-zero

  auto grid = gen_grid(2, 6, 1.0);
  auto gspec = spectral_decompose(grid);
  std::vector<int> n_grid;
  for (int n = 1; n <= 64; n *= 2) n_grid.push_back(n);
  auto repg = gp_report(grid, gspec, 2.0, n_grid);
  CHECK(std::isfinite(repg.constant("sup_sqrt_n_norm").value));
  CHECK(repg.constant("sup_sqrt_n_norm").value > 0.0);
}

TEST_CASE("kernel bounds: two-vertex DUE ratio is exactly 1") {
  auto g = gen_grid(1, 2, 1.0);
  KernelBoundOpts opts;
  opts.margin = 0;  // side-2 grids are all boundary
  auto rep = kernel_bound_report(g, KernelBound::DUE, {1, 2, 3, 4}, {0.125}, opts);
  CHECK(rep.constant("C").value == Catch::Approx(1.0).margin(1e-12));
  CHECK(rep.verdict == Verdict::PASS);
}

TEST_CASE("kernel bounds on the lazy path: finite and stable constants") {
  auto g1 = gen_grid(1, 101, 1.0);
  auto g2 = gen_grid(1, 201, 1.0);
  std::vector<int> k_grid;
  for (int k = 4; k <= 50; k += 2) k_grid.push_back(k);
  std::vector<double> c_grid = {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};

  for (auto which : {KernelBound::DUE, KernelBound::UE, KernelBound::TIMEDERIV}) {
    auto r1 = kernel_bound_report(g1, which, k_grid, c_grid);
    auto r2 = kernel_bound_report(g2, which, k_grid, c_grid);
    CHECK(r1.verdict == Verdict::PASS);
    CHECK(r2.verdict == Verdict::PASS);
    double c1 = r1.constant("C").value, c2 = r2.constant("C").value;
    CHECK(std::isfinite(c1));
    CHECK(c2 <= 2.0 * c1);
    CHECK(c1 <= 2.0 * c2);
  }

  auto l1 = kernel_bound_report(g1, KernelBound::LUE, k_grid, c_grid);
  auto l2 = kernel_bound_report(g2, KernelBound::LUE, k_grid, c_grid);
  CHECK(l1.constant("c1").value > 0.0);
  CHECK(l2.constant("c1").value >= 0.5 * l1.constant("c1").value);
}

TEST_CASE("kernel bounds error paths") {
  auto g = gen_grid(1, 11, 1.0);
  KernelBoundOpts opts;
  opts.margin = 50;
  CHECK_THROWS_MATCHES(kernel_bound_report(g, KernelBound::DUE, {4}, {0.5}, opts), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NoInteriorVertices;
                       }));
}

TEST_CASE("gaffney: support separation kills grad P^0, constants finite") {
  auto g = gen_grid(2, 16, 1.0);
  Ball B = ball(g, 8 * 16 + 8, 2);
  auto C2 = annulus(g, B, 2);
  REQUIRE(!C2.empty());
  Rng rng(137);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(g.vertex_count());
  for (int v : C2) f[v] = rng.normal();
  auto grad = gradient(g, VertexFunction{g, f});
  for (int v : B.members) CHECK(grad(v) == 0.0);  // l = 0: support separation

  std::vector<int> l_grid;
  for (int l = 1; l <= 32; l *= 2) l_grid.push_back(l);
  std::vector<double> c_grid = {1.0 / 32, 1.0 / 16, 1.0 / 8};
  auto r20 = gaffney_report(g, {B}, 2, l_grid, c_grid, 20);
  auto r40 = gaffney_report(g, {B}, 2, l_grid, c_grid, 40);
  CHECK(std::isfinite(r20.constant("C").value));
  CHECK(r40.constant("C").value >= r20.constant("C").value - 1e-12);
  CHECK(r40.constant("C").value <= r20.constant("C").value * 1.5);

  Ball tiny = ball(g, 0, 1);
  CHECK_THROWS_MATCHES(gaffney_report(g, {tiny}, 6, l_grid, c_grid, 5), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::EmptyAnnulus;
                       }));
}

TEST_CASE("reverse Holder: linear harmonic profile has ratio 1") {
  const int n = 201;
  auto g = gen_grid(1, n, 1.0);
  Ball b = ball(g, 100, 1);
  Ball b32 = ball(g, 100, 32);
  Eigen::VectorXd data(n);
  for (int x = 0; x < n; ++x) data[x] = double(x);
  auto sol = dirichlet_solve_boundary(g, b32, VertexFunction{g, data});
  auto grad = gradient(g, sol.solution);
  Ball b16 = ball(g, 100, 16);
  double p = 2.5;
  double lhs = 0.0, rhs = 0.0;
  for (int x : b.members) lhs += std::pow(grad(x), p) * g.mass(x);
  for (int x : b16.members) rhs += sq(grad(x)) * g.mass(x);
  lhs = std::pow(lhs / volume(g, b), 1.0 / p);
  rhs = std::sqrt(rhs / volume(g, b16));
  CHECK(lhs / rhs == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("reverse Holder report on a grid") {
  auto g = gen_grid(2, 48, 1.0);
  Ball b = ball(g, 24 * 48 + 24, 1);
  auto rep = rh_ratio(g, b, 2.5, 10);
  CHECK(rep.verdict == Verdict::ESTIMATE);
  CHECK(std::isfinite(rep.constant("C_p").value));
  CHECK(rep.constant("C_p").value > 0.0);
  bool clipped = false;
  for (const auto& n : rep.notes) clipped |= n.find("clipped") != std::string::npos;
  CHECK(clipped);  // radius 32 exceeds the margin of a 48x48 grid

  auto small = gen_grid(2, 8, 1.0);
  CHECK_THROWS_MATCHES(rh_ratio(small, ball(small, 0, 1), 2.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::BallTooLarge;
                       }));
}

TEST_CASE("pi_p check: exact at p = 2, estimates otherwise") {
  auto g = gen_grid(2, 4, 1.0);
  auto spec = spectral_decompose(g);
  auto rep = pi_p_check(g, spec, 2.0, 50);
  CHECK(rep.verdict == Verdict::PASS);
  CHECK(rep.constant("C").value == 1.0);
  CHECK(rep.constant("measured_sup").value <= 1.0 + 1e-10);
  CHECK(rep.constant("idempotency_error").value <= 1e-10);
  CHECK(rep.constant("fix_df_error").value <= 1e-10);

  // exact fields are fixed for every p: the ratio is exactly 1
  EdgeSpace es(g);
  Rng rng(139);
  for (double p : {1.5, 3.0}) {
    Eigen::VectorXd v(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) v[x] = rng.normal();
    auto df = differential(es, VertexFunction{g, std::move(v)});
    auto Qdf = edge_projection(es, spec, df);
    CHECK(lp_norm_edge(Qdf, p) / lp_norm_edge(df, p) == Catch::Approx(1.0).margin(1e-9));
  }

  auto g8 = gen_grid(2, 8, 1.0);
  auto spec8 = spectral_decompose(g8);
  auto rep4 = pi_p_check(g8, spec8, 4.0, 100);
  CHECK(rep4.verdict == Verdict::ESTIMATE);
  CHECK(std::isfinite(rep4.constant("C_lower").value));
}
