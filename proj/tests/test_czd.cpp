#include <catch2/catch_amalgamated.hpp>

#include "graphcalc/czd.hpp"

using namespace graphcalc;

namespace {
std::vector<int> range_set(int lo, int hi) {
  std::vector<int> v;
  for (int x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

VertexFunction random_fn(const WeightedGraph& g, Rng& rng) {
  Eigen::VectorXd v(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) v[x] = rng.normal();
  return {g, std::move(v)};
}
}  // namespace

TEST_CASE("whitney cover on the path band") {
  auto g = gen_grid(1, 101, 1.0);
  auto omega = range_set(40, 60);
  auto cover = whitney_cover(g, omega);
  REQUIRE(!cover.balls.empty());
  // deepest vertex is 50 with d(50, F) = 11 and core radius 5
  CHECK(cover.balls[0].center == 50);
  CHECK(cover.balls[0].dist_to_F == 11);
  CHECK(cover.balls[0].core.radius == 5);
  auto props = whitney_properties(g, cover, omega);
  CHECK(props.cores_disjoint);
  CHECK(props.inflated_cover_omega);
  CHECK(props.radius_matches_distance);
  CHECK(props.outer_meets_F);
}

TEST_CASE("whitney cover of a single vertex") {
  auto g = gen_grid(1, 21, 1.0);
  auto cover = whitney_cover(g, {10});
  REQUIRE(cover.balls.size() == 1);
  CHECK(cover.balls[0].center == 10);
  CHECK(cover.balls[0].dist_to_F == 1);
  CHECK(cover.balls[0].core.radius == 0);
  CHECK(whitney_properties(g, cover, {10}).outer_meets_F);  // outer radius floor(8/2)=4
}

TEST_CASE("whitney cover errors") {
  auto g = gen_grid(1, 21, 1.0);
  CHECK_THROWS_MATCHES(whitney_cover(g, {}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::EmptyOmega;
                       }));
  CHECK_THROWS_MATCHES(whitney_cover(g, range_set(0, 20)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::OmegaIsEverything;
                       }));
}

TEST_CASE("whitney properties hold for 50 random Omega on a 16x16 grid") {
  auto g = gen_grid(2, 16, 1.0);
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> omega;
    // a union of random balls, clipped away from the full vertex set
    for (int b = 0; b < 3; ++b) {
      int c = rng.uniform_int(0, g.vertex_count() - 1);
      for (int v : ball(g, c, rng.uniform_int(1, 4)).members) omega.push_back(v);
    }
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    if (static_cast<int>(omega.size()) >= g.vertex_count()) continue;
    auto cover = whitney_cover(g, omega);
    auto props = whitney_properties(g, cover, omega);
    CHECK(props.cores_disjoint);
    CHECK(props.inflated_cover_omega);
    CHECK(props.radius_matches_distance);
    CHECK(props.outer_meets_F);
    CHECK(props.overlap == cover.overlap);
  }
}

TEST_CASE("partition of unity: single ball gives the indicator") {
  auto g = gen_grid(1, 101, 1.0);
  auto omega = range_set(40, 60);
  auto cover = whitney_cover(g, omega);
  REQUIRE(cover.balls.size() == 1);
  auto chi = partition_of_unity(g, cover, omega);
  for (int x = 0; x < g.vertex_count(); ++x) {
    bool in = x >= 40 && x <= 60;
    CHECK(chi[0](x) == (in ? 1.0 : 0.0));
  }
}

TEST_CASE("partition of unity: two overlapping balls sum to one") {
  auto g = gen_grid(1, 101, 1.0);
  auto omega = range_set(40, 60);
  WhitneyCover cover;
  cover.C1 = 2.0;
  cover.C2 = 8.0;
  for (int center : {45, 55}) {
    WhitneyBall wb;
    wb.center = center;
    wb.dist_to_F = 6;
    wb.core = ball(g, center, 3);
    wb.inflated = ball(g, center, 6);
    wb.outer = ball(g, center, 24);
    cover.balls.push_back(wb);
  }
  auto chi = partition_of_unity(g, cover, omega);
  for (int x = 40; x <= 60; ++x)
    CHECK(chi[0](x) + chi[1](x) == Catch::Approx(1.0).margin(1e-14));
  for (size_t i = 0; i < chi.size(); ++i) {
    CHECK(chi[i].values().minCoeff() >= 0.0);
    CHECK(chi[i].values().maxCoeff() <= 1.0 + 1e-15);
  }
  // supports stay inside the inflated balls
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (std::abs(x - 45) > 6) CHECK(chi[0](x) == 0.0);
    if (std::abs(x - 55) > 6) CHECK(chi[1](x) == 0.0);
  }
}

TEST_CASE("cz_decompose: trivial cases") {
  auto g = gen_grid(2, 8, 1.0);
  Rng rng(73);
  auto f = random_fn(g, rng);
  auto grad = gradient(g, f);
  Eigen::VectorXd gq = grad.values();
  auto M = maximal_function(g, VertexFunction{g, gq});
  double big_alpha = M.values().maxCoeff() * 1.01;

  auto dec = cz_decompose(g, f, big_alpha, 1.0);
  CHECK(dec.omega.empty());
  CHECK(dec.bad_parts.empty());
  CHECK((dec.good.values() - f.values()).cwiseAbs().maxCoeff() == 0.0);

  auto c = VertexFunction::constant(g, 4.0);
  auto dec_c = cz_decompose(g, c, 1.0, 2.0);
  CHECK(dec_c.omega.empty());

  double tiny_alpha = M.values().minCoeff() * 0.5;
  if (tiny_alpha > 0)
    CHECK_THROWS_MATCHES(cz_decompose(g, f, tiny_alpha, 1.0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::OmegaIsEverything;
                         }));
}

TEST_CASE("cz_decompose on a ramp: band Omega and exact reconstruction") {
  auto g = gen_grid(1, 101, 1.0);
  Eigen::VectorXd v(101);
  for (int x = 0; x <= 100; ++x) v[x] = std::clamp(x, 40, 60);
  VertexFunction f{g, std::move(v)};

  // gradient is 1/2 on the ramp interior and 0 far away; a level slightly
  // below 1/2 carves out a band around the ramp
  auto dec = cz_decompose(g, f, 0.45, 1.0);
  CHECK(!dec.omega.empty());
  CHECK(static_cast<int>(dec.omega.size()) < g.vertex_count());

  Eigen::VectorXd recon = dec.good.values();
  for (const auto& b : dec.bad_parts) recon += b.values();
  CHECK((recon - f.values()).cwiseAbs().maxCoeff() <= 1e-12);

  auto rep = verify_cz(g, dec, 1.0);
  CHECK(rep.verdict == Verdict::PASS);
  CHECK(rep.constant("reconstruction_error").value <= 1e-12);
}

TEST_CASE("verify_cz: trivial instance bounds ||grad f||_inf / alpha by 1") {
  auto g = gen_grid(2, 8, 1.0);
  Rng rng(79);
  auto f = random_fn(g, rng);
  auto grad = gradient(g, f);
  auto M = maximal_function(g, VertexFunction{g, grad.values()});
  double alpha = M.values().maxCoeff() * 1.0001;
  auto dec = cz_decompose(g, f, alpha, 1.0);
  REQUIRE(dec.omega.empty());
  auto rep = verify_cz(g, dec, 2.0);
  // M >= |grad f| pointwise (radius-0 balls), so alpha > max M >= ||grad f||_inf
  CHECK(rep.constant("C_eg").value <= 1.0);
  CHECK(rep.verdict == Verdict::PASS);
}

TEST_CASE("verify_cz on a 16x16 grid: all five constants finite") {
  auto g = gen_grid(2, 16, 1.0);
  Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_fn(g, rng);
    double q = trial % 2 == 0 ? 1.0 : 2.0;
    auto grad = gradient(g, f);
    Eigen::VectorXd gq(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) gq[x] = std::pow(grad(x), q);
    auto M = maximal_function(g, VertexFunction{g, std::move(gq)});
    // median level of M^{1/q}
    std::vector<double> vals(M.values().data(), M.values().data() + g.vertex_count());
    std::sort(vals.begin(), vals.end());
    double alpha = std::pow(vals[vals.size() / 2], 1.0 / q);

    auto dec = cz_decompose(g, f, alpha, q);
    auto rep = verify_cz(g, dec, std::max(q, 2.0));
    CHECK(rep.verdict == Verdict::PASS);
    for (const auto& name : {"C_eg", "C_eb", "C_eB", "N_overlap", "C_useful"}) {
      CHECK(std::isfinite(rep.constant(name).value));
    }
    CHECK(rep.constant("reconstruction_error").value <= 1e-12);
    CHECK(rep.constant("beta_regroup_error").value <= 1e-12);
    CHECK(partition_lipschitz(g, dec) < 10.0);
  }
}

TEST_CASE("scale regrouping identity and dyadic exponents") {
  auto g = gen_grid(2, 12, 1.0);
  Rng rng(89);
  auto f = random_fn(g, rng);
  auto grad = gradient(g, f);
  auto M = maximal_function(g, VertexFunction{g, grad.values()});
  std::vector<double> vals(M.values().data(), M.values().data() + g.vertex_count());
  std::sort(vals.begin(), vals.end());
  auto dec = cz_decompose(g, f, vals[vals.size() * 7 / 10], 1.0);
  if (!dec.omega.empty()) {
    for (const auto& wb : dec.cover.balls) {
      int j = wb.dyadic_exponent();
      CHECK(std::pow(2.0, j) <= wb.rational_radius() * (1 + 1e-12));
      CHECK(wb.rational_radius() < std::pow(2.0, j + 1) * (1 + 1e-12));
    }
    Eigen::VectorXd beta_sum = Eigen::VectorXd::Zero(g.vertex_count());
    for (const auto& [j, bj] : dec.beta) beta_sum += std::pow(2.0, j) * bj.values();
    Eigen::VectorXd b_total = Eigen::VectorXd::Zero(g.vertex_count());
    for (const auto& b : dec.bad_parts) b_total += b.values();
    CHECK((beta_sum - b_total).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
