// Whitney covers of an open set Omega, subordinate partitions of unity, and
// the Calderon-Zygmund decomposition f = g + sum b_i of Sobolev functions,
// with verifiers for every property the decomposition promises.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>

#include <vector>

#include <json.hpp>

#include "graphcalc/common.hpp"
#include "graphcalc/functions.hpp"
#include "graphcalc/graph.hpp"
#include "graphcalc/operators.hpp"
#include "graphcalc/report.hpp"

namespace graphcalc {

struct WhitneyBall {
  int center = 0;
  int dist_to_F = 0;          // d(center, complement of Omega), >= 1
  Ball core;                  // radius floor(d/2)
  Ball inflated;              // radius floor(C1 d/2); these cover Omega
  Ball outer;                 // radius floor(C2 d/2); always meets F
  double rational_radius() const { return 0.5 * dist_to_F; }
  // dyadic exponent j with 2^j <= d/2 < 2^{j+1}; j = -1 when d = 1
  int dyadic_exponent() const {
    return static_cast<int>(std::floor(std::log2(0.5 * dist_to_F) + 1e-12));
  }
};

struct WhitneyCover {
  std::vector<WhitneyBall> balls;
  double C1 = 2.0;
  double C2 = 8.0;
  int overlap = 0;  // N_cover = max_x #{i : x in B_i}
};

// Greedy cover: repeatedly pick the uncovered vertex of Omega with maximal
// d(., F) (ties by index), adopt it as a center, and mark its inflated ball
// covered. With C1 >= 2 the greedy order makes the core balls disjoint.
inline WhitneyCover whitney_cover(const WeightedGraph& g, const std::vector<int>& omega,
                                  double C1 = 2.0, double C2 = -1.0) {
  require(!omega.empty(), ErrorCode::EmptyOmega, "Omega is empty");
  require(static_cast<int>(omega.size()) < g.vertex_count(), ErrorCode::OmegaIsEverything,
          "Omega has empty complement");
  require(C1 >= 1.0, ErrorCode::BadInput, "C1 must be >= 1");
  if (C2 < 0) C2 = 4.0 * C1;
  require(C2 >= C1, ErrorCode::BadInput, "C2 must be >= C1");

  std::vector<char> in_omega(g.vertex_count(), 0);
  for (int x : omega) {
    g.check_vertex(x);
    in_omega[x] = 1;
  }
  std::vector<int> complement;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!in_omega[v]) complement.push_back(v);
  auto dF = bfs_distances_multi(g, complement);

  std::vector<int> order(omega.begin(), omega.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dF[a] != dF[b]) return dF[a] > dF[b];
    return a < b;
  });

  WhitneyCover cover;
  cover.C1 = C1;
  cover.C2 = C2;
  std::vector<char> covered(g.vertex_count(), 0);
  for (int x : order) {
    if (covered[x]) continue;
    WhitneyBall wb;
    wb.center = x;
    wb.dist_to_F = dF[x];
    int d = dF[x];
    wb.core = ball(g, x, d / 2);
    wb.inflated = ball(g, x, static_cast<int>(std::floor(C1 * d / 2.0)));
    wb.outer = ball(g, x, static_cast<int>(std::floor(C2 * d / 2.0)));
    for (int v : wb.inflated.members) covered[v] = 1;
    cover.balls.push_back(std::move(wb));
  }

  std::vector<int> count(g.vertex_count(), 0);
  for (const auto& wb : cover.balls)
    for (int v : wb.inflated.members) ++count[v];
  cover.overlap = *std::max_element(count.begin(), count.end());
  return cover;
}

struct WhitneyProperties {
  bool cores_disjoint = false;
  bool inflated_cover_omega = false;
  bool radius_matches_distance = false;  // |2 r_core - d(x_i,F)| <= 1
  bool outer_meets_F = false;
  int overlap = 0;
};

inline WhitneyProperties whitney_properties(const WeightedGraph& g, const WhitneyCover& cover,
                                            const std::vector<int>& omega) {
  WhitneyProperties p;
  std::vector<char> in_omega(g.vertex_count(), 0);
  for (int x : omega) in_omega[x] = 1;

  std::vector<int> core_owner(g.vertex_count(), -1);
  p.cores_disjoint = true;
  for (size_t i = 0; i < cover.balls.size(); ++i)
    for (int v : cover.balls[i].core.members) {
      if (core_owner[v] >= 0) p.cores_disjoint = false;
      core_owner[v] = static_cast<int>(i);
    }

  std::vector<int> count(g.vertex_count(), 0);
  for (const auto& wb : cover.balls)
    for (int v : wb.inflated.members) ++count[v];
  p.inflated_cover_omega = std::all_of(omega.begin(), omega.end(),
                                       [&](int x) { return count[x] > 0; });
  p.overlap = *std::max_element(count.begin(), count.end());

  p.radius_matches_distance = true;
  p.outer_meets_F = true;
  for (const auto& wb : cover.balls) {
    if (std::abs(2 * wb.core.radius - wb.dist_to_F) > 1) p.radius_matches_distance = false;
    bool meets = false;
    for (int v : wb.outer.members) meets |= !in_omega[v];
    p.outer_meets_F &= meets;
  }
  return p;
}

// Partition of unity subordinate to the inflated balls. The psi profile is
// 1 on [0,1], 0 on [(1+C1)/2, inf), linear between; the argument is scaled
// so psi vanishes exactly off the closed inflated ball and stays positive on
// all of it (integer radii leave no room for the continuum scaling).
inline std::vector<VertexFunction> partition_of_unity(const WeightedGraph& g,
                                                      const WhitneyCover& cover,
                                                      const std::vector<int>& omega) {
  const double edge = 0.5 * (1.0 + cover.C1);
  auto psi = [&](double t) {
    if (t <= 1.0) return 1.0;
    if (t >= edge) return 0.0;
    return (edge - t) / (edge - 1.0);
  };

  std::vector<char> in_omega(g.vertex_count(), 0);
  for (int x : omega) in_omega[x] = 1;

  const int nb = static_cast<int>(cover.balls.size());
  std::vector<VertexFunction> chi;
  chi.reserve(nb);
  std::vector<Eigen::VectorXd> bump(nb);
  Eigen::VectorXd denom = Eigen::VectorXd::Zero(g.vertex_count());
  for (int i = 0; i < nb; ++i) {
    const auto& wb = cover.balls[i];
    bump[i] = Eigen::VectorXd::Zero(g.vertex_count());
    auto dist = bfs_distances(g, wb.center, wb.inflated.radius);
    for (int v : wb.inflated.members) {
      double t = edge * dist[v] / (wb.inflated.radius + 1.0);
      bump[i][v] = psi(t);
    }
    denom += bump[i];
  }
  for (int x : omega)
    require(denom[x] > 0.0, ErrorCode::CoverDoesNotCover,
            "partition denominator vanishes at vertex " + std::to_string(x));
  for (int i = 0; i < nb; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.vertex_count());
    for (int x : cover.balls[i].inflated.members)
      if (in_omega[x] && bump[i][x] != 0.0) v[x] = bump[i][x] / denom[x];
    chi.emplace_back(g, std::move(v));
  }
  return chi;
}

struct CZDecomposition {
  double alpha = 0.0;
  double q = 1.0;
  std::vector<int> omega;             // sorted; empty means the trivial case
  WhitneyCover cover;
  std::vector<VertexFunction> chi;
  std::vector<VertexFunction> bad_parts;  // b_i = (f - f_{B_i}) chi_i
  VertexFunction good;                    // g = f - sum b_i
  std::map<int, VertexFunction> beta;     // beta_j = sum_{r_i ~ 2^j} b_i / 2^j
  VertexFunction source;                  // f
  VertexFunction maximal_grad_q;          // M(|grad f|^q)
};

inline double ball_mean(const WeightedGraph& g, const VertexFunction& f, const Ball& b) {
  double num = 0.0, den = 0.0;
  for (int x : b.members) {
    num += f(x) * g.mass(x);
    den += g.mass(x);
  }
  return num / den;
}

// Omega = {x : M(|grad f|^q)(x) > alpha^q}; if Omega is empty the
// decomposition is trivial (g = f).
inline CZDecomposition cz_decompose(const WeightedGraph& g, const VertexFunction& f,
                                    double alpha, double q, double C1 = 2.0,
                                    double C2 = -1.0) {
  f.check_graph(g);
  require(alpha > 0.0, ErrorCode::BadInput, "alpha must be positive");
  require(q >= 1.0, ErrorCode::BadInput, "q must be >= 1");

  CZDecomposition dec;
  dec.alpha = alpha;
  dec.q = q;
  dec.source = f;

  auto grad = gradient(g, f);
  Eigen::VectorXd gq(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) gq[x] = std::pow(grad(x), q);
  dec.maximal_grad_q = maximal_function(g, VertexFunction{g, std::move(gq)});

  const double level = std::pow(alpha, q);
  for (int x = 0; x < g.vertex_count(); ++x)
    if (dec.maximal_grad_q(x) > level) dec.omega.push_back(x);

  if (dec.omega.empty()) {
    dec.good = f;
    return dec;
  }
  require(static_cast<int>(dec.omega.size()) < g.vertex_count(),
          ErrorCode::OmegaIsEverything,
          "alpha is below the minimum of M(|grad f|^q)^{1/q}");

  dec.cover = whitney_cover(g, dec.omega, C1, C2);
  dec.chi = partition_of_unity(g, dec.cover, dec.omega);

  Eigen::VectorXd sum_b = Eigen::VectorXd::Zero(g.vertex_count());
  for (size_t i = 0; i < dec.cover.balls.size(); ++i) {
    double fB = ball_mean(g, f, dec.cover.balls[i].inflated);
    Eigen::VectorXd bi = Eigen::VectorXd::Zero(g.vertex_count());
    for (int x : dec.cover.balls[i].inflated.members)
      if (dec.chi[i](x) != 0.0) bi[x] = (f(x) - fB) * dec.chi[i](x);
    sum_b += bi;
    dec.bad_parts.emplace_back(g, std::move(bi));
  }
  dec.good = VertexFunction{g, f.values() - sum_b};

  for (size_t i = 0; i < dec.cover.balls.size(); ++i) {
    int j = dec.cover.balls[i].dyadic_exponent();
    auto [it, inserted] = dec.beta.try_emplace(j, VertexFunction::zero(g));
    it->second.values() += dec.bad_parts[i].values() / std::pow(2.0, j);
  }
  return dec;
}

// The five empirical constants of the decomposition: each is the smallest C
// making the corresponding inequality true for this instance.
inline InequalityReport verify_cz(const WeightedGraph& g, const CZDecomposition& dec,
                                  double p) {
  require(p >= dec.q, ErrorCode::BadInput, "verify_cz needs p >= q");
  InequalityReport rep;
  rep.condition = "CZ";
  rep.params = {{"alpha", dec.alpha}, {"q", dec.q}, {"p", p}};
  const auto& f = dec.source;
  const double inf = std::numeric_limits<double>::infinity();

  // reconstruction f = g + sum b_i
  Eigen::VectorXd recon = dec.good.values();
  for (const auto& b : dec.bad_parts) recon += b.values();
  double recon_err = (recon - f.values()).cwiseAbs().maxCoeff();
  rep.add_constant("reconstruction_error", recon_err, Method::Enumeration,
                   "max_x |f - g - sum b_i|");

  double c_eg = lp_norm(gradient(g, dec.good), inf) / dec.alpha;
  rep.add_constant("C_eg", c_eg, Method::Enumeration, "||grad g||_inf / alpha");

  double grad_p = 0.0;
  auto grad_f = gradient(g, f);
  for (int x = 0; x < g.vertex_count(); ++x)
    grad_p += std::pow(grad_f(x), p) * g.mass(x);

  if (dec.omega.empty()) {
    rep.add_constant("C_eb", 0.0, Method::Enumeration, "no bad parts (Omega empty)");
    rep.add_constant("C_eB", 0.0, Method::Enumeration, "no balls (Omega empty)");
    rep.add_constant("N_overlap", 0.0, Method::Enumeration, "no balls (Omega empty)");
    rep.add_constant("C_useful", 0.0, Method::Enumeration, "no bad parts (Omega empty)");
    rep.add_note("Omega empty: trivial decomposition g = f");
    rep.verdict = recon_err <= 1e-12 ? Verdict::PASS : Verdict::FAIL;
    return rep;
  }

  bool support_ok = true;
  double c_eb = 0.0, c_useful = 0.0, sum_VB = 0.0;
  rep.grid.columns = {"ball", "center", "dist_to_F", "core_radius", "inflated_radius",
                      "V_B", "C_eb_ball", "C_useful_ball"};
  for (size_t i = 0; i < dec.bad_parts.size(); ++i) {
    const auto& wb = dec.cover.balls[i];
    const auto& bi = dec.bad_parts[i];
    std::vector<char> inB(g.vertex_count(), 0);
    for (int x : wb.inflated.members) inB[x] = 1;
    for (int x = 0; x < g.vertex_count(); ++x)
      if (!inB[x] && bi(x) != 0.0) support_ok = false;

    double VB = volume(g, wb.inflated);
    sum_VB += VB;
    auto grad_b = gradient(g, bi);
    double eb = 0.0, bq = 0.0;
    for (int x : wb.inflated.members) {
      eb += std::pow(grad_b(x), dec.q) * g.mass(x);
      bq += std::pow(std::abs(bi(x)), dec.q) * g.mass(x);
    }
    double c_eb_ball = eb / (std::pow(dec.alpha, dec.q) * VB);
    double c_useful_ball = std::pow(bq, 1.0 / dec.q) /
                           (std::pow(VB, 1.0 / dec.q) * dec.alpha * wb.rational_radius());
    c_eb = std::max(c_eb, c_eb_ball);
    c_useful = std::max(c_useful, c_useful_ball);
    rep.grid.add_row({double(i), double(wb.center), double(wb.dist_to_F),
                      double(wb.core.radius), double(wb.inflated.radius), VB, c_eb_ball,
                      c_useful_ball});
  }
  double c_eB = sum_VB * std::pow(dec.alpha, p) / grad_p;

  rep.add_constant("C_eb", c_eb, Method::Enumeration,
                   "max_i sum_{B_i} |grad b_i|^q m / (alpha^q V(B_i))");
  rep.add_constant("C_eB", c_eB, Method::Enumeration,
                   "sum_i V(B_i) alpha^p / sum |grad f|^p m");
  rep.add_constant("N_overlap", double(dec.cover.overlap), Method::Enumeration,
                   "max_x #{i : x in B_i}");
  rep.add_constant("C_useful", c_useful, Method::Enumeration,
                   "max_i V(B_i)^{-1/q} ||b_i||_q / (alpha r_i)");

  // partition and regrouping identities
  auto props = whitney_properties(g, dec.cover, dec.omega);
  Eigen::VectorXd chi_sum = Eigen::VectorXd::Zero(g.vertex_count());
  double chi_bounds_ok = 1.0;
  for (const auto& c : dec.chi) {
    chi_sum += c.values();
    if (c.values().minCoeff() < -1e-15 || c.values().maxCoeff() > 1.0 + 1e-12)
      chi_bounds_ok = 0.0;
  }
  double chi_err = 0.0;
  std::vector<char> in_omega(g.vertex_count(), 0);
  for (int x : dec.omega) in_omega[x] = 1;
  for (int x = 0; x < g.vertex_count(); ++x)
    chi_err = std::max(chi_err,
                       std::abs(chi_sum[x] - (in_omega[x] ? 1.0 : 0.0)));

  Eigen::VectorXd beta_sum = Eigen::VectorXd::Zero(g.vertex_count());
  for (const auto& [j, bj] : dec.beta) beta_sum += std::pow(2.0, j) * bj.values();
  Eigen::VectorXd b_total = Eigen::VectorXd::Zero(g.vertex_count());
  for (const auto& b : dec.bad_parts) b_total += b.values();
  double beta_err = (beta_sum - b_total).cwiseAbs().maxCoeff();

  bool pass = recon_err <= 1e-12 && support_ok && chi_err <= 1e-12 && beta_err <= 1e-12 &&
              chi_bounds_ok == 1.0 && props.cores_disjoint && props.inflated_cover_omega &&
              props.radius_matches_distance && props.outer_meets_F;
  rep.add_constant("chi_partition_error", chi_err, Method::Enumeration,
                   "max_x |sum chi_i - 1_Omega|");
  rep.add_constant("beta_regroup_error", beta_err, Method::Enumeration,
                   "max_x |sum_j 2^j beta_j - sum_i b_i|");
  if (!support_ok) rep.add_note("support violation: some b_i is nonzero outside B_i");
  if (!props.cores_disjoint) rep.add_note("core balls overlap");
  if (!props.inflated_cover_omega) rep.add_note("inflated balls do not cover Omega");
  if (!props.outer_meets_F) rep.add_note("some outer ball misses F");
  rep.verdict = pass ? Verdict::PASS : Verdict::FAIL;
  return rep;
}

// sup_i r_i ||grad chi_i||_inf, the Lipschitz constant of the partition
inline double partition_lipschitz(const WeightedGraph& g, const CZDecomposition& dec) {
  double sup = 0.0;
  for (size_t i = 0; i < dec.chi.size(); ++i) {
    double gmax = lp_norm(gradient(g, dec.chi[i]), std::numeric_limits<double>::infinity());
    sup = std::max(sup, dec.cover.balls[i].rational_radius() * gmax);
  }
  return sup;
}

inline nlohmann::json cz_to_json(const WeightedGraph& g, const CZDecomposition& dec) {
  nlohmann::json j;
  j["alpha"] = dec.alpha;
  j["q"] = dec.q;
  j["omega_size"] = static_cast<int>(dec.omega.size());
  j["overlap"] = dec.cover.overlap;
  nlohmann::json balls = nlohmann::json::array();
  for (size_t i = 0; i < dec.cover.balls.size(); ++i) {
    const auto& wb = dec.cover.balls[i];
    nlohmann::json bj;
    bj["center"] = wb.center;
    bj["dist_to_F"] = wb.dist_to_F;
    bj["rational_radius"] = wb.rational_radius();
    bj["core_radius"] = wb.core.radius;
    bj["inflated_radius"] = wb.inflated.radius;
    bj["outer_radius"] = wb.outer.radius;
    double VB = volume(g, wb.inflated);
    bj["volume"] = VB;
    bj["b_l2"] = lp_norm(dec.bad_parts[i], 2.0);
    // per-ball constants of the bad-part bounds
    auto grad_b = gradient(g, dec.bad_parts[i]);
    double eb = 0.0, bq = 0.0;
    for (int x : wb.inflated.members) {
      eb += std::pow(grad_b(x), dec.q) * g.mass(x);
      bq += std::pow(std::abs(dec.bad_parts[i](x)), dec.q) * g.mass(x);
    }
    bj["C_eb_ball"] = eb / (std::pow(dec.alpha, dec.q) * VB);
    bj["C_useful_ball"] = std::pow(bq, 1.0 / dec.q) /
                          (std::pow(VB, 1.0 / dec.q) * dec.alpha * wb.rational_radius());
    balls.push_back(bj);
  }
  j["balls"] = balls;
  j["good_grad_inf"] = lp_norm(gradient(g, dec.good), std::numeric_limits<double>::infinity());
  return j;
}

}  // namespace graphcalc
