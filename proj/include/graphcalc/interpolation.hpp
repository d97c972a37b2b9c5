// Rearrangements f*, f**, the K-functional of the homogeneous Sobolev couple
// (W^{1,q}, W^{1,inf}) with its Calderon-Zygmund-seeded convex descent, and
// scaled Poincare constants on balls.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include <string>
#include <vector>

#include "graphcalc/common.hpp"
#include "graphcalc/czd.hpp"
#include "graphcalc/functions.hpp"
#include "graphcalc/graph.hpp"
#include "graphcalc/operators.hpp"
#include "graphcalc/report.hpp"

namespace graphcalc {

// Nonincreasing right-continuous step profile of |f| on the mass line.
struct Rearrangement {
  std::vector<double> breakpoints;  // t_0 = 0 < t_1 < ... < t_n = m(Gamma)
  std::vector<double> levels;       // levels[k] on [t_k, t_{k+1})
  double total_mass = 0.0;

  double star(double t) const {
    require(t > 0.0 && t <= total_mass + 1e-12, ErrorCode::TOutOfRange,
            "t must lie in (0, m(Gamma)]");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    size_t k = static_cast<size_t>(it - breakpoints.begin());
    return levels[std::min(k - 1, levels.size() - 1)];
  }

  double integral_star(double t) const {  // int_0^t f*(s) ds, exact
    require(t > 0.0 && t <= total_mass + 1e-12, ErrorCode::TOutOfRange,
            "t must lie in (0, m(Gamma)]");
    double acc = 0.0;
    for (size_t k = 0; k < levels.size(); ++k) {
      double lo = breakpoints[k], hi = breakpoints[k + 1];
      if (t <= hi) return acc + levels[k] * (t - lo);
      acc += levels[k] * (hi - lo);
    }
    return acc;
  }
};

inline Rearrangement rearrange(const WeightedGraph& g, const VertexFunction& f) {
  f.check_graph(g);
  std::vector<std::pair<double, double>> pairs;  // (|f|, mass)
  pairs.reserve(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) pairs.push_back({std::abs(f(x)), g.mass(x)});
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  Rearrangement r;
  r.breakpoints.push_back(0.0);
  double t = 0.0;
  for (const auto& [v, m] : pairs) {
    if (!r.levels.empty() && r.levels.back() == v) {
      t += m;
      r.breakpoints.back() = t;
      continue;
    }
    r.levels.push_back(v);
    t += m;
    r.breakpoints.push_back(t);
  }
  r.total_mass = t;
  return r;
}

inline double double_star(const Rearrangement& r, double t) {
  return r.integral_star(t) / t;
}

// ---------------------------------------------------------------------------
// K(f, t^{1/q}; W^{1,q}, W^{1,inf}) = inf_{f=h+g} ||grad h||_q + t^{1/q} ||grad g||_inf,
// approximated from above: trivial decompositions, the CZ decomposition at
// alpha(t) = (M(|grad f|^q))^{* 1/q}(t), then projected subgradient descent
// on the convex objective in g.

struct KFunctionalOpts {
  int descent_iters = 500;
  std::uint64_t seed = 1;
  bool run_descent = true;
};

struct KFunctionalResult {
  double t = 0.0;
  double q = 1.0;
  double upper = 0.0;          // best decomposition value found
  VertexFunction witness_h;    // h in W^{1,q}
  VertexFunction witness_g;    // g_inf in W^{1,inf}
  double reference = 0.0;      // t^{1/q} (|grad f|^{q}**)^{1/q}(t)
  double ratio = 0.0;          // upper / reference
  std::string best_start;      // which candidate seeded the best value
};

namespace detail {

// d/dh of ||grad h||_q (subgradient at the nonsmooth zeros when eps = 0;
// with eps > 0 the smoothed upper surrogate (sum m (S+eps^2)^{q/2})^{1/q}
// and its gradient). Shared by the K-functional descent.
inline double grad_lq_of_gradient(const WeightedGraph& g, const Eigen::VectorXd& h, double q,
                                  Eigen::VectorXd& grad_out, double eps = 0.0) {
  const int n = g.vertex_count();
  Eigen::VectorXd S(n);
  for (int x = 0; x < n; ++x) {
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double s = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) s += ws[i] * sq(h[nbr[i]] - h[x]);
    S[x] = 0.5 * s / g.mass(x) + sq(eps);
  }
  double A_q = 0.0;
  for (int x = 0; x < n; ++x) A_q += std::pow(S[x], 0.5 * q) * g.mass(x);
  double A = std::pow(A_q, 1.0 / q);
  grad_out.setZero(n);
  if (A == 0.0) return 0.0;
  double outer = std::pow(A, 1.0 - q);
  for (int x = 0; x < n; ++x) {
    if (S[x] == 0.0) continue;
    double w = outer * 0.5 * std::pow(S[x], 0.5 * q - 1.0);
    // dS(x)/dh(y) = p(x,y)(h(y)-h(x)) for y != x, and minus the sum at y = x
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double diag = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) {
      double c = ws[i] * (h[nbr[i]] - h[x]);
      grad_out[nbr[i]] += w * c;
      diag += c;
    }
    grad_out[x] -= w * diag;
  }
  return A;
}

// Subgradient of ||grad u||_inf: convex combination over the active set
// (near-argmax vertices); avoids the single-argmax zigzag.
inline double grad_linf_of_gradient(const WeightedGraph& g, const Eigen::VectorXd& u,
                                    Eigen::VectorXd& grad_out) {
  const int n = g.vertex_count();
  Eigen::VectorXd nab(n);
  double vmax = 0.0;
  for (int x = 0; x < n; ++x) {
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double s = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) s += ws[i] * sq(u[nbr[i]] - u[x]);
    nab[x] = std::sqrt(0.5 * s / g.mass(x));
    vmax = std::max(vmax, nab[x]);
  }
  grad_out.setZero(n);
  if (vmax == 0.0) return 0.0;
  std::vector<int> active;
  for (int x = 0; x < n; ++x)
    if (nab[x] >= (1.0 - 1e-6) * vmax) active.push_back(x);
  double weight = 1.0 / static_cast<double>(active.size());
  for (int x : active) {
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double w = weight * 0.5 / (g.mass(x) * nab[x]);
    double diag = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) {
      double c = ws[i] * (u[nbr[i]] - u[x]);
      grad_out[nbr[i]] += w * c;
      diag += c;
    }
    grad_out[x] -= w * diag;
  }
  return vmax;
}

// Gradient of the log-sum-exp smoothing (1/beta) log sum_x e^{beta nabla u(x)}
// of ||grad u||_inf; the smoothed value upper-bounds the max, so descent on
// it still yields honest decomposition values.
inline double grad_lse_of_gradient(const WeightedGraph& g, const Eigen::VectorXd& u,
                                   double beta, Eigen::VectorXd& grad_out) {
  const int n = g.vertex_count();
  Eigen::VectorXd nab(n);
  double vmax = 0.0;
  for (int x = 0; x < n; ++x) {
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double s = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) s += ws[i] * sq(u[nbr[i]] - u[x]);
    nab[x] = std::sqrt(0.5 * s / g.mass(x));
    vmax = std::max(vmax, nab[x]);
  }
  grad_out.setZero(n);
  if (vmax == 0.0) return 0.0;
  double Z = 0.0;
  for (int x = 0; x < n; ++x) Z += std::exp(beta * (nab[x] - vmax));
  for (int x = 0; x < n; ++x) {
    if (nab[x] == 0.0) continue;
    double wx = std::exp(beta * (nab[x] - vmax)) / Z;
    if (wx < 1e-300) continue;
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    double w = wx * 0.5 / (g.mass(x) * nab[x]);
    double diag = 0.0;
    for (size_t i = 0; i < nbr.size(); ++i) {
      double c = ws[i] * (u[nbr[i]] - u[x]);
      grad_out[nbr[i]] += w * c;
      diag += c;
    }
    grad_out[x] -= w * diag;
  }
  return vmax + std::log(Z) / beta;
}

}  // namespace detail

inline double k_objective(const WeightedGraph& g, const VertexFunction& f,
                          const Eigen::VectorXd& ginf, double t, double q) {
  VertexFunction h{g, f.values() - ginf};
  VertexFunction gi{g, ginf};
  return lp_norm(gradient(g, h), q) +
         std::pow(t, 1.0 / q) * lp_norm(gradient(g, gi), std::numeric_limits<double>::infinity());
}

inline KFunctionalResult k_functional(const WeightedGraph& g, const VertexFunction& f,
                                      double t, double q, KFunctionalOpts opts = {}) {
  f.check_graph(g);
  require(t > 0.0, ErrorCode::BadInput, "t must be positive");
  require(q >= 1.0, ErrorCode::BadInput, "q must be >= 1");
  const int n = g.vertex_count();
  const double t_q = std::pow(t, 1.0 / q);
  const double inf = std::numeric_limits<double>::infinity();

  KFunctionalResult res;
  res.t = t;
  res.q = q;

  auto grad_f = gradient(g, f);
  double norm_q = lp_norm(grad_f, q);
  double norm_inf = lp_norm(grad_f, inf);

  // reference value t^{1/q} (|grad f|^{q}**)^{1/q}(t)
  Eigen::VectorXd gq(n);
  for (int x = 0; x < n; ++x) gq[x] = std::pow(grad_f(x), q);
  auto rear = rearrange(g, VertexFunction{g, gq});
  double tt = std::min(t, rear.total_mass);
  res.reference = t_q * std::pow(double_star(rear, tt), 1.0 / q);

  // candidate decompositions: (g_inf, label)
  std::vector<std::pair<Eigen::VectorXd, std::string>> starts;
  starts.push_back({Eigen::VectorXd::Zero(n), "h=f"});            // value ||grad f||_q
  starts.push_back({f.values(), "g=f"});                          // value t^{1/q}||grad f||_inf
  if (norm_q > 0.0) {
    // the proof's seed: CZ at alpha(t) = (M(|grad f|^q))^{* 1/q}(t)
    auto Mr = rearrange(g, maximal_function(g, VertexFunction{g, gq}));
    double alpha_t = std::pow(Mr.star(std::min(t, Mr.total_mass)), 1.0 / q);
    if (alpha_t > 0.0) {
      try {
        auto dec = cz_decompose(g, f, alpha_t, q);
        starts.push_back({dec.good.values(), "cz-alpha(t)"});
      } catch (const Error&) {
        // alpha(t) below min M^{1/q}: no CZ seed at this t
      }
    }
  }

  double best = inf;
  Eigen::VectorXd best_g;
  std::string best_label;
  for (const auto& [ginf, label] : starts) {
    double val = k_objective(g, f, ginf, t, q);
    if (val < best) {
      best = val;
      best_g = ginf;
      best_label = label;
    }
  }

  if (opts.run_descent && norm_q > 0.0) {
    const double initial_best = best;
    Eigen::VectorXd grad1(n), grad2(n);
    bool improved = false;

    // phase 1: projected subgradient with a Polyak-style step against the
    // running best (vanishing slack stands in for the unknown optimum)
    Eigen::VectorXd x = best_g;
    for (int it = 0; it < opts.descent_iters; ++it) {
      VertexFunction h{g, f.values() - x};
      double A = detail::grad_lq_of_gradient(g, h.values(), q, grad1);
      double B = detail::grad_linf_of_gradient(g, x, grad2);
      double val = A + t_q * B;
      if (val < best) {
        best = val;
        best_g = x;
        improved = true;
      }
      Eigen::VectorXd sg = -grad1 + t_q * grad2;  // d/dg [A(f-g) + t^{1/q} B(g)]
      double sg2 = sg.squaredNorm();
      if (sg2 <= 1e-28) break;
      double slack = 0.05 * initial_best / (1.0 + it);
      double step = (val - best + slack) / sg2;
      x -= step * sg;
    }

    // phase 2: smoothing continuation. Both surrogates upper-bound the true
    // terms (sqrt(S+eps^2) >= sqrt(S), log-sum-exp >= max), and the true
    // objective is re-evaluated at every accepted point, so the returned
    // value stays an honest upper bound.
    x = best_g;
    double scale0 = std::max(lp_norm(grad_f, inf), 1e-30);
    const int stages = 10;
    const int inner = std::max(40, opts.descent_iters / stages);
    for (int stage = 0; stage < stages; ++stage) {
      double eps = 0.1 * scale0 * std::pow(4.0, -stage);
      double beta = std::log(double(std::max(2, n))) / (0.5 * eps);
      double step = 0.1;
      for (int it = 0; it < inner; ++it) {
        VertexFunction h{g, f.values() - x};
        double A = detail::grad_lq_of_gradient(g, h.values(), q, grad1, eps);
        double Bs = detail::grad_lse_of_gradient(g, x, beta, grad2);
        double sval = A + t_q * Bs;
        Eigen::VectorXd dir = grad1 - t_q * grad2;  // -d(surrogate)/dx
        double dn = dir.norm();
        if (dn <= 1e-28) break;
        bool accepted = false;
        Eigen::VectorXd g1(n), g2(n);
        for (int bt = 0; bt < 30 && !accepted; ++bt) {
          Eigen::VectorXd cand = x + step * dir / dn;
          VertexFunction hc{g, f.values() - cand};
          double Ac = detail::grad_lq_of_gradient(g, hc.values(), q, g1, eps);
          double Bc = detail::grad_lse_of_gradient(g, cand, beta, g2);
          if (Ac + t_q * Bc < sval - 1e-14 * (1.0 + sval)) {
            x = cand;
            accepted = true;
            double true_val = k_objective(g, f, x, t, q);
            if (true_val < best) {
              best = true_val;
              best_g = x;
              improved = true;
            }
            step *= 1.5;
          } else {
            step *= 0.5;
          }
        }
        if (!accepted) break;
      }
    }
    if (improved) best_label += "+descent";
    require(best <= initial_best + 1e-9 * (1.0 + initial_best), ErrorCode::DescentDiverged,
            "descent increased a convex objective");
  }

  res.upper = std::min({best, norm_q, t_q * norm_inf});
  res.witness_g = VertexFunction{g, best_g};
  res.witness_h = VertexFunction{g, f.values() - best_g};
  res.best_start = best_label;
  res.ratio = res.reference > 0.0 ? res.upper / res.reference
                                  : (res.upper == 0.0 ? 1.0 : inf);
  return res;
}

struct KSandwichOpts {
  double ratio_bound = 50.0;
  KFunctionalOpts k_opts = {};
};

// Ratios K / (t^{1/q} (|grad f|^{q}**)^{1/q}(t)) over t_grid and f-samples;
// PASS when every ratio falls in one interval [c, C] with C/c below the bound.
inline InequalityReport k_sandwich_report(const WeightedGraph& g,
                                          const std::vector<VertexFunction>& fs, double q,
                                          const std::vector<double>& t_grid,
                                          KSandwichOpts opts = {}) {
  InequalityReport rep;
  rep.condition = "KFUNC";
  rep.params = {{"q", q}, {"ratio_bound", opts.ratio_bound}};
  rep.grid.columns = {"sample", "t", "K_upper", "reference", "ratio"};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  int skipped = 0;
  for (size_t s = 0; s < fs.size(); ++s) {
    if (lp_norm(gradient(g, fs[s]), q) == 0.0) {
      ++skipped;  // constant f: both sides vanish
      continue;
    }
    for (double t : t_grid) {
      auto res = k_functional(g, fs[s], t, q, opts.k_opts);
      rep.grid.add_row({double(s), t, res.upper, res.reference, res.ratio});
      if (std::isfinite(res.ratio) && res.ratio > 0.0) {
        lo = std::min(lo, res.ratio);
        hi = std::max(hi, res.ratio);
      }
    }
  }
  if (skipped) rep.add_note("skipped " + std::to_string(skipped) + " constant samples");
  rep.add_constant("ratio_min", lo, Method::Enumeration, "min of K_upper / reference");
  rep.add_constant("ratio_max", hi, Method::Enumeration, "max of K_upper / reference");
  rep.add_constant("interval_spread", hi / lo, Method::Enumeration, "ratio_max / ratio_min");
  rep.add_note("q_0 = inf{q : (P_q)} is not estimated; sandwich intervals only");
  rep.verdict = (hi / lo <= opts.ratio_bound) ? Verdict::PASS : Verdict::FAIL;
  return rep;
}

// ---------------------------------------------------------------------------
// Scaled Poincare constant on a ball: the best C in
//   sum_B |f - f_B|^p m <= C r^p sum_B |grad f|^p m,
// where grad is the global operator (neighbors outside B count).

namespace detail {

// vertices of B plus the outside neighbors that the gradient on B sees
inline std::vector<int> poincare_support(const WeightedGraph& g, const Ball& b) {
  std::vector<char> mark(g.vertex_count(), 0);
  for (int x : b.members) mark[x] = 1;
  std::vector<int> sup = b.members;
  for (int x : b.members)
    for (int y : g.neighbors(x))
      if (!mark[y]) {
        mark[y] = 1;
        sup.push_back(y);
      }
  std::sort(sup.begin(), sup.end());
  return sup;
}

}  // namespace detail

inline double poincare_constant_p2(const WeightedGraph& g, const Ball& b) {
  require(b.members.size() >= 2, ErrorCode::BadInput, "ball must contain >= 2 vertices");
  require(b.radius >= 1, ErrorCode::BadInput, "ball radius must be >= 1");
  auto sup = detail::poincare_support(g, b);
  const int ns = static_cast<int>(sup.size());
  std::vector<int> local(g.vertex_count(), -1);
  for (int i = 0; i < ns; ++i) local[sup[i]] = i;

  // A: centered mass form on B;  G: r^2 * gradient form summed over B
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ns, ns);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ns, ns);
  double VB = 0.0;
  for (int x : b.members) VB += g.mass(x);
  for (int x : b.members) {
    int i = local[x];
    A(i, i) += g.mass(x);
    for (int y : b.members) A(i, local[y]) -= g.mass(x) * g.mass(y) / VB;
  }
  const double r2 = sq(double(b.radius));
  for (int x : b.members) {
    auto nbr = g.neighbors(x);
    auto ws = g.weights(x);
    int i = local[x];
    for (size_t k = 0; k < nbr.size(); ++k) {
      int j = local[nbr[k]];
      double c = 0.5 * ws[k] * r2;  // (1/2) m(x) p(x,y) = mu_xy / 2
      G(i, i) += c;
      G(j, j) += c;
      G(i, j) -= c;
      G(j, i) -= c;
    }
  }

  // quotient out constants (common kernel of A and G)
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(ns, 1) / std::sqrt(double(ns));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd U = Q.rightCols(ns - 1);
  Eigen::MatrixXd Ar = U.transpose() * A * U;
  Eigen::MatrixXd Gr = U.transpose() * G * U;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gsolver(Gr);
  require(gsolver.info() == Eigen::Success, ErrorCode::EigensolverFailure, "G eigensolve");
  double gmin = gsolver.eigenvalues().minCoeff();
  double gmax = gsolver.eigenvalues().maxCoeff();
  require(gmin > 1e-12 * std::max(1.0, gmax), ErrorCode::DegenerateBall,
          "gradient form vanishes on a nonconstant function");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(Ar, Gr);
  require(solver.info() == Eigen::Success, ErrorCode::EigensolverFailure,
          "generalized eigensolve failed");
  return solver.eigenvalues().maxCoeff();
}

// p != 2: lower bound by normalized gradient ascent on the log-ratio, 20
// random starts, step 0.1/sqrt(iter); reported as an estimate.
inline double poincare_constant_ascent(const WeightedGraph& g, const Ball& b, double p,
                                       std::uint64_t seed = 12345, int restarts = 20,
                                       int steps = 300) {
  require(b.members.size() >= 2, ErrorCode::BadInput, "ball must contain >= 2 vertices");
  require(b.radius >= 1, ErrorCode::BadInput, "ball radius must be >= 1");
  auto sup = detail::poincare_support(g, b);
  const int ns = static_cast<int>(sup.size());
  std::vector<int> local(g.vertex_count(), -1);
  for (int i = 0; i < ns; ++i) local[sup[i]] = i;
  double VB = 0.0;
  for (int x : b.members) VB += g.mass(x);
  const double rp = std::pow(double(b.radius), p);

  // value and gradient of log(N/D), N = sum_B |f-f_B|^p m, D = r^p sum_B nabla^p m
  auto eval = [&](const Eigen::VectorXd& fl, Eigen::VectorXd* grad_out) -> double {
    double fB = 0.0;
    for (int x : b.members) fB += fl[local[x]] * g.mass(x);
    fB /= VB;
    double N = 0.0, psi_sum = 0.0;
    for (int x : b.members) {
      double dev = fl[local[x]] - fB;
      N += std::pow(std::abs(dev), p) * g.mass(x);
      psi_sum += g.mass(x) * std::pow(std::abs(dev), p - 1.0) * (dev >= 0 ? 1.0 : -1.0);
    }
    Eigen::VectorXd nab = Eigen::VectorXd::Zero(ns);
    double D = 0.0;
    for (int x : b.members) {
      auto nbr = g.neighbors(x);
      auto ws = g.weights(x);
      double s = 0.0;
      for (size_t k = 0; k < nbr.size(); ++k) s += ws[k] * sq(fl[local[nbr[k]]] - fl[local[x]]);
      nab[local[x]] = std::sqrt(0.5 * s / g.mass(x));
      D += std::pow(nab[local[x]], p) * g.mass(x);
    }
    D *= rp;
    if (N <= 0.0 || D <= 0.0) return -std::numeric_limits<double>::infinity();
    if (grad_out) {
      grad_out->setZero(ns);
      for (int x : b.members) {
        int i = local[x];
        double dev = fl[i] - fB;
        double psi = std::pow(std::abs(dev), p - 1.0) * (dev >= 0 ? 1.0 : -1.0);
        (*grad_out)[i] += p * (g.mass(x) * psi - g.mass(x) / VB * psi_sum) / N;
      }
      for (int x : b.members) {
        int i = local[x];
        if (nab[i] == 0.0) continue;
        double w = rp * 0.5 * p * std::pow(nab[i], p - 2.0) / D;
        auto nbr = g.neighbors(x);
        auto ws = g.weights(x);
        double diag = 0.0;
        for (size_t k = 0; k < nbr.size(); ++k) {
          double c = ws[k] / g.mass(x) * (fl[local[nbr[k]]] - fl[i]);
          (*grad_out)[local[nbr[k]]] -= w * g.mass(x) * c;
          diag += c;
        }
        (*grad_out)[i] += w * g.mass(x) * diag;
      }
    }
    return std::log(N / D);
  };

  Rng rng(seed);
  double best = 0.0;
  Eigen::VectorXd grad(ns);
  for (int rs = 0; rs < restarts; ++rs) {
    Eigen::VectorXd x(ns);
    for (int i = 0; i < ns; ++i) x[i] = rng.normal();
    for (int it = 0; it < steps; ++it) {
      double v = eval(x, &grad);
      if (std::isfinite(v)) best = std::max(best, std::exp(v));
      double gn = grad.norm();
      if (!std::isfinite(v) || gn <= 1e-14) break;
      x += (0.1 / std::sqrt(it + 1.0)) * grad / gn;
      x /= x.cwiseAbs().maxCoeff();
    }
    double v = eval(x, nullptr);
    if (std::isfinite(v)) best = std::max(best, std::exp(v));
  }
  return best;
}

inline double poincare_constant(const WeightedGraph& g, const Ball& b, double p,
                                std::uint64_t seed = 12345) {
  require(p >= 1.0, ErrorCode::BadInput, "p must be >= 1");
  if (p == 2.0) return poincare_constant_p2(g, b);
  return poincare_constant_ascent(g, b, p, seed);
}

}  // namespace graphcalc
