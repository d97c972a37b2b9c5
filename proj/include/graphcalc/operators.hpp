// The Markov operator P and its companions: kernel iterates, the length of
// the gradient, the discrete differential/codifferential, and the
// Hardy-Littlewood maximal function (exact, by ball enumeration).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "graphcalc/common.hpp"
#include "graphcalc/functions.hpp"
#include "graphcalc/graph.hpp"

namespace graphcalc {

// Pf(x) = sum_y p(x,y) f(y)
inline VertexFunction apply_P(const WeightedGraph& g, const VertexFunction& f) {
  f.check_graph(g);
  Eigen::VectorXd out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    auto nb = g.neighbors(x);
    auto ws = g.weights(x);
    double s = 0.0;
    for (size_t i = 0; i < nb.size(); ++i) s += ws[i] * f(nb[i]);
    out[x] = s / g.mass(x);
  }
  return {g, std::move(out)};
}

// y -> p_k(x, y), computed by k left-multiplications of the delta row.
inline VertexFunction kernel_row(const WeightedGraph& g, int x, int k) {
  g.check_vertex(x);
  require(k >= 0, ErrorCode::BadInput, "k must be >= 0");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(g.vertex_count());
  row[x] = 1.0;
  Eigen::VectorXd next(g.vertex_count());
  for (int step = 0; step < k; ++step) {
    next.setZero();
    for (int z = 0; z < g.vertex_count(); ++z) {
      if (row[z] == 0.0) continue;
      auto nb = g.neighbors(z);
      auto ws = g.weights(z);
      double pz = row[z] / g.mass(z);
      for (size_t i = 0; i < nb.size(); ++i) next[nb[i]] += pz * ws[i];
    }
    row.swap(next);
  }
  return {g, std::move(row)};
}

// nabla f(x) = ((1/2) sum_y p(x,y) |f(y)-f(x)|^2)^{1/2}
inline VertexFunction gradient(const WeightedGraph& g, const VertexFunction& f) {
  f.check_graph(g);
  Eigen::VectorXd out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    auto nb = g.neighbors(x);
    auto ws = g.weights(x);
    double s = 0.0;
    for (size_t i = 0; i < nb.size(); ++i) s += ws[i] * sq(f(nb[i]) - f(x));
    out[x] = std::sqrt(0.5 * s / g.mass(x));
  }
  return {g, std::move(out)};
}

// df(x,y) = f(y) - f(x)
inline EdgeFunction differential(const EdgeSpace& es, const VertexFunction& f) {
  f.check_graph(es.graph());
  Eigen::VectorXd v(static_cast<Eigen::Index>(es.size()));
  for (size_t i = 0; i < es.size(); ++i) {
    const auto& e = es.edges()[i];
    v[static_cast<Eigen::Index>(i)] = f(e.y) - f(e.x);
  }
  return {es, std::move(v)};
}

// delta G(x) = sum_y p(x,y) G(x,y); adjoint relation
// <df, G>_{L^2(E)} = -<f, delta G>_{L^2(Gamma)}
inline VertexFunction codifferential(const EdgeSpace& es, const EdgeFunction& G) {
  const auto& g = es.graph();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.vertex_count());
  for (size_t i = 0; i < es.size(); ++i) {
    const auto& e = es.edges()[i];
    out[e.x] += G[static_cast<int>(i)] * es.mu(static_cast<int>(i));
  }
  for (int x = 0; x < g.vertex_count(); ++x) out[x] /= g.mass(x);
  return {g, std::move(out)};
}

// Euclidean transpose of P: (P^T w)(y) = sum_x p(x,y) w(x); the chain-rule
// companion of apply_P for gradients of functionals of P^n f.
inline Eigen::VectorXd apply_P_transpose(const WeightedGraph& g, const Eigen::VectorXd& w) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (w[x] == 0.0) continue;
    auto nb = g.neighbors(x);
    auto ws = g.weights(x);
    double wx = w[x] / g.mass(x);
    for (size_t i = 0; i < nb.size(); ++i) out[nb[i]] += wx * ws[i];
  }
  return out;
}

// dense matrix of P in the vertex basis (test-sized graphs)
inline Eigen::MatrixXd p_matrix(const WeightedGraph& g) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    auto nb = g.neighbors(x);
    auto ws = g.weights(x);
    for (size_t i = 0; i < nb.size(); ++i) P(x, nb[i]) = ws[i] / g.mass(x);
  }
  return P;
}

// Mf(x) = sup over balls B containing x of (1/V(B)) sum_B |f| m.
// Exact: every (center, radius) pair is enumerated.
inline VertexFunction maximal_function(const WeightedGraph& g, const VertexFunction& f) {
  f.check_graph(g);
  const int n = g.vertex_count();
  Eigen::VectorXd M = Eigen::VectorXd::Constant(n, -1.0);
  std::vector<double> mass_at, absfm_at;
  for (int z = 0; z < n; ++z) {
    auto dist = bfs_distances(g, z);
    int ecc = *std::max_element(dist.begin(), dist.end());
    mass_at.assign(static_cast<size_t>(ecc) + 1, 0.0);
    absfm_at.assign(static_cast<size_t>(ecc) + 1, 0.0);
    for (int v = 0; v < n; ++v) {
      mass_at[dist[v]] += g.mass(v);
      absfm_at[dist[v]] += std::abs(f(v)) * g.mass(v);
    }
    // avg[r] = ball average at radius r; suffix max gives, for each x,
    // the best ball centered at z that contains x
    double cm = 0.0, cf = 0.0;
    std::vector<double> avg(static_cast<size_t>(ecc) + 1);
    for (int r = 0; r <= ecc; ++r) {
      cm += mass_at[r];
      cf += absfm_at[r];
      avg[r] = cf / cm;
    }
    for (int r = ecc - 1; r >= 0; --r) avg[r] = std::max(avg[r], avg[r + 1]);
    for (int v = 0; v < n; ++v) M[v] = std::max(M[v], avg[dist[v]]);
  }
  return {g, std::move(M)};
}

}  // namespace graphcalc
