// Functions on the vertex set (measured by m) and on the edge set
// (antisymmetric, measured by mu), with their L^p norms and CSV round-trip.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graphcalc/common.hpp"
#include "graphcalc/graph.hpp"

namespace graphcalc {

class VertexFunction {
 public:
  VertexFunction() = default;
  VertexFunction(const WeightedGraph& g, Eigen::VectorXd values)
      : g_(&g), v_(std::move(values)) {
    require(v_.size() == g.vertex_count(), ErrorCode::BadInput,
            "value vector length does not match vertex count");
  }
  static VertexFunction zero(const WeightedGraph& g) {
    return {g, Eigen::VectorXd::Zero(g.vertex_count())};
  }
  static VertexFunction constant(const WeightedGraph& g, double c) {
    return {g, Eigen::VectorXd::Constant(g.vertex_count(), c)};
  }
  static VertexFunction indicator(const WeightedGraph& g, const std::vector<int>& set) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.vertex_count());
    for (int x : set) v[x] = 1.0;
    return {g, std::move(v)};
  }

  const WeightedGraph& graph() const { return *g_; }
  const Eigen::VectorXd& values() const { return v_; }
  Eigen::VectorXd& values() { return v_; }
  double operator()(int x) const { return v_[x]; }
  double& operator[](int x) { return v_[x]; }
  int size() const { return static_cast<int>(v_.size()); }

  void check_graph(const WeightedGraph& g) const {
    require(g_ == &g, ErrorCode::GraphMismatch, "function attached to a different graph");
  }

 private:
  const WeightedGraph* g_ = nullptr;
  Eigen::VectorXd v_;
};

inline double lp_norm(const VertexFunction& f, double p) {
  const auto& g = f.graph();
  if (std::isinf(p)) return f.values().cwiseAbs().maxCoeff();
  double s = 0.0;
  for (int x = 0; x < g.vertex_count(); ++x)
    s += std::pow(std::abs(f(x)), p) * g.mass(x);
  return std::pow(s, 1.0 / p);
}

inline double inner_m(const VertexFunction& f, const VertexFunction& h) {
  f.check_graph(h.graph());
  double s = 0.0;
  for (int x = 0; x < f.size(); ++x) s += f(x) * h(x) * f.graph().mass(x);
  return s;
}

inline double mean_m(const VertexFunction& f) {
  double s = 0.0;
  for (int x = 0; x < f.size(); ++x) s += f(x) * f.graph().mass(x);
  return s / f.graph().total_mass();
}

inline bool is_mean_zero(const VertexFunction& f, double tol = 1e-10) {
  double l2 = lp_norm(f, 2.0);
  if (l2 == 0.0) return true;
  double s = 0.0;
  for (int x = 0; x < f.size(); ++x) s += f(x) * f.graph().mass(x);
  return std::abs(s) <= tol * l2 * std::sqrt(f.graph().total_mass());
}

inline VertexFunction subtract_mean(const VertexFunction& f) {
  double mu = mean_m(f);
  return {f.graph(), f.values().array() - mu};
}

// Antisymmetric function on the directed edge list of an EdgeSpace.
class EdgeFunction {
 public:
  EdgeFunction() = default;

  // values aligned with es.edges(); antisymmetry is validated.
  EdgeFunction(const EdgeSpace& es, Eigen::VectorXd values, double tol = 0.0)
      : es_(&es), v_(std::move(values)) {
    require(v_.size() == static_cast<Eigen::Index>(es.size()), ErrorCode::BadInput,
            "edge value vector length mismatch");
    double scale = v_.size() ? v_.cwiseAbs().maxCoeff() : 0.0;
    for (size_t i = 0; i < es.size(); ++i) {
      const auto& e = es.edges()[i];
      if (e.x > e.y) continue;
      if (e.x == e.y) {
        require(std::abs(v_[i]) <= tol * scale, ErrorCode::NotAntisymmetric,
                "nonzero value on a self-edge");
        v_[i] = 0.0;
        continue;
      }
      int j = es.index_of({e.y, e.x});
      require(std::abs(v_[i] + v_[j]) <= tol * scale, ErrorCode::NotAntisymmetric,
              "F(x,y) != -F(y,x)");
    }
  }

  static EdgeFunction zero(const EdgeSpace& es) {
    return {es, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(es.size()))};
  }

  // builds F from one value per ordered pair x < y, F(y,x) = -F(x,y)
  static EdgeFunction from_upper(const EdgeSpace& es,
                                 const std::vector<std::pair<DirectedEdge, double>>& upper) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(es.size()));
    for (const auto& [e, val] : upper) {
      require(e.x < e.y, ErrorCode::BadInput, "from_upper expects x < y");
      v[es.index_of(e)] = val;
      v[es.index_of({e.y, e.x})] = -val;
    }
    return {es, std::move(v)};
  }

  const EdgeSpace& space() const { return *es_; }
  const Eigen::VectorXd& values() const { return v_; }
  double operator[](int edge_index) const { return v_[edge_index]; }
  double at(int x, int y) const { return v_[es_->index_of({x, y})]; }

 private:
  const EdgeSpace* es_ = nullptr;
  Eigen::VectorXd v_;
};

// ||F||_{L^p(E)} = ((1/2) sum_E |F|^p mu_xy)^{1/p}; for p = infinity the
// convention is (1/2) sup |F|.
inline double lp_norm_edge(const EdgeFunction& F, double p) {
  const auto& es = F.space();
  if (std::isinf(p)) {
    double s = 0.0;
    for (size_t i = 0; i < es.size(); ++i) s = std::max(s, std::abs(F[static_cast<int>(i)]));
    return 0.5 * s;
  }
  double s = 0.0;
  for (size_t i = 0; i < es.size(); ++i)
    s += std::pow(std::abs(F[static_cast<int>(i)]), p) * es.mu(static_cast<int>(i));
  return std::pow(0.5 * s, 1.0 / p);
}

inline double inner_edge(const EdgeFunction& F, const EdgeFunction& G) {
  const auto& es = F.space();
  double s = 0.0;
  for (size_t i = 0; i < es.size(); ++i)
    s += F[static_cast<int>(i)] * G[static_cast<int>(i)] * es.mu(static_cast<int>(i));
  return 0.5 * s;
}

// ---------------------------------------------------------------------------
// CSV wire format: "index,value" with the edge index taken from the
// canonical sorted directed-edge list.

inline void write_function_csv(const Eigen::VectorXd& v, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "index,value\n";
  char buf[40];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out << i << "," << buf << "\n";
  }
}

inline Eigen::VectorXd read_function_csv(const std::string& path, Eigen::Index expected_size) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  Eigen::VectorXd v = Eigen::VectorXd::Zero(expected_size);
  std::vector<char> seen(expected_size, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string idx_s, val_s;
    require(std::getline(ss, idx_s, ',') && std::getline(ss, val_s), ErrorCode::IoError,
            "malformed CSV line: " + line);
    long idx = std::stol(idx_s);
    require(idx >= 0 && idx < expected_size, ErrorCode::BadInput,
            "CSV index out of range: " + idx_s);
    v[idx] = std::stod(val_s);
    seen[idx] = 1;
  }
  require(std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }),
          ErrorCode::BadInput, "CSV is missing indices");
  return v;
}

}  // namespace graphcalc
