// Spectral functional calculus for P, self-adjoint in L^2(Gamma, m):
// dense eigendecomposition, functions of P, the Riesz transform by the
// spectral and by the series route, the sqrt-expansion split, the
// Littlewood-Paley g-function and the exact edge projection d (I-P)^+ delta.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "graphcalc/coefficients.hpp"
#include "graphcalc/common.hpp"
#include "graphcalc/functions.hpp"
#include "graphcalc/graph.hpp"
#include "graphcalc/operators.hpp"

namespace graphcalc {

class SpectralDecomposition {
 public:
  SpectralDecomposition() = default;

  const WeightedGraph& graph() const { return *g_; }
  // eigenvalues in descending order; lambda[0] = 1 belongs to the constants
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  // columns are m-orthonormal eigenvectors of P
  const Eigen::MatrixXd& eigenvectors() const { return vecs_; }
  int constant_index() const { return 0; }

  double lambda_min() const { return lambda_[lambda_.size() - 1]; }
  // max(|lambda_2|, |lambda_min|): decay rate on the mean-zero subspace
  double lambda_star() const {
    if (lambda_.size() < 2) return 0.0;
    return std::max(std::abs(lambda_[1]), std::abs(lambda_min()));
  }

  // coefficients <f, v_i>_m of f in the eigenbasis
  Eigen::VectorXd coefficients(const VertexFunction& f) const {
    f.check_graph(*g_);
    Eigen::VectorXd mf = f.values().cwiseProduct(mass_);
    return vecs_.transpose() * mf;
  }

  VertexFunction synthesize(const Eigen::VectorXd& coeffs) const {
    return {*g_, vecs_ * coeffs};
  }

  friend SpectralDecomposition spectral_decompose(const WeightedGraph&, int);

 private:
  const WeightedGraph* g_ = nullptr;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd vecs_;
  Eigen::VectorXd mass_;
};

// Symmetrize S = M^{1/2} P M^{-1/2}, run a dense symmetric eigensolver,
// map back. Ordering: lambda descending; sign: first coordinate with
// |v| > 1e-12 ||v||_inf made positive.
inline SpectralDecomposition spectral_decompose(const WeightedGraph& g,
                                                int cap = kDefaultDenseCap) {
  const int n = g.vertex_count();
  require(n <= cap, ErrorCode::SizeOverflow,
          std::to_string(n) + " vertices exceeds dense cap " + std::to_string(cap));
  Eigen::VectorXd sqrt_m(n);
  for (int x = 0; x < n; ++x) sqrt_m[x] = std::sqrt(g.mass(x));
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    auto nb = g.neighbors(x);
    auto ws = g.weights(x);
    for (size_t i = 0; i < nb.size(); ++i) S(x, nb[i]) = ws[i] / (sqrt_m[x] * sqrt_m[nb[i]]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  require(solver.info() == Eigen::Success, ErrorCode::EigensolverFailure,
          "symmetric eigensolver did not converge");

  SpectralDecomposition d;
  d.g_ = &g;
  d.mass_.resize(n);
  for (int x = 0; x < n; ++x) d.mass_[x] = g.mass(x);
  d.lambda_ = solver.eigenvalues().reverse();
  d.vecs_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd u = solver.eigenvectors().col(n - 1 - i);
    Eigen::VectorXd v = u.cwiseQuotient(sqrt_m);
    double scale = v.cwiseAbs().maxCoeff();
    for (int x = 0; x < n; ++x)
      if (std::abs(v[x]) > 1e-12 * scale) {
        if (v[x] < 0) v = -v;
        break;
      }
    d.vecs_.col(i) = v;
  }
  return d;
}

// sum_i phi(lambda_i) <f, v_i>_m v_i. A term with phi infinite/NaN is only
// legal when the corresponding coefficient vanishes (then it is dropped);
// otherwise SingularFunction.
inline VertexFunction apply_function_of_P(const SpectralDecomposition& spec,
                                          const std::function<double(double)>& phi,
                                          const VertexFunction& f,
                                          double occupancy_tol = 1e-9) {
  Eigen::VectorXd c = spec.coefficients(f);
  double scale = lp_norm(f, 2.0);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double ph = phi(spec.eigenvalues()[i]);
    if (std::isfinite(ph)) {
      c[i] *= ph;
    } else {
      require(std::abs(c[i]) <= occupancy_tol * scale, ErrorCode::SingularFunction,
              "phi is singular at occupied eigenvalue lambda = " +
                  std::to_string(spec.eigenvalues()[i]));
      c[i] = 0.0;
    }
  }
  return spec.synthesize(c);
}

// The lambda = 1 eigenline is an exact kernel of I-P; numerically it comes
// back as 1 - O(eps), so a 1e-13 snap keeps sqrt/rsqrt from amplifying it.
inline VertexFunction apply_sqrt_IminusP(const SpectralDecomposition& spec,
                                         const VertexFunction& f) {
  return apply_function_of_P(
      spec,
      [](double l) {
        double d = 1.0 - l;
        return d <= 1e-13 ? 0.0 : std::sqrt(d);
      },
      f);
}

// (I-P)^{-1/2} on the orthocomplement of constants
inline VertexFunction apply_invsqrt_IminusP(const SpectralDecomposition& spec,
                                            const VertexFunction& f) {
  return apply_function_of_P(
      spec,
      [](double l) {
        double d = 1.0 - l;
        return d > 1e-13 ? 1.0 / std::sqrt(d) : std::numeric_limits<double>::infinity();
      },
      f);
}

// (I-P)^+ : pseudo-inverse, constants dropped outright
inline VertexFunction apply_pinv_IminusP(const SpectralDecomposition& spec,
                                         const VertexFunction& f) {
  Eigen::VectorXd c = spec.coefficients(f);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double d = 1.0 - spec.eigenvalues()[i];
    c[i] = d > 1e-13 ? c[i] / d : 0.0;
  }
  return spec.synthesize(c);
}

// Riesz transform nabla (I-P)^{-1/2} f for mean-zero f.
inline VertexFunction riesz_apply(const WeightedGraph& g, const SpectralDecomposition& spec,
                                  const VertexFunction& f) {
  f.check_graph(g);
  require(is_mean_zero(f), ErrorCode::NotMeanZero, "riesz_apply needs <f,1>_m = 0");
  return gradient(g, apply_invsqrt_IminusP(spec, f));
}

struct RieszSeriesResult {
  VertexFunction value;      // nabla sum_{l<=L} a_l P^l f
  double tail_bound = 0.0;   // sum_{l>L} a_l lambda_*^l, exact via (1-x)^{-1/2}
};

// Series route: T = nabla(sum a_k P^k). The reported tail bound is
// sum_{l>L} a_l lambda_*^l = (1-lambda_*)^{-1/2} - sum_{l<=L} a_l lambda_*^l.
inline RieszSeriesResult riesz_series(const WeightedGraph& g, const VertexFunction& f, int L,
                                      double lambda_star = -1.0) {
  f.check_graph(g);
  require(L >= 0, ErrorCode::BadInput, "L must be >= 0");
  require(is_mean_zero(f), ErrorCode::NotMeanZero, "riesz_series needs <f,1>_m = 0");
  auto a = a_coeffs(L);
  VertexFunction pk = f;
  Eigen::VectorXd acc = a.values[0] * f.values();
  for (int l = 1; l <= L; ++l) {
    pk = apply_P(g, pk);
    acc += a.values[l] * pk.values();
  }
  RieszSeriesResult res{gradient(g, VertexFunction{g, std::move(acc)}), 0.0};
  if (lambda_star >= 0.0 && lambda_star < 1.0) {
    double partial = 0.0, xl = 1.0;
    for (int l = 0; l <= L; ++l) {
      partial += a.values[l] * xl;
      xl *= lambda_star;
    }
    res.tail_bound = 1.0 / std::sqrt(1.0 - lambda_star) - partial;
  }
  return res;
}

// Smallest L whose certified series tail is below tol (relative to ||f||_2 = 1).
inline int riesz_series_length_for(double lambda_star, double tol, int max_L = 2000000) {
  require(lambda_star >= 0.0 && lambda_star < 1.0, ErrorCode::TailNotCertified,
          "no spectral gap: lambda_* >= 1");
  double target = 1.0 / std::sqrt(1.0 - lambda_star);
  double partial = 0.0, xl = 1.0, al = 1.0;
  for (int l = 0; l <= max_L; ++l) {
    partial += al * xl;
    // error of nabla-truncation in L2 is at most sqrt(2) * tail
    if ((target - partial) * std::sqrt(2.0) <= tol) return l;
    xl *= lambda_star;
    al *= (2.0 * l + 1.0) / (2.0 * l + 2.0);
  }
  fail(ErrorCode::TailNotCertified, "series tail not certified below tolerance");
}

// Split (I-P)^{1/2} = sum_{k=0}^{r^2} a_k (I-P) P^k + remainder =: T + U,
// applied to b. T by the explicit series, U = (I-P)^{1/2} b - T b.
inline std::pair<VertexFunction, VertexFunction> sqrt_split(const WeightedGraph& g,
                                                            const SpectralDecomposition& spec,
                                                            const VertexFunction& b, int r) {
  b.check_graph(g);
  require(r >= 1, ErrorCode::BadInput, "r must be >= 1");
  const long long r2 = static_cast<long long>(r) * r;
  auto a = a_coeffs(static_cast<int>(r2));
  VertexFunction pk = b;
  VertexFunction pk1 = apply_P(g, pk);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.vertex_count());
  for (long long k = 0; k <= r2; ++k) {
    acc += a.values[static_cast<size_t>(k)] * (pk.values() - pk1.values());
    if (k < r2) {
      pk = pk1;
      pk1 = apply_P(g, pk);
    }
  }
  VertexFunction Tb{g, std::move(acc)};
  VertexFunction Sb = apply_sqrt_IminusP(spec, b);
  VertexFunction Ub{g, Sb.values() - Tb.values()};
  return {std::move(Tb), std::move(Ub)};
}

// g(f)(x) = (sum_{l>=1} l |(I-P)P^l f(x)|^2)^{1/2}, truncated once the
// certified tail (lambda_* decay of the mean-zero part) drops below tol.
inline VertexFunction g_function(const WeightedGraph& g, const SpectralDecomposition& spec,
                                 const VertexFunction& f, double tail_tol = 1e-11) {
  f.check_graph(g);
  const int n = g.vertex_count();
  double q = sq(spec.lambda_star());
  require(q < 1.0 - 1e-12, ErrorCode::SpectralGap,
          "spectrum touches -1 or 1 on the mean-zero subspace; g-series does not converge");

  // K bounds ||(I-P)P^l f||_inf by K lambda_*^l
  Eigen::VectorXd c = spec.coefficients(f);
  double K = 0.0;
  for (int i = 1; i < n; ++i)
    K += (1.0 - spec.eigenvalues()[i]) * std::abs(c[i]) *
         spec.eigenvectors().col(i).cwiseAbs().maxCoeff();

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  VertexFunction pl = apply_P(g, f);  // P^1 f
  VertexFunction pl1 = apply_P(g, pl);
  for (long long l = 1;; ++l) {
    for (int x = 0; x < n; ++x) acc[x] += double(l) * sq(pl(x) - pl1(x));
    // tail^2 <= K^2 sum_{j>l} j q^j = K^2 q^{l+1}((l+1)(1-q)+q)/(1-q)^2
    double tail2 = sq(K) * std::pow(q, double(l + 1)) *
                   ((l + 1) * (1.0 - q) + q) / sq(1.0 - q);
    if (tail2 <= sq(tail_tol) || K == 0.0) break;
    require(l < 100000000ll, ErrorCode::TailNotCertified, "g-function tail not certified");
    pl = pl1;
    pl1 = apply_P(g, pl);
  }
  return {g, acc.cwiseSqrt()};
}

// Exact spectral value of ||g(f)||_2^2 = sum_i (lambda_i/(1+lambda_i))^2 <f,v_i>_m^2.
// The lambda = 1 eigenline is excluded: (I-P)P^l annihilates it, so its
// series sums to 0 even though lambda^2/(1+lambda)^2 -> 1/4 there (the atom
// at 1 only exists on finite graphs).
inline double g_function_l2_exact(const SpectralDecomposition& spec, const VertexFunction& f) {
  Eigen::VectorXd c = spec.coefficients(f);
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double l = spec.eigenvalues()[i];
    if (1.0 - l <= 1e-13) continue;
    s += sq(l / (1.0 + l)) * sq(c[i]);
  }
  return s;
}

// Q F = d (I-P)^+ delta F. On L^2(E), -Q is the orthogonal projection onto
// exact fields: (-Q)^2 = -Q, -Q(df) = df, ||QF|| <= ||F||.
inline EdgeFunction edge_projection(const EdgeSpace& es, const SpectralDecomposition& spec,
                                    const EdgeFunction& F) {
  VertexFunction df = codifferential(es, F);
  VertexFunction u = apply_pinv_IminusP(spec, df);
  return differential(es, u);
}

}  // namespace graphcalc
