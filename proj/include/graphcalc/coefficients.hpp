// Scalar coefficient sequences behind the functional calculus:
//   a_l   from (1-x)^{-1/2} = sum a_l x^l,  a_l = (2l)!/(4^l (l!)^2)
//   d_l   from (I-P)^{-1/2}(I-P^{k^2})^n = sum d_l P^l
//   alpha_l = sum_p C_n^p (-1)^p sqrt(l - p k^2)
// plus Wallis-integral quadrature and the numeric checks of the bound
// lemmas for d_l and alpha_l.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphcalc/common.hpp"
#include "graphcalc/report.hpp"

namespace graphcalc {

enum class CoeffKind { A, D, Alpha };

struct CoeffSequence {
  CoeffKind kind = CoeffKind::A;
  int n = 0;  // unused for kind A
  int k = 0;
  std::vector<double> values;  // index l = 0..L
  int length() const { return static_cast<int>(values.size()) - 1; }
};

// a_{l+1} = a_l (2l+1)/(2l+2); overflow-free, a_0 = 1
inline CoeffSequence a_coeffs(int L) {
  require(L >= 0, ErrorCode::BadInput, "L must be >= 0");
  CoeffSequence s;
  s.kind = CoeffKind::A;
  s.values.resize(static_cast<size_t>(L) + 1);
  s.values[0] = 1.0;
  for (int l = 0; l < L; ++l)
    s.values[l + 1] = s.values[l] * (2.0 * l + 1.0) / (2.0 * l + 2.0);
  return s;
}

// (2l)! / (4^l (l!)^2), exact in double for small l; cross-checks the recurrence
inline double a_factorial(int l) {
  double num = 1.0, den = 1.0;
  for (int i = 1; i <= 2 * l; ++i) num *= i;
  for (int i = 1; i <= l; ++i) den *= i;
  return num / (std::pow(4.0, l) * den * den);
}

inline double binomial(int n, int j) {
  double b = 1.0;
  for (int i = 0; i < j; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// d_l = sum_{0<=j<=n, j k^2 <= l} (-1)^j C_n^j a_{l-jk^2}
inline CoeffSequence d_coeffs(int n, int k, int L) {
  require(n >= 1 && k >= 1, ErrorCode::BadInput, "need n >= 1 and k >= 1");
  auto a = a_coeffs(L);
  CoeffSequence s;
  s.kind = CoeffKind::D;
  s.n = n;
  s.k = k;
  s.values.assign(static_cast<size_t>(L) + 1, 0.0);
  const long long k2 = static_cast<long long>(k) * k;
  for (long long l = 0; l <= L; ++l) {
    double v = 0.0;
    for (int j = 0; j <= n && j * k2 <= l; ++j)
      v += ((j % 2) ? -1.0 : 1.0) * binomial(n, j) * a.values[static_cast<size_t>(l - j * k2)];
    s.values[static_cast<size_t>(l)] = v;
  }
  return s;
}

// alpha_l = sum_{0<=p<=n, l >= p k^2} C_n^p (-1)^p sqrt(l - p k^2)
inline CoeffSequence alpha_coeffs(int n, int k, int L) {
  require(n >= 1 && k >= 1, ErrorCode::BadInput, "need n >= 1 and k >= 1");
  CoeffSequence s;
  s.kind = CoeffKind::Alpha;
  s.n = n;
  s.k = k;
  s.values.assign(static_cast<size_t>(L) + 1, 0.0);
  const long long k2 = static_cast<long long>(k) * k;
  for (long long l = 0; l <= L; ++l) {
    double v = 0.0;
    for (int p = 0; p <= n && p * k2 <= l; ++p)
      v += ((p % 2) ? -1.0 : 1.0) * binomial(n, p) * std::sqrt(double(l - p * k2));
    s.values[static_cast<size_t>(l)] = v;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature (nodes by Newton iteration on P_n).

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int order) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= order; ++j) {
      double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = order * (x * p1 - p0) / (x * x - 1.0);
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

inline double integrate_panels(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints, int pts_per_panel) {
  auto gl = gauss_legendre(pts_per_panel);
  double total = 0.0;
  for (size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    double a = breakpoints[p], b = breakpoints[p + 1];
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < pts_per_panel; ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
    total += s * half;
  }
  return total;
}

// (2/pi) Int_0^{pi/2} (2 log sin t)^n (sin t)^{2x} dt, n = 0 gives the Wallis
// value a_x. Panels subdivide geometrically near t = 0 where the integrand's
// derivatives pile up; the doubling rule estimates the error.
inline double phi_derivative(int n, double x, int quad_points, double* err_out = nullptr) {
  require(n >= 0, ErrorCode::BadInput, "derivative order must be >= 0");
  require(x >= 0.0, ErrorCode::BadInput, "x must be >= 0");
  require(quad_points >= 16, ErrorCode::BadInput, "quad_points too small");
  auto integrand = [&](double t) {
    double ls = std::log(std::sin(t));
    double base = std::exp(2.0 * x * ls);
    return (n == 0 ? base : std::pow(2.0 * ls, n) * base);
  };
  int panels = 24;
  std::vector<double> bp;
  bp.push_back(0.0);
  for (int j = panels - 1; j >= 0; --j) bp.push_back(M_PI / 2 * std::pow(2.0, -j));
  int pts = std::max(8, quad_points / panels);
  double coarse = integrate_panels(integrand, bp, pts);
  double fine = integrate_panels(integrand, bp, 2 * pts);
  double err = std::abs(fine - coarse);
  if (err_out) *err_out = err;
  require(err <= std::max(1e-12, 1e-10 * std::abs(fine)), ErrorCode::QuadratureUnderResolved,
          "quadrature error estimate " + std::to_string(err) + " above tolerance");
  return 2.0 / M_PI * fine;
}

// a_l by the Wallis integral a_l = (2/pi) Int_0^{pi/2} sin^{2l} t dt
inline double a_wallis(int l, int quad_points) {
  require(l >= 0, ErrorCode::BadInput, "l must be >= 0");
  require(quad_points >= 64, ErrorCode::BadInput, "quad_points must be >= 64");
  return phi_derivative(0, static_cast<double>(l), quad_points);
}

// ---------------------------------------------------------------------------
// Numeric check of the d_l bound lemma. Per regime the smallest empirical C,
// i.e. sup of |d_l| / bound(l); additionally the constant measured on the
// asymptotic tail of regime (iii) (sup over the last decade of l).

struct EstimConstants {
  double c_between = 0.0;    // (i)  mk^2 < l < (m+1)k^2 : |d_l| sqrt(l - mk^2)
  double c_at_knots = 0.0;   // (ii) l = (m+1)k^2        : |d_l|
  double c_tail = 0.0;       // (iii) l > (n+1)k^2       : |d_l| l^{n+1/2} / k^{2n}
  double c_tail_asymptotic = 0.0;  // same as (iii), sup over l in [L/10, L]
};

inline EstimConstants estim_constants(int n, int k, int L) {
  auto d = d_coeffs(n, k, L);
  const long long k2 = static_cast<long long>(k) * k;
  EstimConstants c;
  for (long long l = 1; l <= L; ++l) {
    double dl = std::abs(d.values[static_cast<size_t>(l)]);
    if (l > (n + 1) * k2) {
      double scaled = dl * std::pow(double(l), n + 0.5) / std::pow(double(k), 2 * n);
      c.c_tail = std::max(c.c_tail, scaled);
      if (l >= L / 10) c.c_tail_asymptotic = std::max(c.c_tail_asymptotic, scaled);
    } else if (l % k2 == 0) {
      c.c_at_knots = std::max(c.c_at_knots, dl);
    } else {
      long long m = l / k2;
      c.c_between = std::max(c.c_between, dl * std::sqrt(double(l - m * k2)));
    }
  }
  return c;
}

inline InequalityReport verify_estim_bounds(int n, int k, int L) {
  require(L > (n + 1) * static_cast<long long>(k) * k, ErrorCode::BadInput,
          "L must exceed (n+1)k^2");
  InequalityReport rep;
  rep.condition = "COEFF_ESTIM";
  rep.params = {{"n", double(n)}, {"k", double(k)}, {"L", double(L)}};
  auto c = estim_constants(n, k, L);
  rep.add_constant("C_regime_i", c.c_between, Method::Enumeration,
                   "sup |d_l| sqrt(l-mk^2) over mk^2 < l < (m+1)k^2");
  rep.add_constant("C_regime_ii", c.c_at_knots, Method::Enumeration,
                   "sup |d_l| over l = (m+1)k^2");
  rep.add_constant("C_regime_iii", c.c_tail, Method::Enumeration,
                   "sup |d_l| l^{n+1/2} k^{-2n} over l > (n+1)k^2");
  rep.add_constant("C_regime_iii_asymptotic", c.c_tail_asymptotic, Method::Enumeration,
                   "regime (iii) constant restricted to l in [L/10, L]");

  // stability sweep: same constants for k in {2,4,8}
  rep.grid.columns = {"k", "C_i", "C_ii", "C_iii", "C_iii_asymptotic"};
  bool finite = std::isfinite(c.c_between) && std::isfinite(c.c_at_knots) &&
                std::isfinite(c.c_tail);
  double lo_iii = c.c_tail, hi_iii = c.c_tail;
  for (int ks : {2, 4, 8}) {
    int Ls = std::max(L, 20 * (n + 1) * ks * ks);
    auto cs = estim_constants(n, ks, Ls);
    rep.grid.add_row({double(ks), cs.c_between, cs.c_at_knots, cs.c_tail,
                      cs.c_tail_asymptotic});
    finite = finite && std::isfinite(cs.c_between) && std::isfinite(cs.c_at_knots) &&
             std::isfinite(cs.c_tail);
    lo_iii = std::min(lo_iii, cs.c_tail);
    hi_iii = std::max(hi_iii, cs.c_tail);
  }
  bool stable = hi_iii <= 2.0 * lo_iii;
  rep.verdict = (finite && stable) ? Verdict::PASS : Verdict::FAIL;
  if (!stable) rep.add_note("regime (iii) constant drifts by more than a factor 2 across k");
  return rep;
}

// ---------------------------------------------------------------------------
// Numeric check of the alpha_l lemma
//   sum_{l>=1} (|alpha_l|^2/l^2) e^{-c 4^j k^2 / l} <= C 4^{-2nj}.
// Truncation tails are certified analytically before being dropped: the
// n-fold finite difference of sqrt with step k^2 satisfies the mean-value
// identity alpha_l = k^{2n} (d^n/dt^n sqrt)(xi) for xi in [l-nk^2, l], so for
// l > (n+1)k^2,
//   |alpha_l| <= c_n k^{2n} (l/(n+1))^{1/2-n},  c_n = prod_{i<n} |1/2 - i|,
// and sum_{l>L} alpha_l^2/l^2 <= c_n^2 k^{4n} (n+1)^{2n-1} L^{-2n} / (2n).

inline double alpha_tail_majorant(int n, int k, long long L) {
  double cn = 1.0;
  for (int i = 0; i < n; ++i) cn *= std::abs(0.5 - i);
  return sq(cn) * std::pow(double(k), 4 * n) * std::pow(double(n + 1), 2 * n - 1) /
         (2.0 * n * std::pow(double(L), 2 * n));
}

inline InequalityReport verify_alpha_bound(int n, int k, double c, int j_max) {
  require(c > 0.0, ErrorCode::BadInput, "c must be positive");
  require(j_max >= 2, ErrorCode::BadInput, "j_max must be >= 2");
  InequalityReport rep;
  rep.condition = "COEFF_ALPHA";
  rep.params = {{"n", double(n)}, {"k", double(k)}, {"c", c}, {"j_max", double(j_max)}};

  const long long k2 = static_cast<long long>(k) * k;
  long long L = std::max<long long>(1000, 100 * (n + 1) * k2);
  double tail = alpha_tail_majorant(n, k, L);
  while (tail > 1e-16 && L < (1ll << 26)) {
    L *= 2;
    tail = alpha_tail_majorant(n, k, L);
  }
  require(tail <= 1e-12, ErrorCode::TailNotCertified,
          "alpha series tail majorant did not certify below 1e-12");

  auto alpha = alpha_coeffs(n, k, static_cast<int>(L));
  rep.grid.columns = {"j", "lhs", "lhs_tail_majorant", "scaled"};
  double sup_scaled = 0.0;
  double prev_scaled = -1.0;
  bool ratio_nonincreasing_past_4 = true;
  for (int j = 2; j <= j_max; ++j) {
    double w = c * std::pow(4.0, j) * double(k2);
    double lhs = 0.0;
    for (long long l = 1; l <= L; ++l)
      lhs += sq(alpha.values[static_cast<size_t>(l)]) / sq(double(l)) * std::exp(-w / double(l));
    double scaled = lhs * std::pow(4.0, 2.0 * n * j);
    rep.grid.add_row({double(j), lhs, tail, scaled});
    sup_scaled = std::max(sup_scaled, scaled);
    if (j > 4 && prev_scaled >= 0.0 && scaled > prev_scaled * (1.0 + 1e-9))
      ratio_nonincreasing_past_4 = false;
    if (j >= 4) prev_scaled = scaled;
  }
  rep.add_constant("sup_scaled", sup_scaled, Method::Enumeration,
                   "sup_j of lhs(j) 4^{2nj}, truncated at L with certified tail");
  rep.add_constant("truncation_L", double(L), Method::Enumeration, "series truncation length");
  rep.verdict = std::isfinite(sup_scaled) ? Verdict::PASS : Verdict::FAIL;
  if (!ratio_nonincreasing_past_4)
    rep.add_note("scaled lhs not monotone beyond j=4 (dominated-decay check)");
  return rep;
}

// sup over the grid of x^{n+1/2} |phi^(n)(x)| with phi(x) the Wallis integral
inline InequalityReport phi_derivative_bound(int n, const std::vector<double>& x_grid,
                                             int quad_points) {
  for (double x : x_grid)
    require(x > 1.0, ErrorCode::BadInput, "x_grid must lie in (1, infinity)");
  InequalityReport rep;
  rep.condition = "PHI_DERIV";
  rep.params = {{"n", double(n)}, {"quad_points", double(quad_points)}};
  rep.grid.columns = {"x", "phi_n", "scaled"};
  double sup = 0.0;
  for (double x : x_grid) {
    double v = phi_derivative(n, x, quad_points);
    double scaled = std::pow(x, n + 0.5) * std::abs(v);
    rep.grid.add_row({x, v, scaled});
    sup = std::max(sup, scaled);
  }
  rep.add_constant("sup_scaled", sup, Method::Enumeration,
                   "sup over x_grid of x^{n+1/2} |phi^(n)(x)|");
  rep.verdict = std::isfinite(sup) ? Verdict::PASS : Verdict::FAIL;
  return rep;
}

// partial sum of sum d_l x^l, for the generating-function identity
// sum_l d_l x^l = (1-x)^{-1/2} (1-x^{k^2})^n at |x| < 1
inline double d_generating_sum(int n, int k, int L, double x) {
  auto d = d_coeffs(n, k, L);
  double s = 0.0, xl = 1.0;
  for (int l = 0; l <= L; ++l) {
    s += d.values[static_cast<size_t>(l)] * xl;
    xl *= x;
  }
  return s;
}

}  // namespace graphcalc
