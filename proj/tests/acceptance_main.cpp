// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line. Exit status 0 iff everything passes.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "graphcalc/suite.hpp"

using namespace graphcalc;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

VertexFunction random_fn(const WeightedGraph& g, Rng& rng) {
  Eigen::VectorXd v(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) v[x] = rng.normal();
  return {g, std::move(v)};
}

std::vector<WeightedGraph> standard_graphs() {
  std::vector<WeightedGraph> gs;
  gs.push_back(gen_grid(1, 2, 1.0));   // two-vertex lazy graph
  gs.push_back(gen_cycle(4, 2.0));     // C_4 with self-loop weight 2
  gs.push_back(gen_grid(2, 8, 1.0));   // 8x8 lazy grid
  gs.push_back(gen_dumbbell(5));       // dumbbell(5)
  return gs;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> criterion_1_exact_l2() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& g : standard_graphs()) {
    auto spec = spectral_decompose(g);
    EdgeSpace es(g);
    Rng rng(1001);
    for (int s = 0; s < 100; ++s) {
      auto f = random_fn(g, rng);
      double a = lp_norm(apply_sqrt_IminusP(spec, f), 2.0);
      double b = lp_norm(gradient(g, f), 2.0);
      double c = lp_norm_edge(differential(es, f), 2.0);
      double scale = std::max({a, b, c, 1e-300});
      worst = std::max({worst, std::abs(a - b) / scale, std::abs(b - c) / scale});
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = worst <= 1e-10 && secs < 5.0;
  return {ok, "max relative deviation " + fmt(worst) + ", " + fmt(secs) + " s"};
}

std::pair<bool, std::string> criterion_2_operator_identity() {
  double worst = 0.0;
  for (const auto& g : standard_graphs()) {
    EdgeSpace es(g);
    Eigen::MatrixXd P = p_matrix(g);
    for (int j = 0; j < g.vertex_count(); ++j) {
      Eigen::VectorXd ej = Eigen::VectorXd::Zero(g.vertex_count());
      ej[j] = 1.0;
      VertexFunction e{g, ej};
      Eigen::VectorXd col = -codifferential(es, differential(es, e)).values();
      Eigen::VectorXd expect = ej - P.col(j);
      worst = std::max(worst, (col - expect).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12, "max entrywise |(-delta d) - (I-P)| = " + fmt(worst)};
}

std::pair<bool, std::string> criterion_3_gfunction() {
  double worst_err = 0.0, worst_ratio = 0.0;
  for (const auto& g : standard_graphs()) {
    auto spec = spectral_decompose(g);
    Rng rng(1003);
    for (int s = 0; s < 50; ++s) {
      auto f = random_fn(g, rng);
      auto gf = g_function(g, spec, f);
      double lhs = sq(lp_norm(gf, 2.0));
      double rhs = g_function_l2_exact(spec, f);
      double f2 = sq(lp_norm(f, 2.0));
      worst_err = std::max(worst_err, std::abs(lhs - rhs) / f2);
      worst_ratio = std::max(worst_ratio, lhs / f2);
    }
  }
  bool ok = worst_err <= 1e-8 && worst_ratio <= 1.0 + 1e-12;
  return {ok, "max relative error " + fmt(worst_err) + ", max ||g(f)||_2^2/||f||_2^2 = " +
                  fmt(worst_ratio)};
}

std::pair<bool, std::string> criterion_4_coefficients() {
  auto a = a_coeffs(1000);
  double wallis_err = 0.0;
  for (int l = 0; l <= 50; ++l)
    wallis_err = std::max(wallis_err, std::abs(a_wallis(l, 4096) - a.values[l]));
  double stirling = std::sqrt(M_PI * 1000.0) * a.values[1000];
  double gen_err = 0.0;
  for (int n : {1, 2})
    for (int k : {1, 2, 3}) {
      double x = 0.5;
      double target = std::pow(1.0 - x, -0.5) * std::pow(1.0 - std::pow(x, k * k), n);
      gen_err = std::max(gen_err,
                         std::abs(d_generating_sum(n, k, 400, x) - target) / target);
    }
  bool ok = wallis_err <= 1e-10 && stirling >= 0.999 && stirling <= 1.0 && gen_err <= 1e-8;
  return {ok, "wallis err " + fmt(wallis_err) + ", sqrt(pi*1000) a_1000 = " + fmt(stirling) +
                  ", generating-function err " + fmt(gen_err)};
}

std::pair<bool, std::string> criterion_5_estim_lemmas() {
  auto c11 = estim_constants(1, 1, 100000);
  double target = 1.0 / (2.0 * std::sqrt(M_PI));
  bool asymptotic_ok = std::abs(c11.c_tail_asymptotic - target) <= 0.1 * target;
  // the literal full-range sup is attained at l = 3 and equals sqrt(3) a_2/2;
  // frozen as a regression value
  bool literal_ok = std::abs(c11.c_tail - std::sqrt(3.0) * 0.375 / 2.0) <= 1e-4;

  double lo = 1e300, hi = 0.0;
  for (int k : {2, 4, 8}) {
    auto c = estim_constants(1, k, std::max(100000, 40 * k * k));
    lo = std::min(lo, c.c_tail);
    hi = std::max(hi, c.c_tail);
  }
  bool stable = hi <= 2.0 * lo;

  bool alpha_ok = true;
  for (int n : {1, 2}) {
    auto rep = verify_alpha_bound(n, 1, 1.0, 6);
    alpha_ok = alpha_ok && rep.verdict == Verdict::PASS &&
               std::isfinite(rep.constant("sup_scaled").value);
  }
  bool ok = asymptotic_ok && literal_ok && stable && alpha_ok;
  return {ok, "regime-iii asymptotic " + fmt(c11.c_tail_asymptotic) + " vs 1/(2 sqrt(pi)) = " +
                  fmt(target) + ", literal sup " + fmt(c11.c_tail) + ", k-sweep spread " +
                  fmt(hi / lo) + ", estimalphal " + (alpha_ok ? "finite" : "BAD")};
}

struct CzSweep {
  double c_eg = 0, c_eb = 0, c_eB = 0, c_useful = 0;
  double n_max = 0;
  bool structural_ok = true;
};

CzSweep cz_sweep(int side, int samples) {
  auto g = gen_grid(2, side, 1.0);
  Rng rng(1006);
  CzSweep out;
  for (int s = 0; s < samples; ++s) {
    auto f = random_fn(g, rng);
    for (double q : {1.0, 2.0}) {
      auto grad = gradient(g, f);
      Eigen::VectorXd gq(g.vertex_count());
      for (int x = 0; x < g.vertex_count(); ++x) gq[x] = std::pow(grad(x), q);
      auto M = maximal_function(g, VertexFunction{g, std::move(gq)});
      std::vector<double> vals(M.values().data(), M.values().data() + g.vertex_count());
      std::sort(vals.begin(), vals.end());
      for (double pct : {0.3, 0.5, 0.7}) {
        double alpha = std::pow(vals[static_cast<size_t>(pct * (vals.size() - 1))], 1.0 / q);
        if (alpha <= 0) continue;
        CZDecomposition dec;
        try {
          dec = cz_decompose(g, f, alpha, q);
        } catch (const Error&) {
          continue;
        }
        auto rep = verify_cz(g, dec, std::max(q, 2.0));
        out.structural_ok = out.structural_ok && rep.verdict == Verdict::PASS &&
                            rep.constant("reconstruction_error").value <= 1e-12;
        out.c_eg = std::max(out.c_eg, rep.constant("C_eg").value);
        out.c_eb = std::max(out.c_eb, rep.constant("C_eb").value);
        out.c_eB = std::max(out.c_eB, rep.constant("C_eB").value);
        out.c_useful = std::max(out.c_useful, rep.constant("C_useful").value);
        out.n_max = std::max(out.n_max, rep.constant("N_overlap").value);
      }
    }
  }
  return out;
}

std::pair<bool, std::string> criterion_6_cz() {
  auto t0 = std::chrono::steady_clock::now();
  auto s16 = cz_sweep(16, 20);
  auto s32 = cz_sweep(32, 20);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto drift = [](double a, double b) {
    return std::max(a, b) / std::max(std::min(a, b), 1e-300);
  };
  double worst_drift = std::max({drift(s16.c_eg, s32.c_eg), drift(s16.c_eb, s32.c_eb),
                                 drift(s16.c_eB, s32.c_eB),
                                 drift(s16.c_useful, s32.c_useful)});
  bool ok = s16.structural_ok && s32.structural_ok && s16.n_max <= 64 &&
            worst_drift <= 4.0 && secs < 60.0;
  return {ok, "N = " + fmt(s16.n_max) + ", worst constant drift 16->32 = " + fmt(worst_drift) +
                  ", structural " + (s16.structural_ok && s32.structural_ok ? "exact" : "BAD") +
                  ", " + fmt(secs) + " s"};
}

std::pair<bool, std::string> criterion_7_kfunctional() {
  // part A: 4-vertex path, descent against the zooming-grid oracle
  auto g4 = gen_grid(1, 4, 1.0);
  Eigen::VectorXd v(4);
  v << 0.3, -1.1, 0.7, 0.2;
  VertexFunction f4{g4, v};
  double worst_gap = 0.0;
  for (double frac : {0.05, 0.2, 0.5, 0.8, 1.0}) {
    double t = frac * g4.total_mass();
    KFunctionalOpts opts;
    opts.descent_iters = 2000;
    auto res = k_functional(g4, f4, t, 1.0, opts);
    double span = 2.0 * f4.values().cwiseAbs().maxCoeff() + 1.0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_pt = center;
    for (int z = 0; z < 8; ++z) {
      double spacing = 2.0 * span / 40.0;
      for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j)
          for (int k = 0; k <= 40; ++k) {
            Eigen::VectorXd ginf(4);
            ginf << 0.0, center[0] - span + i * spacing, center[1] - span + j * spacing,
                center[2] - span + k * spacing;
            double val = k_objective(g4, f4, ginf, t, 1.0);
            if (val < best) {
              best = val;
              best_pt << ginf[1], ginf[2], ginf[3];
            }
          }
      center = best_pt;
      span = 2.5 * spacing;
    }
    worst_gap = std::max(worst_gap, std::abs(res.upper - best));
  }
  bool oracle_ok = worst_gap <= 1e-3;

  // part B: sandwich interval on the 8x8 grid, stability at 16x16
  auto run_sandwich = [&](int side) {
    auto g = gen_grid(2, side, 1.0);
    Rng rng(1007);
    std::vector<VertexFunction> fs;
    for (int i = 0; i < 10; ++i) fs.push_back(random_fn(g, rng));
    std::vector<double> t_grid;
    for (int i = 0; i < 12; ++i)
      t_grid.push_back(g.total_mass() * std::pow(10.0, -3.0 + 3.0 * i / 11.0));
    KSandwichOpts opts;
    opts.k_opts.descent_iters = 500;
    opts.k_opts.seed = 1717;
    return k_sandwich_report(g, fs, 1.0, t_grid, opts);
  };
  auto r8 = run_sandwich(8);
  auto r16 = run_sandwich(16);
  double lo8 = r8.constant("ratio_min").value, hi8 = r8.constant("ratio_max").value;
  double lo16 = r16.constant("ratio_min").value, hi16 = r16.constant("ratio_max").value;
  bool interval_ok = hi8 / lo8 <= 50.0 && hi16 / lo16 <= 50.0;
  bool stable = hi16 <= 2.0 * hi8 && hi8 <= 2.0 * hi16 && lo16 <= 2.0 * lo8 &&
                lo8 <= 2.0 * lo16;
  bool ok = oracle_ok && interval_ok && stable;
  return {ok, "oracle gap " + fmt(worst_gap) + ", interval 8x8 [" + fmt(lo8) + "," + fmt(hi8) +
                  "], 16x16 [" + fmt(lo16) + "," + fmt(hi16) + "]"};
}

std::pair<bool, std::string> criterion_8_kernel_bounds() {
  auto c_grid = std::vector<double>{1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
  auto sweep = [&](int dim, int side, int k_max) {
    auto g = gen_grid(dim, side, 1.0);
    std::vector<int> k_grid;
    for (int k = 4; k <= k_max; k += 4) k_grid.push_back(k);
    std::map<std::string, double> out;
    for (auto which :
         {KernelBound::DUE, KernelBound::UE, KernelBound::TIMEDERIV, KernelBound::LUE}) {
      auto rep = kernel_bound_report(g, which, k_grid, c_grid);
      out[kernel_bound_name(which)] =
          rep.constant(which == KernelBound::LUE ? "c1" : "C").value;
    }
    return out;
  };
  // 2-D k-grid stops at 8 so the extremal straight-line pairs d = k fit in
  // the interior of both sizes (at k = 16 they exist only on the larger grid)
  auto a1 = sweep(1, 201, 100), b1 = sweep(1, 401, 100);
  auto a2 = sweep(2, 21, 8), b2 = sweep(2, 41, 8);
  auto drift_ok = [](double a, double b) {
    return a > 0 && b > 0 && std::max(a, b) / std::min(a, b) <= 2.0;
  };
  bool upper_ok = true;
  for (const auto& name : {"DUE", "UE", "TIMEDERIV"}) {
    upper_ok = upper_ok && drift_ok(a1[name], b1[name]) && drift_ok(a2[name], b2[name]);
    upper_ok = upper_ok && a1[name] <= 100.0 && a2[name] <= 100.0;
  }
  bool lower_ok = a1["LUE"] > 0 && b1["LUE"] >= 0.5 * a1["LUE"] && a2["LUE"] > 0 &&
                  b2["LUE"] >= 0.5 * a2["LUE"];
  bool ok = upper_ok && lower_ok;
  std::ostringstream ss;
  ss << "1-D DUE " << fmt(a1["DUE"]) << "->" << fmt(b1["DUE"]) << ", UE " << fmt(a1["UE"])
     << "->" << fmt(b1["UE"]) << ", LUE c1 " << fmt(a1["LUE"]) << "->" << fmt(b1["LUE"])
     << "; 2-D DUE " << fmt(a2["DUE"]) << "->" << fmt(b2["DUE"]) << ", LUE c1 "
     << fmt(a2["LUE"]) << "->" << fmt(b2["LUE"]);
  return {ok, ss.str()};
}

std::pair<bool, std::string> criterion_9_poincare() {
  // poincare_constant carries the r^p weight inside the gradient form, so it
  // is the scaled quantity the criterion calls C(B)/r^2
  auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
  };
  auto path = gen_grid(1, 64, 1.0);
  std::vector<double> s1;
  for (int r : {2, 4, 8}) s1.push_back(poincare_constant(path, ball(path, 32, r), 2.0));
  auto grid = gen_grid(2, 17, 1.0);
  std::vector<double> s2;
  for (int r : {2, 4, 8})
    s2.push_back(poincare_constant(grid, ball(grid, 8 * 17 + 8, r), 2.0));
  bool grids_ok = spread(s1) <= 4.0 && spread(s2) <= 4.0;

  auto tree = gen_tree(2, 9);
  std::vector<double> st;
  for (int r : {2, 4, 8}) st.push_back(poincare_constant(tree, ball(tree, 0, r), 2.0));
  bool tree_ok = st[1] > st[0] && st[2] > st[1];
  bool ok = grids_ok && tree_ok;
  return {ok, "1-D spread " + fmt(spread(s1)) + ", 2-D spread " + fmt(spread(s2)) +
                  ", tree " + fmt(st[0]) + " < " + fmt(st[1]) + " < " + fmt(st[2])};
}

std::pair<bool, std::string> criterion_10_counterexample() {
  auto t0 = std::chrono::steady_clock::now();
  AscentOpts opts;
  opts.seed = 1010;
  opts.samples = 40;
  opts.restarts = 40;
  opts.steps = 1500;
  auto estimate = [&](const WeightedGraph& g) {
    auto spec = spectral_decompose(g);
    return riesz_constant(g, spec, 4.0, RieszStrategy::Ascent, opts)
        .constant("C_lower")
        .value;
  };
  std::vector<double> db;
  for (int side : {5, 9, 13}) db.push_back(estimate(gen_dumbbell(side)));
  std::vector<double> gr;
  for (int side : {8, 16}) gr.push_back(estimate(gen_grid(2, side, 1.0)));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = db[0] < db[1] && db[1] < db[2] &&
            std::max(gr[0], gr[1]) / std::min(gr[0], gr[1]) <= 2.0 && secs < 300.0;
  return {ok, "dumbbell " + fmt(db[0]) + " < " + fmt(db[1]) + " < " + fmt(db[2]) + ", grid " +
                  fmt(gr[0]) + " vs " + fmt(gr[1]) + ", " + fmt(secs) + " s"};
}

std::pair<bool, std::string> criterion_11_projection() {
  double worst_idem = 0.0, worst_norm = 0.0, worst_fix = 0.0;
  for (const auto& g : standard_graphs()) {
    auto spec = spectral_decompose(g);
    EdgeSpace es(g);
    Rng rng(1011);
    for (int s = 0; s < 100; ++s) {
      auto F = random_edge_function(es, rng);
      auto QF = edge_projection(es, spec, F);
      auto QQF = edge_projection(es, spec, QF);
      worst_idem =
          std::max(worst_idem, (QQF.values() + QF.values()).cwiseAbs().maxCoeff());
      double nf = lp_norm_edge(F, 2.0);
      if (nf > 0) worst_norm = std::max(worst_norm, lp_norm_edge(QF, 2.0) / nf);
      auto df = differential(es, random_fn(g, rng));
      auto Qdf = edge_projection(es, spec, df);
      worst_fix =
          std::max(worst_fix, (Qdf.values() + df.values()).cwiseAbs().maxCoeff());
    }
  }
  bool ok = worst_idem <= 1e-10 && worst_norm <= 1.0 + 1e-12 && worst_fix <= 1e-10;
  return {ok, "idempotency " + fmt(worst_idem) + ", norm " + fmt(worst_norm) +
                  ", -Q(df)=df " + fmt(worst_fix)};
}

std::pair<bool, std::string> criterion_12_series_vs_spectral() {
  double worst = 0.0;
  int used_L = 0;
  for (const auto& g : {gen_cycle(4, 2.0), gen_grid(2, 8, 1.0)}) {
    auto spec = spectral_decompose(g);
    Rng rng(1012);
    int L = riesz_series_length_for(spec.lambda_star(), 1e-6);
    used_L = std::max(used_L, L);
    for (int s = 0; s < 5; ++s) {
      auto f = subtract_mean(random_fn(g, rng));
      double norm = lp_norm(f, 2.0);
      auto series = riesz_series(g, f, L, spec.lambda_star());
      auto exact = riesz_apply(g, spec, f);
      worst = std::max(
          worst, (series.value.values() - exact.values()).cwiseAbs().maxCoeff() / norm);
    }
  }
  return {worst <= 1e-6,
          "max relative deviation " + fmt(worst) + " at certified L <= " + fmt(used_L)};
}

std::pair<bool, std::string> criterion_13_determinism() {
  auto dir = fs::temp_directory_path() / "graphcalc_acceptance";
  fs::create_directories(dir);
  nlohmann::json cfg = {
      {"graph", {{"generator", "grid"}, {"dim", 2}, {"side", 8}, {"laziness", 1.0}}},
      {"suite",
       {{{"check", "DELTA_ALPHA"}},
        {{"check", "RP"}, {"p", 2.0}},
        {{"check", "GFUNC"}, {"samples", 10}},
        {{"check", "CZ"}, {"samples", 3}},
        {{"check", "KFUNC"}, {"samples", 2}, {"t_points", 4}, {"descent_iters", 100}},
        {{"check", "D"}}}},
      {"seed", 2024},
      {"output_dir", (dir / "out").string()}};
  auto cfg_path = dir / "cfg.json";
  {
    std::ofstream out(cfg_path);
    out << cfg.dump(2);
  }
  auto run_once = [&]() -> std::string {
    std::string cmd = std::string(GRAPHCALC_CLI_PATH) + " check " + cfg_path.string() +
                      " >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return "";
    std::ifstream in(dir / "out" / "report.json", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto r1 = run_once();
  fs::remove(dir / "out" / "report.json");
  auto r2 = run_once();
  bool ok = !r1.empty() && r1 == r2;
  return {ok, ok ? "bitwise identical report.json (" + std::to_string(r1.size()) + " bytes)"
                 : "reports differ or the run failed"};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 exact L2 identity (I-P)^{1/2} / gradient / differential", criterion_1_exact_l2},
      {"2 operator identity I-P = -delta d", criterion_2_operator_identity},
      {"3 g-function spectral constant", criterion_3_gfunction},
      {"4 coefficients: Wallis, Stirling, generating function", criterion_4_coefficients},
      {"5 d_l and alpha_l bound lemmas", criterion_5_estim_lemmas},
      {"6 Calderon-Zygmund decomposition", criterion_6_cz},
      {"7 K-functional oracle and sandwich", criterion_7_kfunctional},
      {"8 kernel bounds DUE/UE/TIMEDERIV/LUE", criterion_8_kernel_bounds},
      {"9 Poincare scaling and tree failure signal", criterion_9_poincare},
      {"10 dumbbell counterexample growth", criterion_10_counterexample},
      {"11 edge projection (Pi_2)", criterion_11_projection},
      {"12 Riesz series vs spectral route", criterion_12_series_vs_spectral},
      {"13 determinism of cmd_check", criterion_13_determinism},
  };
  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::pair<bool, std::string> res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %-52s [%6.1fs]  %s\n", res.first ? "PASS" : "FAIL",
                c.name.c_str(), secs, res.second.c_str());
    std::fflush(stdout);
    if (!res.first) ++failures;
  }
  if (failures)
    std::printf("%d criterion(s) FAILED\n", failures);
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
