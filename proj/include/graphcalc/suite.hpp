// Experiment configuration, the named check registry, deterministic report
// bundles and plot-ready CSV emission. Identical config + seed produces
// bitwise-identical report JSON; wall-clock timings go to a separate file.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "graphcalc/coefficients.hpp"
#include "graphcalc/common.hpp"
#include "graphcalc/czd.hpp"
#include "graphcalc/functions.hpp"
#include "graphcalc/graph.hpp"
#include "graphcalc/inequality_lab.hpp"
#include "graphcalc/interpolation.hpp"
#include "graphcalc/operators.hpp"
#include "graphcalc/report.hpp"
#include "graphcalc/spectral.hpp"

namespace graphcalc {

inline constexpr const char* kVersion = "graphcalc 1.0.0";
inline constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "D",  "DELTA_ALPHA", "DUE",   "UE",    "LUE",  "TIMEDERIV", "P2",
      "PQ", "GP",          "RP",    "RRP",   "GFUNC", "CZ",       "KFUNC",
      "RH", "PI",          "GAFFNEY", "COEFF_ESTIM", "COEFF_ALPHA", "WALLIS"};
  return names;
}

struct CheckSpec {
  std::string name;
  nlohmann::json params;  // everything except "check"
};

struct ExperimentConfig {
  nlohmann::json graph_spec;
  std::vector<CheckSpec> suite;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  nlohmann::json tolerances;
  nlohmann::json raw;  // config echo
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;
  require(j.contains("graph"), ErrorCode::BadInput, "config needs a \"graph\" entry");
  cfg.graph_spec = j.at("graph");
  require(j.contains("suite") && j.at("suite").is_array(), ErrorCode::BadInput,
          "config needs a \"suite\" array");
  for (const auto& item : j.at("suite")) {
    require(item.contains("check"), ErrorCode::BadInput, "suite items need \"check\"");
    CheckSpec spec;
    spec.name = item.at("check").get<std::string>();
    const auto& names = known_checks();
    require(std::find(names.begin(), names.end(), spec.name) != names.end(),
            ErrorCode::BadInput, "unknown check name " + spec.name);
    spec.params = item;
    spec.params.erase("check");
    cfg.suite.push_back(spec);
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("tolerances")) cfg.tolerances = j.at("tolerances");
  return cfg;
}

inline WeightedGraph graph_from_spec(const nlohmann::json& spec) {
  if (spec.contains("file")) return read_graph_file(spec.at("file").get<std::string>());
  require(spec.contains("generator"), ErrorCode::BadInput,
          "graph spec needs \"generator\" or \"file\"");
  std::string gen = spec.at("generator").get<std::string>();
  auto get_or = [&](const char* key, double def) {
    return spec.contains(key) ? spec.at(key).get<double>() : def;
  };
  if (gen == "grid")
    return gen_grid(static_cast<int>(get_or("dim", 2)), static_cast<int>(get_or("side", 8)),
                    get_or("laziness", 1.0));
  if (gen == "cycle") return gen_cycle(static_cast<int>(get_or("n", 4)), get_or("self", 2.0));
  if (gen == "dumbbell") return gen_dumbbell(static_cast<int>(get_or("side", 5)));
  if (gen == "tree")
    return gen_tree(static_cast<int>(get_or("branching", 2)),
                    static_cast<int>(get_or("depth", 5)));
  fail(ErrorCode::BadInput, "unknown generator " + gen);
}

// lazily shared, immutable evaluation context
struct SuiteContext {
  WeightedGraph graph;
  std::unique_ptr<SpectralDecomposition> spec_ptr;
  const SpectralDecomposition& spectral() const { return *spec_ptr; }
};

namespace detail {

inline int center_vertex(const WeightedGraph& g) {
  // deepest vertex w.r.t. the truncation boundary; falls back to a BFS center
  if (!g.boundary_marks().empty()) {
    std::vector<int> marked;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g.boundary_marks()[v]) marked.push_back(v);
    if (!marked.empty() && static_cast<int>(marked.size()) < g.vertex_count()) {
      auto dist = bfs_distances_multi(g, marked);
      return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    }
  }
  auto d0 = bfs_distances(g, 0);
  int far = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto d1 = bfs_distances(g, far);
  int far2 = static_cast<int>(std::max_element(d1.begin(), d1.end()) - d1.begin());
  // midpoint along a diameter path
  auto d2 = bfs_distances(g, far2);
  int best = 0, best_score = 1 << 30;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int score = std::abs(d1[v] - d2[v]) + std::abs(d1[v] + d2[v] - d1[far2]);
    if (score < best_score) {
      best_score = score;
      best = v;
    }
  }
  return best;
}

inline std::vector<double> default_c_grid() {
  return {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
}

inline VertexFunction random_fn(const WeightedGraph& g, Rng& rng) {
  Eigen::VectorXd v(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) v[x] = rng.normal();
  return {g, std::move(v)};
}

}  // namespace detail

// Runs one named check; every check derives its RNG stream from the master
// seed hashed with the check name.
inline InequalityReport run_check(const SuiteContext& ctx, const CheckSpec& spec,
                                  std::uint64_t master_seed) {
  const auto& g = ctx.graph;
  const auto& p = spec.params;
  std::uint64_t seed = mix_seed(master_seed, spec.name);
  Rng rng(seed);
  auto get_d = [&](const char* key, double def) {
    return p.contains(key) ? p.at(key).get<double>() : def;
  };
  auto get_i = [&](const char* key, int def) {
    return p.contains(key) ? p.at(key).get<int>() : def;
  };

  if (spec.name == "D") {
    int diam = eccentricity(g, detail::center_vertex(g));
    std::vector<int> radii;
    for (int r = 1; r <= std::max(1, diam / 4); r *= 2) radii.push_back(r);
    std::vector<int> centers;
    auto interior = interior_vertices(g, std::max(1, diam / 8));
    if (interior.empty()) interior = interior_vertices(g, 0);
    for (size_t i = 0; i < interior.size(); i += std::max<size_t>(1, interior.size() / 16))
      centers.push_back(interior[i]);
    return doubling_report(g, centers, radii);
  }

  if (spec.name == "DELTA_ALPHA") {
    auto res = delta_alpha(g);
    InequalityReport rep;
    rep.condition = "DELTA_ALPHA";
    rep.add_constant("alpha", res.alpha, Method::Enumeration,
                     "min over edges of mu_xy / m(x), zero without self-loops");
    if (res.missing_self_loop)
      rep.add_note("MissingSelfLoop: " +
                   std::to_string(res.vertices_without_self_loop.size()) +
                   " vertices lack x ~ x");
    rep.verdict = res.alpha > 0 ? Verdict::PASS : Verdict::FAIL;
    return rep;
  }

  if (spec.name == "DUE" || spec.name == "UE" || spec.name == "LUE" ||
      spec.name == "TIMEDERIV") {
    KernelBound which = spec.name == "DUE"   ? KernelBound::DUE
                        : spec.name == "UE"  ? KernelBound::UE
                        : spec.name == "LUE" ? KernelBound::LUE
                                             : KernelBound::TIMEDERIV;
    std::vector<int> k_grid;
    int k_min = get_i("k_min", 4), k_max = get_i("k_max", 64), k_step = get_i("k_step", 4);
    for (int k = k_min; k <= k_max; k += k_step) k_grid.push_back(k);
    KernelBoundOpts opts;
    opts.margin = get_i("margin", -1);
    opts.cap = get_d("cap", 100.0);
    return kernel_bound_report(g, which, k_grid, detail::default_c_grid(), opts);
  }

  if (spec.name == "P2" || spec.name == "PQ") {
    double pp = spec.name == "P2" ? 2.0 : get_d("p", 1.5);
    int center = get_i("center", detail::center_vertex(g));
    std::vector<int> radii;
    if (p.contains("radii"))
      for (const auto& r : p.at("radii")) radii.push_back(r.get<int>());
    else
      radii = {2, 4, 8};
    InequalityReport rep;
    rep.condition = spec.name;
    rep.params = {{"p", pp}, {"center", double(center)}};
    rep.grid.columns = {"r", "scaled_constant"};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int r : radii) {
      auto b = ball(g, center, r);
      if (static_cast<int>(b.members.size()) < 2) continue;
      double c = poincare_constant(g, b, pp, seed);
      rep.grid.add_row({double(r), c});
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    rep.add_constant("scaled_min", lo,
                     pp == 2.0 ? Method::ExactSpectral : Method::RayleighAscent,
                     "min over radii of the r^p-scaled Poincare constant");
    rep.add_constant("scaled_max", hi,
                     pp == 2.0 ? Method::ExactSpectral : Method::RayleighAscent,
                     "max over radii of the r^p-scaled Poincare constant");
    double bound = get_d("spread_bound", 4.0);
    rep.verdict = pp == 2.0 ? (hi <= bound * lo ? Verdict::PASS : Verdict::FAIL)
                            : Verdict::ESTIMATE;
    if (hi > bound * lo) rep.add_note("scaled constant grows with r (Poincare failure signal)");
    return rep;
  }

  if (spec.name == "GP") {
    double pp = get_d("p", 2.0);
    std::vector<int> n_grid;
    for (int n = 1; n <= get_i("n_max", 64); n *= 2) n_grid.push_back(n);
    AscentOpts opts;
    opts.seed = seed;
    return gp_report(g, ctx.spectral(), pp, n_grid, opts);
  }

  if (spec.name == "RP" || spec.name == "RRP") {
    double pp = get_d("p", 2.0);
    std::string strat =
        p.contains("strategy") ? p.at("strategy").get<std::string>()
                               : (pp == 2.0 ? std::string("exact") : std::string("ascent"));
    AscentOpts opts;
    opts.seed = seed;
    opts.samples = get_i("samples", 40);
    opts.restarts = get_i("restarts", 20);
    opts.steps = get_i("steps", 300);
    return spec.name == "RP"
               ? riesz_constant(g, ctx.spectral(), pp, riesz_strategy_from(strat), opts)
               : reverse_riesz_constant(g, ctx.spectral(), pp, riesz_strategy_from(strat),
                                        opts);
  }

  if (spec.name == "GFUNC") {
    int samples = get_i("samples", 50);
    InequalityReport rep;
    rep.condition = "GFUNC";
    rep.params = {{"samples", double(samples)}};
    double err = 0.0, sup_ratio = 0.0;
    for (int s = 0; s < samples; ++s) {
      auto f = detail::random_fn(g, rng);
      auto gf = g_function(g, ctx.spectral(), f);
      double lhs = sq(lp_norm(gf, 2.0));
      double rhs = g_function_l2_exact(ctx.spectral(), f);
      double f2 = sq(lp_norm(f, 2.0));
      err = std::max(err, std::abs(lhs - rhs) / f2);
      sup_ratio = std::max(sup_ratio, std::sqrt(lhs / f2));
    }
    rep.add_constant("series_vs_spectral_error", err, Method::ExactSpectral,
                     "sup |  ||g(f)||_2^2 - sum (lambda/(1+lambda))^2 c_i^2 | / ||f||_2^2");
    rep.add_constant("sup_ratio", sup_ratio, Method::RandomSample,
                     "sup ||g(f)||_2 / ||f||_2");
    rep.verdict = (err <= 1e-8 && sup_ratio <= 1.0 + 1e-10) ? Verdict::PASS : Verdict::FAIL;
    return rep;
  }

  if (spec.name == "CZ") {
    int samples = get_i("samples", 20);
    double verify_p = get_d("verify_p", 2.0);
    std::vector<double> percentiles;
    if (p.contains("percentiles"))
      for (const auto& q : p.at("percentiles")) percentiles.push_back(q.get<double>());
    else
      percentiles = {0.3, 0.5, 0.7};
    std::vector<double> qs;
    if (p.contains("q"))
      qs = {p.at("q").get<double>()};
    else
      qs = {1.0, 2.0};

    InequalityReport rep;
    rep.condition = "CZ";
    rep.params = {{"samples", double(samples)}, {"verify_p", verify_p}};
    rep.grid.columns = {"sample", "q",    "alpha",  "omega_size", "n_balls",
                        "C_eg",   "C_eb", "C_eB",   "N_overlap",  "C_useful"};
    bool all_pass = true;
    double worst[5] = {0, 0, 0, 0, 0};
    for (int s = 0; s < samples; ++s) {
      auto f = detail::random_fn(g, rng);
      for (double q : qs) {
        auto grad = gradient(g, f);
        Eigen::VectorXd gq(g.vertex_count());
        for (int x = 0; x < g.vertex_count(); ++x) gq[x] = std::pow(grad(x), q);
        auto M = maximal_function(g, VertexFunction{g, std::move(gq)});
        std::vector<double> vals(M.values().data(), M.values().data() + g.vertex_count());
        std::sort(vals.begin(), vals.end());
        for (double pct : percentiles) {
          double alpha =
              std::pow(vals[static_cast<size_t>(pct * (vals.size() - 1))], 1.0 / q);
          if (alpha <= 0.0) continue;
          CZDecomposition dec;
          try {
            dec = cz_decompose(g, f, alpha, q);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::OmegaIsEverything) continue;
            throw;
          }
          auto sub = verify_cz(g, dec, std::max(q, verify_p));
          all_pass &= sub.verdict == Verdict::PASS;
          double row[5] = {sub.constant("C_eg").value, sub.constant("C_eb").value,
                           sub.constant("C_eB").value, sub.constant("N_overlap").value,
                           sub.constant("C_useful").value};
          for (int i = 0; i < 5; ++i) worst[i] = std::max(worst[i], row[i]);
          rep.grid.add_row({double(s), q, alpha, double(dec.omega.size()),
                            double(dec.cover.balls.size()), row[0], row[1], row[2], row[3],
                            row[4]});
        }
      }
    }
    const char* names[5] = {"C_eg", "C_eb", "C_eB", "N_overlap", "C_useful"};
    for (int i = 0; i < 5; ++i)
      rep.add_constant(names[i], worst[i], Method::Enumeration,
                       "worst case over samples, q values and percentiles");
    rep.verdict = all_pass ? Verdict::PASS : Verdict::FAIL;
    return rep;
  }

  if (spec.name == "KFUNC") {
    double q = get_d("q", 1.0);
    int n_samples = get_i("samples", 10);
    int n_t = get_i("t_points", 12);
    KSandwichOpts opts;
    opts.ratio_bound = get_d("ratio_bound", 50.0);
    opts.k_opts.seed = seed;
    opts.k_opts.descent_iters = get_i("descent_iters", 500);
    std::vector<VertexFunction> fs;
    for (int i = 0; i < n_samples; ++i) fs.push_back(detail::random_fn(g, rng));
    std::vector<double> t_grid;
    for (int i = 0; i < n_t; ++i)
      t_grid.push_back(g.total_mass() * std::pow(10.0, -3.0 + 3.0 * i / (n_t - 1.0)));
    return k_sandwich_report(g, fs, q, t_grid, opts);
  }

  if (spec.name == "RH") {
    int center = get_i("center", detail::center_vertex(g));
    int radius = get_i("radius", 1);
    return rh_ratio(g, ball(g, center, radius), get_d("p", 2.5), get_i("samples", 20), seed);
  }

  if (spec.name == "PI") {
    return pi_p_check(g, ctx.spectral(), get_d("p", 2.0), get_i("samples", 100), seed);
  }

  if (spec.name == "GAFFNEY") {
    int center = get_i("center", detail::center_vertex(g));
    int radius = get_i("radius", 2);
    std::vector<int> l_grid;
    for (int l = 1; l <= get_i("l_max", 32); l *= 2) l_grid.push_back(l);
    return gaffney_report(g, {ball(g, center, radius)}, get_i("i_max", 2), l_grid,
                          detail::default_c_grid(), get_i("samples", 20), seed);
  }

  if (spec.name == "COEFF_ESTIM")
    return verify_estim_bounds(get_i("n", 1), get_i("k", 1), get_i("L", 100000));

  if (spec.name == "COEFF_ALPHA")
    return verify_alpha_bound(get_i("n", 1), get_i("k", 1), get_d("c", 1.0),
                              get_i("j_max", 6));

  if (spec.name == "WALLIS") {
    int l_max = get_i("l_max", 50);
    int quad_points = get_i("quad_points", 4096);
    InequalityReport rep;
    rep.condition = "WALLIS";
    rep.params = {{"l_max", double(l_max)}, {"quad_points", double(quad_points)}};
    auto a = a_coeffs(1000);
    double err = 0.0;
    for (int l = 0; l <= l_max; ++l)
      err = std::max(err, std::abs(a_wallis(l, quad_points) - a.values[l]));
    double stirling = std::sqrt(M_PI * 1000.0) * a.values[1000];
    rep.add_constant("max_error", err, Method::Enumeration,
                     "max over l of |wallis quadrature - recurrence|");
    rep.add_constant("stirling_at_1000", stirling, Method::Enumeration,
                     "sqrt(pi l) a_l at l = 1000");
    auto phi = phi_derivative_bound(1, {2.0, 8.0, 32.0, 128.0}, quad_points);
    rep.add_constant("phi1_sup_scaled", phi.constant("sup_scaled").value,
                     Method::Enumeration, "sup x^{3/2} |phi'(x)| over {2,8,32,128}");
    rep.verdict =
        (err <= 1e-10 && stirling >= 0.999 && stirling <= 1.0) ? Verdict::PASS : Verdict::FAIL;
    return rep;
  }

  fail(ErrorCode::BadInput, "unknown check " + spec.name);
}

struct CheckOutcome {
  std::string name;
  bool ok = false;
  std::string error;
  InequalityReport report;
  double seconds = 0.0;
};

struct ReportBundle {
  ExperimentConfig config;
  std::vector<CheckOutcome> outcomes;
};

inline int thread_budget(int n_tasks) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget <= 0) budget = 1;
  if (const char* env = std::getenv("GRAPHCALC_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) budget = std::min(budget, cap);
  }
  return std::max(1, std::min(budget, n_tasks));
}

inline ReportBundle run_suite(const ExperimentConfig& cfg) {
  ReportBundle bundle;
  bundle.config = cfg;
  SuiteContext ctx{graph_from_spec(cfg.graph_spec), nullptr};

  bool needs_spec = false;
  for (const auto& spec : cfg.suite)
    needs_spec |= spec.name == "GP" || spec.name == "RP" || spec.name == "RRP" ||
                  spec.name == "GFUNC" || spec.name == "PI";
  if (needs_spec)
    ctx.spec_ptr = std::make_unique<SpectralDecomposition>(spectral_decompose(ctx.graph));

  // global tolerance overrides apply to every check; per-check params win
  std::vector<CheckSpec> suite = cfg.suite;
  if (cfg.tolerances.is_object())
    for (auto& spec : suite)
      for (auto it = cfg.tolerances.begin(); it != cfg.tolerances.end(); ++it)
        if (!spec.params.contains(it.key())) spec.params[it.key()] = it.value();

  bundle.outcomes.resize(suite.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= suite.size()) return;
      auto& out = bundle.outcomes[i];
      out.name = suite[i].name;
      auto t0 = std::chrono::steady_clock::now();
      try {
        out.report = run_check(ctx, suite[i], cfg.seed);
        out.ok = true;
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
      }
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  int n_threads = thread_budget(static_cast<int>(cfg.suite.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return bundle;
}

inline nlohmann::json bundle_to_json(const ReportBundle& bundle) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = bundle.config.raw;
  j["environment"] = {{"version", kVersion}, {"float", "IEEE-754 binary64"}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& out : bundle.outcomes) {
    nlohmann::json cj;
    cj["name"] = out.name;
    cj["status"] = out.ok ? "ok" : "error";
    if (out.ok)
      cj["report"] = report_to_json(out.report);
    else
      cj["error"] = out.error;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

// Writes report.json (deterministic), one CSV per check with grid rows, and
// timings.csv (timings deliberately live outside the deterministic report).
inline void write_bundle(const ReportBundle& bundle, const std::string& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  require(!ec, ErrorCode::IoError, "cannot create output dir " + output_dir);

  std::ofstream rj(fs::path(output_dir) / "report.json");
  require(rj.good(), ErrorCode::IoError, "cannot write report.json");
  rj << dump_deterministic(bundle_to_json(bundle));

  std::ofstream tj(fs::path(output_dir) / "timings.csv");
  tj << "check,seconds\n";
  for (size_t i = 0; i < bundle.outcomes.size(); ++i) {
    const auto& out = bundle.outcomes[i];
    tj << out.name << "," << out.seconds << "\n";
    if (out.ok && !out.report.grid.rows.empty()) {
      std::string fname = std::to_string(i) + "_" + out.name + ".csv";
      std::ofstream cs(fs::path(output_dir) / fname);
      cs << grid_to_csv(out.name, out.report.grid);
    }
  }
}

}  // namespace graphcalc
