// graphcalc: generators, named inequality checks, Calderon-Zygmund
// decompositions and Riesz transforms on finite weighted graphs.
//
// Exit codes: 0 success, 2 usage, 3 check/computation failure, 4 I/O.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "graphcalc/suite.hpp"

using namespace graphcalc;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoError:
      return 4;
    case ErrorCode::BadInput:
      return 2;
    default:
      return 3;
  }
}

const char* kCsvDoc =
    "CSV schema v1. Every table starts with '# graphcalc-csv schema=1 check=<NAME>'\n"
    "followed by a header row. Columns per check:\n"
    "  D:           center,r,V_r,V_2r,ratio,clipped\n"
    "  DUE/UE/TIMEDERIV: c,C          (per exponential rate c, smallest constant C)\n"
    "  LUE:         c,c1_lower        (per rate, largest lower constant)\n"
    "  P2/PQ:       r,scaled_constant (r^p-scaled Poincare constant per radius)\n"
    "  GP:          n,norm,sqrt_n_norm\n"
    "  GFUNC/DELTA_ALPHA/RP/RRP/WALLIS/COEFF_*: constants only (see report.json)\n"
    "  CZ:          sample,q,alpha,omega_size,n_balls,C_eg,C_eb,C_eB,N_overlap,C_useful\n"
    "  KFUNC:       sample,t,K_upper,reference,ratio\n"
    "  RH:          sample,lhs,rhs,ratio\n"
    "  GAFFNEY:     ball,i,l,sup_lognorm_ratio\n"
    "  COEFF_ESTIM: k,C_i,C_ii,C_iii,C_iii_asymptotic\n"
    "  COEFF_ALPHA: j,lhs,lhs_tail_majorant,scaled\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphcalc: discrete harmonic analysis on finite weighted graphs"};
  app.footer(kCsvDoc);
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a graph and write its JSON file");
  gen->require_subcommand(1);
  std::string gen_out = "graph.json";

  int grid_dim = 2, grid_side = 8;
  double grid_lazy = 1.0;
  auto* gen_grid_cmd = gen->add_subcommand("grid", "lazy grid {0..side-1}^dim");
  gen_grid_cmd->add_option("--dim", grid_dim, "dimension (1..3)");
  gen_grid_cmd->add_option("--side", grid_side, "side length");
  gen_grid_cmd->add_option("--laziness", grid_lazy, "self-loop weight = laziness * degree");
  gen_grid_cmd->add_option("-o,--output", gen_out, "output path");

  int db_side = 5;
  auto* gen_db_cmd = gen->add_subcommand("dumbbell", "two lazy grids joined by one edge");
  gen_db_cmd->add_option("--side", db_side, "side of each square copy");
  gen_db_cmd->add_option("-o,--output", gen_out, "output path");

  int cy_n = 4;
  double cy_self = 2.0;
  auto* gen_cy_cmd = gen->add_subcommand("cycle", "cycle with self-loops");
  gen_cy_cmd->add_option("--n", cy_n, "number of vertices");
  gen_cy_cmd->add_option("--self", cy_self, "self-loop weight");
  gen_cy_cmd->add_option("-o,--output", gen_out, "output path");

  int tr_b = 2, tr_d = 5;
  auto* gen_tr_cmd = gen->add_subcommand("tree", "rooted lazy tree");
  gen_tr_cmd->add_option("--branching", tr_b, "children per internal vertex");
  gen_tr_cmd->add_option("--depth", tr_d, "depth (root at 0)");
  gen_tr_cmd->add_option("-o,--output", gen_out, "output path");

  // ---- check ----------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run a named-check suite from a config");
  std::string cfg_path;
  std::string out_dir_flag;
  std::int64_t seed_flag = -1;
  check->add_option("config", cfg_path, "experiment config JSON")->required();
  check->add_option("--output-dir", out_dir_flag, "override the config output_dir");
  check->add_option("--seed", seed_flag, "override the config seed");

  // ---- czd ------------------------------------------------------------------
  auto* czd = app.add_subcommand("czd", "Calderon-Zygmund decomposition of a function");
  std::string czd_graph, czd_fn, czd_out = "czd.json";
  double czd_alpha = 1.0, czd_q = 1.0;
  czd->add_option("--graph", czd_graph, "graph JSON file")->required();
  czd->add_option("--function", czd_fn, "vertex function CSV")->required();
  czd->add_option("--alpha", czd_alpha, "level alpha > 0")->required();
  czd->add_option("--q", czd_q, "exponent q >= 1");
  czd->add_option("-o,--output", czd_out, "decomposition JSON output");

  // ---- riesz ------------------------------------------------------------------
  auto* riesz = app.add_subcommand("riesz", "apply the Riesz transform grad (I-P)^{-1/2}");
  std::string rz_graph, rz_fn, rz_out = "riesz.csv";
  int rz_series = -1;
  bool rz_project = false;
  riesz->add_option("--graph", rz_graph, "graph JSON file")->required();
  riesz->add_option("--function", rz_fn, "vertex function CSV (mean-zero)")->required();
  riesz->add_option("--series", rz_series, "use the truncated series route at this length");
  riesz->add_flag("--project", rz_project, "project the input onto mean-zero first");
  riesz->add_option("-o,--output", rz_out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      WeightedGraph g;
      if (*gen_grid_cmd) g = gen_grid(grid_dim, grid_side, grid_lazy);
      if (*gen_db_cmd) g = gen_dumbbell(db_side);
      if (*gen_cy_cmd) g = gen_cycle(cy_n, cy_self);
      if (*gen_tr_cmd) g = gen_tree(tr_b, tr_d);
      write_graph_file(g, gen_out);
      std::printf("wrote %s (%d vertices, %zu directed edges)\n", gen_out.c_str(),
                  g.vertex_count(), g.directed_edge_count());
      return 0;
    }

    if (*check) {
      std::ifstream in(cfg_path);
      require(in.good(), ErrorCode::IoError, "cannot open config " + cfg_path);
      nlohmann::json j;
      in >> j;
      if (!out_dir_flag.empty()) j["output_dir"] = out_dir_flag;
      if (seed_flag >= 0) j["seed"] = static_cast<std::uint64_t>(seed_flag);
      auto cfg = parse_config(j);
      auto bundle = run_suite(cfg);
      write_bundle(bundle, cfg.output_dir);
      bool any_failed = false;
      for (const auto& out : bundle.outcomes) {
        std::string note = out.ok ? "" : " " + out.error;
        std::fprintf(stderr, "%-12s %-9s %8.3fs%s\n", out.name.c_str(),
                     out.ok ? verdict_name(out.report.verdict) : "ERROR", out.seconds,
                     note.c_str());
        any_failed |= !out.ok;
      }
      std::printf("wrote %s/report.json (%zu checks)\n", cfg.output_dir.c_str(),
                  bundle.outcomes.size());
      return any_failed ? 3 : 0;
    }

    if (*czd) {
      auto g = read_graph_file(czd_graph);
      auto v = read_function_csv(czd_fn, g.vertex_count());
      VertexFunction f{g, std::move(v)};
      auto dec = cz_decompose(g, f, czd_alpha, czd_q);
      std::ofstream out(czd_out);
      require(out.good(), ErrorCode::IoError, "cannot open " + czd_out);
      out << dump_deterministic(cz_to_json(g, dec));
      std::printf("wrote %s (|Omega| = %zu, %zu balls)\n", czd_out.c_str(),
                  dec.omega.size(), dec.cover.balls.size());
      return 0;
    }

    if (*riesz) {
      auto g = read_graph_file(rz_graph);
      auto v = read_function_csv(rz_fn, g.vertex_count());
      VertexFunction f{g, std::move(v)};
      if (rz_project) f = subtract_mean(f);
      VertexFunction result;
      if (rz_series >= 0) {
        result = riesz_series(g, f, rz_series).value;
      } else {
        auto spec = spectral_decompose(g);
        result = riesz_apply(g, spec, f);
      }
      write_function_csv(result.values(), rz_out);
      std::printf("wrote %s\n", rz_out.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
