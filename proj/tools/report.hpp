#pragma once

#include <string>

#include "json.hpp"
#include "parlap/chain.hpp"
#include "parlap/schur_approx.hpp"
#include "parlap/solver.hpp"

namespace parlap::cli {

using nlohmann::ordered_json;

inline const char* to_string(BoundingMode mode) { return mode == BoundingMode::Naive ? "naive" : "estimate"; }

/// Timings are left out when `with_timings` is false, so deterministic runs
/// serialize to identical bytes.
inline ordered_json level_json(const ChainLevelStats& s, bool with_timings) {
  ordered_json j;
  j["vertices"] = s.vertices;
  j["edges"] = s.edges;
  j["eliminated"] = s.eliminated;
  j["rounds_used"] = s.rounds_used;
  j["walks_discarded"] = s.walks.discarded;
  j["mean_walk_length"] = s.walks.mean_length();
  j["max_walk_length"] = s.walks.max_length;
  if (with_timings) j["seconds"] = s.seconds;
  return j;
}

inline ordered_json levels_json(const std::vector<ChainLevelStats>& levels, bool with_timings) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : levels) arr.push_back(level_json(s, with_timings));
  return arr;
}

inline ordered_json config_json(const SolverConfig& cfg) {
  ordered_json j;
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["alpha_c0"] = cfg.alpha_c0;
  if (cfg.alpha_inverse) j["alpha_inverse"] = *cfg.alpha_inverse;
  j["bounding_mode"] = to_string(cfg.bounding_mode);
  j["K"] = cfg.K;
  j["jl_rows"] = cfg.jl_rows;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["deterministic"] = cfg.deterministic;
  return j;
}

inline ordered_json solve_report_json(const std::string& mode, const SolveReport& r, const SolverConfig& cfg,
                                      double wall_seconds) {
  const bool timings = !cfg.deterministic;
  ordered_json j;
  j["mode"] = mode;
  j["input"] = {{"vertices", r.vertices}, {"edges", r.edges}};
  j["config"] = config_json(cfg);
  j["alpha_inverse"] = r.alpha_inverse;
  j["multi_edges"] = r.multi_edges;
  if (r.leverage) {
    j["leverage_estimate"] = {{"attempts", r.leverage->attempts},
                              {"tree_fallback", r.leverage->used_tree_fallback},
                              {"subsample_edges", r.leverage->subsample_edges},
                              {"jl_rows", r.leverage->jl_rows}};
  }
  j["chain"] = {{"depth", r.depth},
                {"base_vertices", r.base_vertices},
                {"base_edges", r.base_edges},
                {"levels", levels_json(r.levels, timings)}};
  if (mode == "solve") {
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["rhs_projection"] = r.projection;
  }
  j["rebuilds"] = r.rebuilds;
  j["seed"] = r.seed;
  if (timings) {
    j["timing"] = {{"build_seconds", r.build_seconds}, {"solve_seconds", r.solve_seconds}, {"wall_seconds", wall_seconds}};
  }
  return j;
}

inline ordered_json schur_report_json(const SchurResult& r, std::size_t n, std::size_t m, std::size_t terminals,
                                      const SchurConfig& cfg, bool deterministic, int threads, double wall_seconds) {
  ordered_json j;
  j["mode"] = "schur";
  j["input"] = {{"vertices", n}, {"edges", m}, {"terminals", terminals}};
  j["config"] = {{"epsilon", cfg.epsilon},       {"alpha_c0", cfg.alpha_c0}, {"seed", cfg.seed},
                 {"deterministic", deterministic}, {"threads", threads}};
  j["alpha_inverse"] = r.alpha_inverse;
  j["multi_edges"] = r.input_multi_edges;
  j["output_edges"] = r.graph.num_edges();
  j["depth"] = r.depth;
  j["levels"] = levels_json(r.levels, !deterministic);
  j["rebuilds"] = r.rebuilds;
  if (!deterministic) j["timing"] = {{"wall_seconds", wall_seconds}};
  return j;
}

}  // namespace parlap::cli
