#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parlap/parlap.hpp"
#include "report.hpp"

namespace {

using namespace parlap;

struct Options {
  std::string mode;
  std::string graph;
  std::string format = "edgelist";
  std::string rhs;
  std::string terminals;
  std::optional<double> epsilon;
  double alpha_c0 = 1.0;
  std::optional<double> alpha_inverse;
  std::string bounding_mode = "naive";
  double K = 4.0;
  std::size_t jl_rows = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  bool deterministic = false;
  std::string report;
  std::string output;
  std::string demo;
  std::size_t demo_size = 1000;
};

WeightedMultiGraph load_graph(const Options& o) {
  if (!o.demo.empty()) {
    if (o.demo == "path") return generators::path(o.demo_size);
    if (o.demo == "grid") {
      std::size_t side = 1;
      while ((side + 1) * (side + 1) <= o.demo_size) ++side;
      return generators::grid(side, side);
    }
    return generators::random_regular(o.demo_size, 4, o.seed);
  }
  if (o.graph.empty()) throw Error(ErrorCode::InvalidConfig, "--graph is required (or --demo)");
  if (o.format == "matrixmarket") return io::read_matrix_market(o.graph);
  return io::read_edge_list(o.graph);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  cfg.alpha_c0 = o.alpha_c0;
  cfg.alpha_inverse = o.alpha_inverse;
  cfg.bounding_mode = o.bounding_mode == "estimate" ? BoundingMode::Estimate : BoundingMode::Naive;
  cfg.K = o.K;
  cfg.jl_rows = o.jl_rows;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.deterministic = o.deterministic;
  return cfg;
}

int run(const Options& o) {
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };
  set_thread_count(o.threads);
  set_deterministic(o.deterministic);

  if (o.mode == "solve" && o.rhs.empty() && o.demo.empty())
    throw Error(ErrorCode::InvalidConfig, "--rhs is required in solve mode");
  if (o.mode == "schur" && o.terminals.empty())
    throw Error(ErrorCode::InvalidConfig, "--terminals is required in schur mode");

  const WeightedMultiGraph g = load_graph(o);

  if (o.mode == "schur") {
    SchurConfig cfg;
    cfg.epsilon = o.epsilon.value_or(0.25);
    cfg.alpha_c0 = o.alpha_c0;
    cfg.alpha_inverse = o.alpha_inverse;
    cfg.seed = o.seed;
    const std::vector<VertexId> terminals = io::read_terminals(o.terminals);
    const SchurResult r = approx_schur(g, terminals, cfg);
    std::ostringstream text;
    io::write_schur(text, r.graph, terminals);
    write_text(o.output, text.str());
    if (!o.report.empty())
      write_text(o.report, cli::schur_report_json(r, g.num_vertices(), g.num_edges(), terminals.size(), cfg,
                                                  o.deterministic, o.threads, elapsed())
                                   .dump(2) +
                               "\n");
    return 0;
  }

  const SolverConfig cfg = solver_config(o);
  LaplacianSolver solver(g, cfg);
  SolveReport report;

  if (o.mode == "factor") {
    solver.fill_report(report);
    std::ostringstream text;
    text << "# level vertices edges eliminated\n";
    for (std::size_t k = 0; k < report.levels.size(); ++k)
      text << k << ' ' << report.levels[k].vertices << ' ' << report.levels[k].edges << ' '
           << report.levels[k].eliminated << '\n';
    text << "# base " << report.base_vertices << ' ' << report.base_edges << '\n';
    write_text(o.output, text.str());
    if (!o.report.empty()) write_text(o.report, cli::solve_report_json("factor", report, cfg, elapsed()).dump(2) + "\n");
    return 0;
  }

  std::vector<double> b;
  if (!o.rhs.empty()) {
    b = io::read_vector(o.rhs);
  } else {
    b.assign(g.num_vertices(), 0.0);
    b.front() = 1.0;
    b.back() = -1.0;
  }
  if (b.size() != g.num_vertices())
    throw Error(ErrorCode::DimensionMismatch, "--rhs has " + std::to_string(b.size()) + " entries, graph has " +
                                                  std::to_string(g.num_vertices()) + " vertices");
  const Vector x = solver.solve(b, &report);
  std::ostringstream text;
  io::write_vector(text, x);
  write_text(o.output, text.str());
  if (!o.report.empty()) write_text(o.report, cli::solve_report_json("solve", report, cfg, elapsed()).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Parallel Laplacian solver and Schur complement approximator"};
  app.add_option("--mode", o.mode, "solve, schur or factor")
      ->required()
      ->check(CLI::IsMember({"solve", "schur", "factor"}));
  app.add_option("--graph", o.graph, "input graph file");
  app.add_option("--format", o.format, "edgelist or matrixmarket")->check(CLI::IsMember({"edgelist", "matrixmarket"}));
  app.add_option("--rhs", o.rhs, "right-hand side, one value per line (solve)");
  app.add_option("--terminals", o.terminals, "terminal vertex ids, one per line (schur)");
  app.add_option("--epsilon", o.epsilon, "target accuracy (solve default 1e-6, schur default 0.25)");
  app.add_option("--alpha-c0", o.alpha_c0, "constant c0 in alpha^{-1} = ceil(c0 ln^2 n)");
  app.add_option("--alpha-inverse", o.alpha_inverse, "explicit alpha^{-1}");
  app.add_option("--bounding-mode", o.bounding_mode, "naive or estimate")->check(CLI::IsMember({"naive", "estimate"}));
  app.add_option("--K", o.K, "subsample factor for leverage estimation");
  app.add_option("--jl-rows", o.jl_rows, "sketch rows for leverage estimation (0 = automatic)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--threads", o.threads, "worker threads (0 = OpenMP default)");
  app.add_flag("--deterministic", o.deterministic, "bit-reproducible reductions");
  app.add_option("--report", o.report, "write a JSON run report here");
  app.add_option("--output", o.output, "output file (default stdout)");
  app.add_option("--demo", o.demo, "built-in graph instead of --graph")->check(CLI::IsMember({"path", "grid", "regular"}));
  app.add_option("--demo-size", o.demo_size, "vertex count of the demo graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    return run(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
