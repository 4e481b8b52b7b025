#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parlap/alpha_bound.hpp"
#include "parlap/chain.hpp"
#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/multigraph.hpp"
#include "parlap/richardson.hpp"

namespace parlap {

struct SolverConfig {
  double epsilon = 1e-6;
  double delta = 1.0;
  double alpha_c0 = 1.0;
  /// Overrides ceil(alpha_c0 ln^2 n) when set.
  std::optional<double> alpha_inverse;
  BoundingMode bounding_mode = BoundingMode::Naive;
  double K = 4.0;
  std::size_t jl_rows = 0;
  std::uint64_t seed = 0;
  /// 0 keeps the current OpenMP setting.
  int threads = 0;
  bool deterministic = false;
  /// Fresh-seed rebuilds allowed after a numerical failure.
  std::size_t max_rebuilds = 3;
  std::size_t walk_cap = 0;
};

/// ceil(c0 ln^2 n), at least 1.
inline double default_alpha_inverse(std::size_t n, double c0 = 1.0) {
  if (!(c0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha constant must be positive");
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  return std::max(1.0, std::ceil(c0 * ln * ln));
}

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 0.5))
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1/2)");
  if (!(cfg.delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be positive");
  if (!(cfg.alpha_c0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha constant must be positive");
  if (cfg.alpha_inverse && !(*cfg.alpha_inverse >= 1.0))
    throw Error(ErrorCode::InvalidConfig, "alpha inverse must be at least 1");
  if (cfg.bounding_mode == BoundingMode::Estimate && !(cfg.K >= 1.0))
    throw Error(ErrorCode::InvalidConfig, "K must be at least 1");
}

inline void apply_execution(const SolverConfig& cfg) {
  set_thread_count(cfg.threads);
  set_deterministic(cfg.deterministic);
}

namespace detail {

inline bool retryable(ErrorCode code) {
  return code == ErrorCode::WalkCapExceeded || code == ErrorCode::Disconnected || code == ErrorCode::Internal ||
         code == ErrorCode::SingularBlock;
}

/// Attempt a uses derive_seed(seed, 0xc4a1, a).
inline FactorizationChain<> build_chain_with_retries(const WeightedMultiGraph& h, ChainOptions options,
                                                     std::size_t max_rebuilds, std::size_t first_attempt,
                                                     std::size_t* attempt_used) {
  const std::uint64_t root = options.seed;
  for (std::size_t a = first_attempt;; ++a) {
    options.seed = derive_seed(root, 0xc4a1ULL, a);
    try {
      if (attempt_used) *attempt_used = a;
      return build_chain(h, options);
    } catch (const Error& e) {
      if (!retryable(e.code()) || a >= max_rebuilds) {
        if (retryable(e.code()))
          throw Error(ErrorCode::RetriesExhausted, "chain construction failed " + std::to_string(a + 1) +
                                                       " times; last error: " + e.what());
        throw;
      }
    }
  }
}

}  // namespace detail

struct SolveReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t multi_edges = 0;
  double alpha_inverse = 0.0;
  BoundingMode bounding_mode = BoundingMode::Naive;
  std::optional<LeverageEstimate> leverage;
  std::size_t depth = 0;
  std::vector<ChainLevelStats> levels;
  std::size_t base_vertices = 0;
  std::size_t base_edges = 0;
  std::size_t iterations = 0;
  /// ||L x - b||_2 / ||b||_2 for the projected b.
  double residual = 0.0;
  /// Mean removed from b to make it orthogonal to the all-ones vector.
  double projection = 0.0;
  std::size_t rebuilds = 0;
  std::uint64_t seed = 0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Builds the factorization chain once; every solve() reuses it as the
/// preconditioner of a Richardson iteration against the original Laplacian.
class LaplacianSolver {
 public:
  LaplacianSolver(WeightedMultiGraph g, SolverConfig cfg) : g_(std::move(g)), cfg_(std::move(cfg)) {
    validate(cfg_);
    apply_execution(cfg_);
    if (!g_.is_connected()) throw Error(ErrorCode::Disconnected, "input graph is not connected");
    const auto started = std::chrono::steady_clock::now();
    alpha_inverse_ = cfg_.alpha_inverse ? *cfg_.alpha_inverse : default_alpha_inverse(g_.num_vertices(), cfg_.alpha_c0);
    if (g_.num_vertices() > 1) {
      split_ = make_split();
      build(0);
    }
    build_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }

  const WeightedMultiGraph& graph() const noexcept { return g_; }
  const SolverConfig& config() const noexcept { return cfg_; }
  const FactorizationChain<>& chain() const noexcept { return chain_; }
  double alpha_inverse() const noexcept { return alpha_inverse_; }
  std::size_t rebuilds() const noexcept { return attempt_; }

  /// Solves L x = b to relative L-norm error epsilon. A non-finite result or a
  /// residual above ||b|| triggers a rebuild with the next seed.
  Vector solve(std::span<const double> b, SolveReport* report = nullptr, const RichardsonObserver& observer = {}) {
    const std::size_t n = g_.num_vertices();
    if (b.size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "right-hand side has " + std::to_string(b.size()) + " entries for " + std::to_string(n) + " vertices");
    const auto started = std::chrono::steady_clock::now();
    Vector rhs(b.begin(), b.end());
    const double projection = project_out_ones(rhs);
    const double b_norm = norm2(rhs);

    Vector x(n, 0.0);
    std::size_t iterations = 0;
    double residual = 0.0;
    if (n > 1 && b_norm > 0.0) {
      for (;;) {
        RichardsonResult r = run(rhs, observer);
        residual = residual_of(r.x, rhs, b_norm);
        if (std::isfinite(residual) && residual <= 1.0) {
          x = std::move(r.x);
          iterations = r.iterations;
          break;
        }
        if (attempt_ >= cfg_.max_rebuilds)
          throw Error(ErrorCode::RetriesExhausted, "solve diverged after " + std::to_string(attempt_ + 1) +
                                                       " chain builds (relative residual " + std::to_string(residual) +
                                                       ")");
        build(attempt_ + 1);
      }
    } else if (n > 1) {
      iterations = richardson_iteration_count(cfg_.delta, cfg_.epsilon);
    }

    if (report) {
      fill_report(*report);
      report->iterations = iterations;
      report->residual = residual;
      report->projection = projection;
      report->solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    return x;
  }

  void fill_report(SolveReport& report) const {
    report.vertices = g_.num_vertices();
    report.edges = g_.num_edges();
    report.multi_edges = split_.num_edges();
    report.alpha_inverse = alpha_inverse_;
    report.bounding_mode = cfg_.bounding_mode;
    report.leverage = leverage_;
    report.depth = chain_.depth();
    report.levels.clear();
    for (const ChainLevel& level : chain_.levels()) report.levels.push_back(level.stats);
    report.base_vertices = chain_.base_graph().num_vertices();
    report.base_edges = chain_.base_graph().num_edges();
    report.rebuilds = attempt_;
    report.seed = cfg_.seed;
    report.build_seconds = build_seconds_;
  }

 private:
  WeightedMultiGraph make_split() {
    BoundingConfig bc;
    bc.alpha_inverse = alpha_inverse_;
    bc.mode = cfg_.bounding_mode;
    bc.K = cfg_.K;
    bc.jl_rows = cfg_.jl_rows;
    bc.seed = derive_seed(cfg_.seed, 0xb0dULL);
    if (bc.mode == BoundingMode::Naive) return split_naive(g_, alpha_inverse_);

    // Sketch solves always split naively, so estimation never recurses.
    const SolverConfig inner_cfg = [&] {
      SolverConfig c = cfg_;
      c.bounding_mode = BoundingMode::Naive;
      c.alpha_inverse.reset();
      c.epsilon = bc.jl_solve_epsilon;
      c.threads = 0;
      c.seed = derive_seed(cfg_.seed, 0x1e5e5ULL);
      return c;
    }();
    SolverFactory factory = [inner_cfg](const WeightedMultiGraph& sparse) -> LinearOperator {
      auto solver = std::make_shared<LaplacianSolver>(sparse, inner_cfg);
      return [solver](std::span<const double> in, std::span<double> out) {
        const Vector x = solver->solve_const(in);
        std::copy(x.begin(), x.end(), out.begin());
      };
    };
    LeverageEstimate est;
    WeightedMultiGraph h = make_alpha_bounded(g_, bc, factory, &est);
    leverage_ = std::move(est);
    return h;
  }

  void build(std::size_t first_attempt) {
    ChainOptions options;
    options.seed = cfg_.seed;
    options.walk_cap = cfg_.walk_cap;
    chain_ = detail::build_chain_with_retries(split_, options, cfg_.max_rebuilds, first_attempt, &attempt_);
  }

  RichardsonResult run(std::span<const double> rhs, const RichardsonObserver& observer) const {
    const LinearOperator apply_a = [this](std::span<const double> in, std::span<double> out) {
      g_.apply_laplacian(in, out);
    };
    const LinearOperator apply_b = [this](std::span<const double> in, std::span<double> out) { chain_.apply(in, out); };
    return precon_richardson(apply_a, apply_b, rhs, cfg_.delta, cfg_.epsilon, observer);
  }

  double residual_of(std::span<const double> x, std::span<const double> rhs, double b_norm) const {
    Vector lx = g_.apply_laplacian(x);
    for (std::size_t i = 0; i < lx.size(); ++i) lx[i] -= rhs[i];
    return norm2(lx) / b_norm;
  }

  /// Thread-safe solve without rebuilds, used for concurrent sketch solves.
  Vector solve_const(std::span<const double> b) const {
    Vector rhs(b.begin(), b.end());
    project_out_ones(rhs);
    if (g_.num_vertices() <= 1 || norm2(rhs) == 0.0) return Vector(b.size(), 0.0);
    return run(rhs, {}).x;
  }

  WeightedMultiGraph g_;
  SolverConfig cfg_;
  double alpha_inverse_ = 1.0;
  WeightedMultiGraph split_;
  std::optional<LeverageEstimate> leverage_;
  FactorizationChain<> chain_;
  std::size_t attempt_ = 0;
  double build_seconds_ = 0.0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// One-shot solve of L_G x = b.
inline SolveResult solve(const WeightedMultiGraph& g, std::span<const double> b, const SolverConfig& cfg = {}) {
  LaplacianSolver solver(g, cfg);
  SolveResult r;
  r.x = solver.solve(b, &r.report);
  return r;
}

}  // namespace parlap
