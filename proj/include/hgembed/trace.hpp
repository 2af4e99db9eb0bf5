#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgembed/embedding.hpp"
#include "hgembed/error.hpp"
#include "hgembed/log.hpp"

namespace hgembed {

// State after one completed iteration.
struct TraceRecord {
  double loss_smooth = 0.0;
  double loss_hard = 0.0;
  double radius = 0.0;
  double tau = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  const TraceRecord& back() const { return records.back(); }
};

// Max iterations, or hard loss exactly 0, or relative change of the smooth loss
// below tolerance across a window of iterations.
struct StopRule {
  Index max_iterations = 1000;
  bool stop_at_zero_loss = true;
  double relative_tolerance = 1e-10;
  Index window = 50;

  bool should_stop(const RunTrace& trace) const {
    if (static_cast<Index>(trace.size()) >= max_iterations) return true;
    if (trace.empty()) return false;
    if (stop_at_zero_loss && trace.back().loss_hard == 0.0) return true;
    if (window > 0 && static_cast<Index>(trace.size()) > window) {
      const double now = trace.back().loss_smooth;
      const double then = trace.records[trace.size() - 1 - static_cast<std::size_t>(window)].loss_smooth;
      if (std::abs(then - now) <= relative_tolerance * std::max(std::abs(then), 1e-300)) return true;
    }
    return false;
  }
};

inline constexpr double kDivergenceLoss = 1e3;
inline constexpr double kParamFloor = 1e-6;

// Thrown when the smooth loss exceeds kDivergenceLoss; carries the trace so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, RunTrace trace) : Error(what), trace_(std::move(trace)) {}

  const RunTrace& trace() const noexcept { return trace_; }

 private:
  RunTrace trace_;
};

namespace detail {

// Radius and sharpness must stay positive; non-positive or non-finite values are
// floored at kParamFloor. Logged only when `previous` was still above the floor.
inline double clamp_param(double value, double previous, const char* name) {
  if (value > kParamFloor && std::isfinite(value)) return value;
  if (previous > kParamFloor)
    log(LogLevel::warning, std::string(name) + " driven to " + std::to_string(value) + "; clamped to 1e-6");
  return kParamFloor;
}

}  // namespace detail

struct RunResult {
  Embedding embedding;
  double radius = 0.0;
  double tau = 0.0;
  RunTrace trace;
  double loss_hard = 0.0;    // at the returned state
  double loss_smooth = 0.0;  // at the returned state
  Matrix weights;            // final bipartite weights (GDSE only)

  Index iterations() const noexcept { return static_cast<Index>(trace.size()); }
};

}  // namespace hgembed
