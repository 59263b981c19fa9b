#pragma once

#include "kkle/linalg.hpp"
#include "kkle/optimizer.hpp"

namespace kkle {

/// Outcome of one divergence estimate, in nats.
template <typename Config>
struct BasicEstimateResult {
  /// Reported value, floored at zero when the estimator is configured to clamp.
  double kl_estimate = 0.0;
  /// Unclamped final-window mean of the optimiser trace.
  double raw_estimate = 0.0;
  /// Set when the inputs admit no information (identical or constant data)
  /// and the optimiser was not run.
  bool degenerate = false;
  OptimizationTrace trace;
  Config config;
  Index n = 0;
  Index m = 0;
};

}  // namespace kkle
