#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nwdag/builders.hpp"

namespace nwdag {

// How parameters are pulled back into the ball ||theta||_P <= Q.
//   OutputLayer: every arc into the sink is Param; scaling them scales both f
//                and the path norm linearly.
//   Layered:     every source-to-sink path crosses the same number k >= 1 of
//                Param edges; scaling all Param weights by c scales both by c^k.
//   Unsupported: neither holds.
enum class ProjectionMode { OutputLayer, Layered, Unsupported };

struct Projection {
  ProjectionMode mode = ProjectionMode::Unsupported;
  std::size_t depth = 0;  // k, Layered only
  std::string diagnostic;
};

Projection projection_mode(const NonlinearDag& dag);

// theta with the Param arcs into the sink multiplied by factor.
ParamVector scale_output_layer(const NonlinearDag& dag, const ParamVector& theta, double factor);

// Rescales theta onto ||theta||_P <= q when it lies outside (unchanged
// otherwise). Throws DomainError when the mode is Unsupported.
ParamVector project_to_ball(const NonlinearDag& dag, const Projection& projection, const ParamVector& theta, double q);

struct RademacherBudget {
  std::size_t steps = 60;
  std::size_t restarts = 2;
  double step_size = 0.5;  // relative to the largest initial weight
};

struct RademacherEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t trials_used = 0;
  std::size_t rejected = 0;
  std::string diagnostic;  // why trials were rejected
  std::vector<double> per_trial;
};

// Mean over `trials` sign vectors tau of the best value of (1/n) sum_i tau_i f(x_i; theta)
// found by projected normalized-gradient ascent inside ||theta||_P <= q. Every
// evaluated theta is feasible, so the result is a lower estimate of the
// empirical Rademacher complexity. Trials run in parallel with seeds drawn
// from rng up front.
RademacherEstimate rademacher_estimate(const std::vector<std::vector<double>>& xs, const NonlinearDag& skeleton, double q, std::size_t trials, const RademacherBudget& budget, Rng& rng);

}  // namespace nwdag
