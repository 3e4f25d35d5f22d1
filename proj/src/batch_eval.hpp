#pragma once

#include <exception>
#include <thread>
#include <vector>

#include "swarm_lssvm/swarm.hpp"

namespace swarm_lssvm::detail {

/// Evaluates every position, splitting the batch across `threads` workers.
/// Values come back in input order. If any evaluation throws or returns a
/// non-finite value, the lowest-index failure is reported.
std::vector<double> evaluate_batch(const Objective& objective, const std::vector<std::vector<double>>& positions,
                                   int threads);

} // namespace swarm_lssvm::detail
