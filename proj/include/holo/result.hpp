#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

struct Snapshot {
  int epoch = 0;
  Grid<double> amplitude;
  Grid<double> phase;
};

// Common output of every solver: amplitude in [0,1], phase in [-pi, pi],
// plus the per-iteration objective/error trace.
struct ReconstructionResult {
  Grid<double> amplitude;
  Grid<double> phase;
  std::vector<double> loss_history;
  std::vector<Snapshot> snapshots;
  double wall_time_seconds = 0.0;
  std::string method_tag;
};

}  // namespace holo
