#pragma once

#include <utility>
#include <vector>

#include "zonalsim/clearing.hpp"
#include "zonalsim/redispatch.hpp"

namespace zonalsim {

struct CalibrationConfig {
    double tau_min = 0.05;
    double tau_max = 5.0;
    double tol_rel = 0.02;
    double tol_abs = 10.0;  // MWh
    int max_iterations = 40;
    int grid_points = 16;
    RedispatchOptions redispatch;
};

struct CalibrationResult {
    double tau = 1.0;
    int iterations = 0;
    double achieved_volume = 0.0;  // MWh
    double target_volume = 0.0;    // MWh
    bool converged = false;
    bool non_monotone = false;     // bracket violated, grid scan used
    std::vector<std::pair<double, double>> trace;  // (tau, volume) per evaluation
};

// Matches the national design's balancing volume to target_volume by moving
// the global tuning factor. `national` may be passed when already cleared.
CalibrationResult calibrate(const DayScenario& s, const NetworkTopology& topo,
                            double target_volume, const CalibrationConfig& cfg = {},
                            const ClearingResult* national = nullptr);

}  // namespace zonalsim
