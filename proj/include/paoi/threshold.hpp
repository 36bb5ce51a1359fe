#pragma once

#include <cmath>
#include <limits>

namespace paoi {

// Waiting threshold in seconds; infinity is the first-class
// "wait for the computation to finish" sentinel, never a large stand-in.
struct Threshold {
    double value = 0.0;

    static Threshold wait_for_completion() {
        return {std::numeric_limits<double>::infinity()};
    }
    bool is_wait_for_completion() const { return std::isinf(value) && value > 0.0; }
};

struct OptimizationResult {
    Threshold threshold;
    double paoi = 0.0;
    int iterations = 0;
    // stationarity diagnostic at an interior solution; NaN at boundaries
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;  // objective flat between the boundary candidates
    bool converged = true;
};

}  // namespace paoi
