#pragma once

#include <chrono>
#include <cmath>

#include "hypertree/solvers.hpp"

namespace hypertree::detail {

// Scores closer than this are ties and fall through to the structural
// tie-break.
inline constexpr double kTieTolerance = 1e-12;

enum class Cmp { Worse, Tie, Better };

inline Cmp compare_scores(double candidate, double incumbent) {
    if (candidate > incumbent + kTieTolerance) return Cmp::Better;
    if (candidate < incumbent - kTieTolerance) return Cmp::Worse;
    return Cmp::Tie;
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace hypertree::detail
