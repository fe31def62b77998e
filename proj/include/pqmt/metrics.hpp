#pragma once

#include "pqmt/fock.hpp"

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pqmt {

/// Closed input-output curve sampled over one steady-state drive period.
struct LoopCurve {
    std::vector<std::pair<double, double>> points;
    int half_cycle_split = 0;  ///< index of the first second-half sample
};

/// L1-norm coherence: sum of |off-diagonal| density-matrix entries in the
/// Fock basis. Works for any mode count.
double l1_coherence(const MixedState& rho);
double l1_coherence(const PureState& psi);

/// Hysteresis loop area. The closed polyline is split at its self-intersection
/// points and the absolute shoelace areas of the subloops are summed, so a
/// figure-eight counts both lobes instead of cancelling.
double loop_area(std::span<const std::pair<double, double>> points);
double loop_area(const LoopCurve& curve);

/// Plain signed shoelace area (kept for convention comparisons).
double signed_loop_area(std::span<const std::pair<double, double>> points);

/// Mean pairwise L2 distance per vector: out[i] = sum_j ||T_i - T_j|| / D.
std::vector<double> separability(const std::vector<std::vector<double>>& vectors);

/// Build the curve of the final cycle of a periodic run and return its area.
/// Records must carry .cycle and .first_half fields.
template <class Record, class FieldX, class FieldY>
LoopCurve curve_from_records(const std::vector<Record>& records, FieldX x, FieldY y) {
    if (records.empty()) throw std::invalid_argument("curve_from_records: no records");
    int last_cycle = 0;
    for (const auto& r : records) last_cycle = std::max(last_cycle, r.cycle);
    LoopCurve curve;
    bool split_found = false;
    for (const auto& r : records) {
        if (r.cycle != last_cycle) continue;
        if (!r.first_half && !split_found) {
            curve.half_cycle_split = static_cast<int>(curve.points.size());
            split_found = true;
        }
        curve.points.emplace_back(x(r), y(r));
    }
    return curve;
}

template <class Record, class FieldX, class FieldY>
double area_from_records(const std::vector<Record>& records, FieldX x, FieldY y) {
    return loop_area(curve_from_records(records, x, y));
}

}  // namespace pqmt
