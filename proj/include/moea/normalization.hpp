#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "moea/dominance.hpp"
#include "moea/problems.hpp"

namespace moea {

struct NormalizationConfig {
    // Lower threshold for intercepts and for the nadir-ideal gap.
    double epsilon_nad = 1e-6;
    // Weight of the non-target objectives in the achievement scalarization.
    double asf_off_axis_weight = 1e-6;
    // Pivot magnitude below which the hyperplane solve counts as singular.
    double singular_pivot = 1e-12;
    // When false, a zero nadir-ideal gap raises DegeneratePopulation. When
    // true, the gap falls back to the running worst value, then to 1.
    bool widen_degenerate = false;
};

// Carried between calls of normalize() within one run.
struct NormalizationState {
    ObjectiveVector ideal;  // running per-objective minimum, all generations
    ObjectiveVector worst;  // running per-objective maximum, all generations
    std::vector<ObjectiveVector> extremes;  // previous extreme points; empty before the first call
    ObjectiveVector nadir;  // estimate from the latest call

    bool observed() const noexcept { return ideal.size() > 0; }
};

// Merges the running minimum and maximum with the values in z.
void update_ideal_and_worst(NormalizationState& state, std::span<const ObjectiveVector> z);

// Achievement scalarization max_k (z_k - ideal_k) / w_k with w_k = 1 for
// k == objective and off_axis_weight otherwise.
double achievement_scalarization(const ObjectiveVector& z, const ObjectiveVector& ideal,
                                 std::size_t objective, double off_axis_weight);

// Candidate minimizing the scalarization for `objective`; the first one wins
// on ties. Throws InvalidParameter on an empty candidate list.
ObjectiveVector extreme_point(std::size_t objective, std::span<const ObjectiveVector> candidates,
                              const ObjectiveVector& ideal, double off_axis_weight = 1e-6);

struct Intercepts {
    bool valid = false;
    ObjectiveVector values;  // axis intercepts in the original coordinates
};

// Intercepts of the hyperplane through the ideal-translated extreme points.
Intercepts hyperplane_intercepts(std::span<const ObjectiveVector> extremes,
                                 const ObjectiveVector& ideal, double singular_pivot = 1e-12);

// The map x -> (f(x) - ideal) / (nadir - ideal).
class NormalizedMap {
public:
    NormalizedMap(ObjectiveVector ideal, ObjectiveVector nadir);

    ObjectiveVector operator()(const ObjectiveVector& raw) const;
    const ObjectiveVector& ideal() const noexcept { return ideal_; }
    const ObjectiveVector& nadir() const noexcept { return nadir_; }

private:
    ObjectiveVector ideal_;
    ObjectiveVector nadir_;
};

// Normalization over the individuals listed in `fronts` (the ranks up to and
// including the critical one); `objectives` is indexed by the front entries.
// Updates the running ideal and worst points, recomputes the extreme points
// from the current values and the carried ones, estimates the nadir point
// from the hyperplane intercepts with the two fallbacks, and stores the new
// extremes and nadir in `state`.
NormalizedMap normalize(NormalizationState& state, std::span<const ObjectiveVector> objectives,
                        const RankedFronts& fronts, const NormalizationConfig& config = {});

} // namespace moea
