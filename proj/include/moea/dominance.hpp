#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moea/problems.hpp"

namespace moea {

enum class Dominance {
    none,   // a is worse than b in at least one objective
    weak,   // a is at least as good as b everywhere, and equal everywhere
    strict  // a is at least as good everywhere and better somewhere
};

// Throws InvalidParameter when the dimensions differ.
Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b, Sense sense);

// Partition of a population into non-domination ranks. Each front lists
// indices into the sorted population, in input order.
struct RankedFronts {
    std::vector<std::vector<std::size_t>> fronts;

    std::size_t front_count() const noexcept { return fronts.size(); }
    std::size_t total_size() const noexcept;
    // Rank (0-based front index) of every individual.
    std::vector<std::size_t> ranks(std::size_t population_size) const;
};

// Deb et al.'s domination-count sort. Identical objective vectors are
// collapsed first, so the quadratic part runs over distinct values only.
// Throws InvalidParameter on an empty population.
RankedFronts fast_nondominated_sort(std::span<const ObjectiveVector> population, Sense sense);

} // namespace moea
