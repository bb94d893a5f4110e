#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moea/genome.hpp"
#include "moea/problems.hpp"
#include "moea/refpoints.hpp"

namespace moea {

// Reference point and perpendicular distance of each individual, indexed
// like the normalized objective values passed to associate().
struct Association {
    std::vector<std::size_t> reference;
    std::vector<double> distance;
};

// Associates every vector with the reference point whose line through the
// origin is closest. Exact ties are broken uniformly at random, once per
// distinct vector (first occurrence in input order draws, copies reuse the
// draw), consuming the source only when a tie occurs. Throws InvalidInput on
// a non-finite value.
Association associate(std::span<const ObjectiveVector> normalized, const ReferencePointSet& points,
                      RandomSource& rng);

// Niching selection of k members of the critical front. `selected` holds the
// population indices that already survive, `critical` the candidates; both
// index into `association`. Returns the chosen critical-front indices.
// Throws InvalidParameter unless 0 < k <= critical.size().
std::vector<std::size_t> niching_select(std::span<const std::size_t> selected,
                                        std::span<const std::size_t> critical, std::size_t k,
                                        const ReferencePointSet& points,
                                        const Association& association, RandomSource& rng);

// Crowding distance of each member of `front` (same order). Boundary members
// of every objective get infinity. The front is visited in the given order,
// so callers shuffle beforehand if they want unbiased tie handling.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives,
                                      std::span<const std::size_t> front);

// NSGA-II truncation of the critical front: shuffle, compute crowding
// distances, keep the k largest (stable on the shuffled order). Throws
// InvalidParameter unless 0 < k <= front.size().
std::vector<std::size_t> crowding_distance_select(std::span<const ObjectiveVector> objectives,
                                                  std::span<const std::size_t> front,
                                                  std::size_t k, RandomSource& rng);

} // namespace moea
