#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace moea {

// Structured (Das-Dennis) reference points: every composition of p into M
// non-negative parts, divided by p. Points are kept in ascending
// lexicographic order of their coordinates.
class ReferencePointSet {
public:
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t divisions() const noexcept { return divisions_; }
    std::size_t size() const noexcept { return compositions_.size() / dimension_; }

    std::span<const double> point(std::size_t index) const noexcept {
        return {coordinates_.data() + index * dimension_, dimension_};
    }
    // Integer coordinates, i.e. point(index) * p.
    std::span<const int> composition(std::size_t index) const noexcept {
        return {compositions_.data() + index * dimension_, dimension_};
    }
    // Position of a composition in the lattice order. The parts must be
    // non-negative and sum to p.
    std::size_t index_of(std::span<const int> composition) const;

    // Indices of every point whose reference line is at minimal perpendicular
    // distance from v, in lattice order. A single entry is the common case;
    // more than one means an exact tie.
    std::vector<std::size_t> nearest(std::span<const double> v) const;
    // Same result as nearest(), computed by scanning every point.
    std::vector<std::size_t> nearest_exhaustive(std::span<const double> v) const;

private:
    friend ReferencePointSet generate_reference_points(std::size_t m, std::size_t p);

    std::size_t dimension_ = 0;
    std::size_t divisions_ = 0;
    std::vector<int> compositions_;
    std::vector<double> coordinates_;
};

// C(p + M - 1, M - 1).
std::size_t reference_point_count(std::size_t m, std::size_t p);

// Throws InvalidParameter for M < 2 or p = 0.
ReferencePointSet generate_reference_points(std::size_t m, std::size_t p);

// Distance from v to the line through the origin and r. Throws
// InvalidParameter if r is the zero vector or the dimensions differ.
double perpendicular_distance(std::span<const double> v, std::span<const double> r);

// Angle in [0, pi] between two non-zero vectors.
double angle_between(std::span<const double> u, std::span<const double> v);

} // namespace moea
