#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "moea/problems.hpp"

namespace moea {

// Exact lookup of integer objective tuples in an enumerated Pareto front.
class FrontIndex {
public:
    explicit FrontIndex(std::span<const ObjectiveVector> front);

    std::size_t size() const noexcept { return values_.size(); }
    const ObjectiveVector& value(std::size_t index) const { return values_.at(index); }
    // Index of v in the front, or nullopt if v is not integral or not on it.
    std::optional<std::size_t> find(const ObjectiveVector& v) const;

private:
    std::vector<ObjectiveVector> values_;
    std::map<std::vector<std::int64_t>, std::size_t> lookup_;
};

// Sorted front indices represented in the population.
using CoveredSet = std::vector<std::size_t>;

CoveredSet coverage(std::span<const ObjectiveVector> population, const FrontIndex& front);

// previous \ current.
CoveredSet detect_loss(const CoveredSet& previous, const CoveredSet& current);

// One line of a run's trace.
struct RunRecord {
    std::size_t run_id = 0;
    std::size_t iteration = 0;
    std::size_t covered = 0;
    std::size_t front_size = 0;
    std::size_t new_covered = 0;
    std::size_t losses_cumulative = 0;  // iterations in which a covered value vanished
    CoveredSet lost;                    // values lost in this iteration
    double wall_seconds = 0.0;
};

// Tracks coverage across iterations of one run and produces its records.
class CoverageTracker {
public:
    CoverageTracker(std::size_t run_id, const FrontIndex& front);

    RunRecord observe(std::size_t iteration, std::span<const ObjectiveVector> population,
                      double wall_seconds);

    bool full() const noexcept { return covered_.size() == front_->size(); }
    std::size_t losses() const noexcept { return losses_; }
    const CoveredSet& covered() const noexcept { return covered_; }

private:
    std::size_t run_id_;
    const FrontIndex* front_;
    CoveredSet covered_;
    std::size_t losses_ = 0;
    bool started_ = false;
};

struct AngleReport {
    std::size_t n = 0;
    std::size_t p = 0;
    double min_pairwise_angle = 0.0;  // between distinct normalized front values
    double max_assoc_angle = 0.0;     // from a front value to its reference point
    bool separated = false;           // min_pairwise_angle > 2 * max_assoc_angle
    std::size_t collisions = 0;       // front values sharing their point with another value
    bool ties = false;                // some value was equidistant to several points
};

// Normalizes all 3-OMM front values with ideal (0,0,0) and nadir
// (n, n/2, n/2), associates each with its nearest reference point for p
// divisions (lowest lattice index on a tie) and measures the angles.
AngleReport verify_unique_association(std::size_t n, std::size_t p);

// Closed-form angles from the unique-association argument.
double association_angle_bound(std::size_t p);  // acos(1 - 18/p^2)
double pairwise_angle_bound(std::size_t n);     // acos(1 - 1/(6 n^2))

struct MinimalPResult {
    std::optional<std::size_t> p;  // least collision-free p in the range
    std::size_t lower_bound = 0;   // ceil(n / sqrt(2))
    std::optional<AngleReport> report;
};

// Scans p = p_first .. p_last upwards. Throws InvalidParameter on an empty range.
MinimalPResult minimal_p_search(std::size_t n, std::size_t p_first, std::size_t p_last);

// ceil(n / sqrt(2)) computed exactly: least p with 2 p^2 >= n^2.
std::size_t divisions_lower_bound(std::size_t n);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
};

SampleSummary summarize(std::span<const double> samples);

// Exact one-sided permutation p-value of the rank-sum statistic for the
// alternative "values in `larger` tend to exceed those in `smaller`".
// Ties receive mid-ranks.
double rank_sum_p_value(std::span<const double> larger, std::span<const double> smaller);

} // namespace moea
