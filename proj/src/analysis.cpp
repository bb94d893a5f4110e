#include "moea/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "moea/errors.hpp"
#include "moea/refpoints.hpp"

namespace moea {
namespace {

std::optional<std::vector<std::int64_t>> integer_key(const ObjectiveVector& v) {
    std::vector<std::int64_t> key;
    key.reserve(v.size());
    for (double x : v) {
        const double rounded = std::nearbyint(x);
        if (rounded != x) {
            return std::nullopt;
        }
        key.push_back(static_cast<std::int64_t>(rounded));
    }
    return key;
}

} // namespace

FrontIndex::FrontIndex(std::span<const ObjectiveVector> front) : values_(front.begin(), front.end()) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        auto key = integer_key(values_[i]);
        if (!key) {
            throw InvalidParameter("FrontIndex: front values must be integral");
        }
        if (!lookup_.emplace(std::move(*key), i).second) {
            throw InvalidParameter("FrontIndex: duplicate front value");
        }
    }
}

std::optional<std::size_t> FrontIndex::find(const ObjectiveVector& v) const {
    auto key = integer_key(v);
    if (!key) {
        return std::nullopt;
    }
    auto it = lookup_.find(*key);
    if (it == lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

CoveredSet coverage(std::span<const ObjectiveVector> population, const FrontIndex& front) {
    std::vector<bool> hit(front.size(), false);
    for (const auto& v : population) {
        if (auto index = front.find(v)) {
            hit[*index] = true;
        }
    }
    CoveredSet covered;
    for (std::size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) {
            covered.push_back(i);
        }
    }
    return covered;
}

CoveredSet detect_loss(const CoveredSet& previous, const CoveredSet& current) {
    CoveredSet lost;
    std::set_difference(previous.begin(), previous.end(), current.begin(), current.end(),
                        std::back_inserter(lost));
    return lost;
}

CoverageTracker::CoverageTracker(std::size_t run_id, const FrontIndex& front)
    : run_id_(run_id), front_(&front) {}

RunRecord CoverageTracker::observe(std::size_t iteration, std::span<const ObjectiveVector> population,
                                   double wall_seconds) {
    CoveredSet current = coverage(population, *front_);
    RunRecord record;
    record.run_id = run_id_;
    record.iteration = iteration;
    record.front_size = front_->size();
    record.covered = current.size();
    record.wall_seconds = wall_seconds;
    if (started_) {
        record.lost = detect_loss(covered_, current);
        if (!record.lost.empty()) {
            ++losses_;
        }
        record.new_covered = detect_loss(current, covered_).size();
    } else {
        record.new_covered = current.size();
        started_ = true;
    }
    record.losses_cumulative = losses_;
    covered_ = std::move(current);
    return record;
}

double association_angle_bound(std::size_t p) {
    const double pp = static_cast<double>(p);
    return std::acos(std::max(-1.0, 1.0 - 18.0 / (pp * pp)));
}

double pairwise_angle_bound(std::size_t n) {
    const double nn = static_cast<double>(n);
    return std::acos(1.0 - 1.0 / (6.0 * nn * nn));
}

AngleReport verify_unique_association(std::size_t n, std::size_t p) {
    if (n == 0 || n % 2 != 0) {
        throw InvalidParameter("verify_unique_association: n must be positive and even");
    }
    if (p == 0) {
        throw InvalidParameter("verify_unique_association: p must be positive");
    }
    const auto front = pareto_front_3omm(n);
    const auto points = generate_reference_points(3, p);
    const double half = static_cast<double>(n / 2);
    const double full = static_cast<double>(n);

    std::vector<ObjectiveVector> normalized;
    normalized.reserve(front.size());
    for (const auto& v : front) {
        normalized.push_back({v[0] / full, v[1] / half, v[2] / half});
    }

    AngleReport report;
    report.n = n;
    report.p = p;
    std::vector<std::size_t> reference(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        const auto ties = points.nearest(normalized[i].values());
        report.ties = report.ties || ties.size() > 1;
        reference[i] = ties.front();
        report.max_assoc_angle = std::max(
            report.max_assoc_angle, angle_between(normalized[i].values(), points.point(reference[i])));
    }

    report.min_pairwise_angle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        for (std::size_t k = i + 1; k < normalized.size(); ++k) {
            report.min_pairwise_angle = std::min(
                report.min_pairwise_angle, angle_between(normalized[i].values(), normalized[k].values()));
        }
    }

    std::vector<std::size_t> sorted = reference;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const auto range = std::equal_range(sorted.begin(), sorted.end(), reference[i]);
        if (range.second - range.first > 1) {
            ++report.collisions;
        }
    }
    report.separated = report.min_pairwise_angle > 2.0 * report.max_assoc_angle;
    return report;
}

std::size_t divisions_lower_bound(std::size_t n) {
    std::size_t p = 0;
    while (2 * p * p < n * n) {
        ++p;
    }
    return p;
}

MinimalPResult minimal_p_search(std::size_t n, std::size_t p_first, std::size_t p_last) {
    if (p_first > p_last) {
        throw InvalidParameter("minimal_p_search: empty range");
    }
    MinimalPResult result;
    result.lower_bound = divisions_lower_bound(n);
    for (std::size_t p = std::max<std::size_t>(p_first, 1); p <= p_last; ++p) {
        if (reference_point_count(3, p) < (n / 2 + 1) * (n / 2 + 1)) {
            continue;  // fewer points than front values: collisions are certain
        }
        auto report = verify_unique_association(n, p);
        if (report.collisions == 0) {
            result.p = p;
            result.report = report;
            break;
        }
    }
    return result;
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary summary;
    summary.count = samples.size();
    if (samples.empty()) {
        return summary;
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    summary.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    const std::size_t mid = sorted.size() / 2;
    summary.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
    summary.max = sorted.back();
    return summary;
}

double rank_sum_p_value(std::span<const double> larger, std::span<const double> smaller) {
    if (larger.empty() || smaller.empty()) {
        throw InvalidParameter("rank_sum_p_value: both samples must be non-empty");
    }
    std::vector<double> pooled(larger.begin(), larger.end());
    pooled.insert(pooled.end(), smaller.begin(), smaller.end());
    const std::size_t total = pooled.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    // doubled mid-ranks keep everything integral
    std::vector<std::size_t> rank2(total);
    for (std::size_t pos = 0; pos < total;) {
        std::size_t end = pos;
        while (end < total && pooled[order[end]] == pooled[order[pos]]) {
            ++end;
        }
        for (std::size_t q = pos; q < end; ++q) {
            rank2[order[q]] = pos + end + 1;  // 2 * ((pos + 1 + end) / 2)
        }
        pos = end;
    }

    const std::size_t pick = larger.size();
    std::size_t observed = 0;
    for (std::size_t i = 0; i < pick; ++i) {
        observed += rank2[i];
    }
    const std::size_t max_sum = std::accumulate(rank2.begin(), rank2.end(), std::size_t{0});
    // ways[k][s]: subsets of size k with doubled rank sum s
    std::vector<std::vector<double>> ways(pick + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t k = std::min(pick, i + 1); k >= 1; --k) {
            for (std::size_t s = max_sum; s >= rank2[i]; --s) {
                ways[k][s] += ways[k - 1][s - rank2[i]];
                if (s == rank2[i]) {
                    break;
                }
            }
        }
    }
    double extreme = 0.0;
    double all = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        all += ways[pick][s];
        if (s >= observed) {
            extreme += ways[pick][s];
        }
    }
    return extreme / all;
}

} // namespace moea
