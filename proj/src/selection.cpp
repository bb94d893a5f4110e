#include "moea/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "moea/errors.hpp"

namespace moea {

Association associate(std::span<const ObjectiveVector> normalized, const ReferencePointSet& points,
                      RandomSource& rng) {
    if (points.size() == 0) {
        throw InvalidParameter("associate: empty reference point set");
    }
    Association result;
    result.reference.reserve(normalized.size());
    result.distance.reserve(normalized.size());
    // Equal vectors must share their reference point, so a tie is drawn once
    // per distinct vector and reused for its copies.
    std::map<ObjectiveVector, std::size_t> tie_choice;
    for (const auto& v : normalized) {
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw InvalidInput("associate: non-finite normalized objective value");
            }
        }
        const auto ties = points.nearest(v.values());
        std::size_t chosen = ties.front();
        if (ties.size() > 1) {
            auto [it, fresh] = tie_choice.try_emplace(v, 0);
            if (fresh) {
                it->second = ties[rng.below(ties.size())];
            }
            chosen = it->second;
        }
        result.reference.push_back(chosen);
        result.distance.push_back(perpendicular_distance(v.values(), points.point(chosen)));
    }
    return result;
}

namespace {

struct Niche {
    std::size_t reference;
    std::size_t count;                    // selected members associated with this point
    std::vector<std::size_t> candidates;  // unselected critical-front members, front order
};

} // namespace

std::vector<std::size_t> niching_select(std::span<const std::size_t> selected,
                                        std::span<const std::size_t> critical, std::size_t k,
                                        const ReferencePointSet& points,
                                        const Association& association, RandomSource& rng) {
    if (k == 0 || k > critical.size()) {
        throw InvalidParameter("niching_select: need 0 < k <= size of the critical front");
    }
    if (k == critical.size()) {
        return {critical.begin(), critical.end()};
    }

    std::vector<std::size_t> niche_count(points.size(), 0);
    for (auto i : selected) {
        ++niche_count[association.reference.at(i)];
    }

    // Only reference points with candidates can ever contribute; points
    // without any would just be dropped from the active set when drawn.
    std::vector<std::size_t> by_reference(critical.begin(), critical.end());
    std::stable_sort(by_reference.begin(), by_reference.end(),
                     [&](std::size_t lhs, std::size_t rhs) {
                         return association.reference.at(lhs) < association.reference.at(rhs);
                     });
    std::vector<Niche> active;
    for (auto i : by_reference) {
        const std::size_t r = association.reference[i];
        if (active.empty() || active.back().reference != r) {
            active.push_back({r, niche_count[r], {}});
        }
        active.back().candidates.push_back(i);
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::vector<std::size_t> ties;
    while (chosen.size() < k) {
        std::size_t least = std::numeric_limits<std::size_t>::max();
        ties.clear();
        for (std::size_t a = 0; a < active.size(); ++a) {
            if (active[a].count < least) {
                least = active[a].count;
                ties.clear();
            }
            if (active[a].count == least) {
                ties.push_back(a);
            }
        }
        const std::size_t pick = ties.size() == 1 ? ties.front() : ties[rng.below(ties.size())];
        Niche& niche = active[pick];

        std::size_t slot = 0;
        if (niche.count == 0) {
            // closest to the reference line; random among exact ties
            double best = std::numeric_limits<double>::infinity();
            ties.clear();
            for (std::size_t c = 0; c < niche.candidates.size(); ++c) {
                const double d = association.distance[niche.candidates[c]];
                if (d < best) {
                    best = d;
                    ties.clear();
                }
                if (d == best) {
                    ties.push_back(c);
                }
            }
            slot = ties.size() == 1 ? ties.front() : ties[rng.below(ties.size())];
        } else {
            slot = niche.candidates.size() == 1 ? 0 : rng.below(niche.candidates.size());
        }

        chosen.push_back(niche.candidates[slot]);
        niche.candidates.erase(niche.candidates.begin() + static_cast<std::ptrdiff_t>(slot));
        ++niche.count;
        if (niche.candidates.empty()) {
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }
    return chosen;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives,
                                      std::span<const std::size_t> front) {
    const std::size_t size = front.size();
    std::vector<double> distance(size, 0.0);
    if (size == 0) {
        return distance;
    }
    const std::size_t m = objectives[front.front()].size();
    std::vector<std::size_t> order(size);
    for (std::size_t j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
            return objectives[front[lhs]][j] < objectives[front[rhs]][j];
        });
        const double low = objectives[front[order.front()]][j];
        const double high = objectives[front[order.back()]][j];
        distance[order.front()] = std::numeric_limits<double>::infinity();
        distance[order.back()] = std::numeric_limits<double>::infinity();
        if (!(high > low)) {
            continue;
        }
        for (std::size_t pos = 1; pos + 1 < size; ++pos) {
            distance[order[pos]] += (objectives[front[order[pos + 1]]][j] -
                                     objectives[front[order[pos - 1]]][j]) /
                                    (high - low);
        }
    }
    return distance;
}

std::vector<std::size_t> crowding_distance_select(std::span<const ObjectiveVector> objectives,
                                                  std::span<const std::size_t> front,
                                                  std::size_t k, RandomSource& rng) {
    if (k == 0 || k > front.size()) {
        throw InvalidParameter("crowding_distance_select: need 0 < k <= size of the front");
    }
    std::vector<std::size_t> shuffled(front.begin(), front.end());
    if (k == front.size()) {
        return shuffled;
    }
    rng.shuffle(shuffled);
    const auto distance = crowding_distance(objectives, shuffled);
    std::vector<std::size_t> order(shuffled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return distance[lhs] > distance[rhs];
    });
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t pos = 0; pos < k; ++pos) {
        chosen.push_back(shuffled[order[pos]]);
    }
    return chosen;
}

} // namespace moea
