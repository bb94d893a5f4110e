#include "moea/dominance.hpp"

#include <algorithm>
#include <numeric>

#include "moea/errors.hpp"

namespace moea {

Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b, Sense sense) {
    if (a.size() != b.size()) {
        throw InvalidParameter("dominates: objective vectors differ in dimension");
    }
    bool better_somewhere = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double lhs = sense == Sense::minimize ? a[j] : -a[j];
        const double rhs = sense == Sense::minimize ? b[j] : -b[j];
        if (lhs > rhs) {
            return Dominance::none;
        }
        if (lhs < rhs) {
            better_somewhere = true;
        }
    }
    return better_somewhere ? Dominance::strict : Dominance::weak;
}

std::size_t RankedFronts::total_size() const noexcept {
    std::size_t total = 0;
    for (const auto& front : fronts) {
        total += front.size();
    }
    return total;
}

std::vector<std::size_t> RankedFronts::ranks(std::size_t population_size) const {
    std::vector<std::size_t> rank(population_size, 0);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        for (auto i : fronts[k]) {
            rank[i] = k;
        }
    }
    return rank;
}

RankedFronts fast_nondominated_sort(std::span<const ObjectiveVector> population, Sense sense) {
    if (population.empty()) {
        throw InvalidParameter("fast_nondominated_sort: empty population");
    }
    const std::size_t m = population.front().size();
    for (const auto& v : population) {
        if (v.size() != m) {
            throw InvalidParameter("fast_nondominated_sort: mixed objective dimensions");
        }
    }

    // Group equal objective vectors; group_of[i] is the distinct-value id of i.
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return population[lhs] < population[rhs];
    });
    std::vector<std::size_t> group_of(population.size());
    std::vector<std::size_t> representative;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (pos == 0 || population[order[pos]] != population[order[pos - 1]]) {
            representative.push_back(order[pos]);
        }
        group_of[order[pos]] = representative.size() - 1;
    }

    const std::size_t groups = representative.size();
    std::vector<std::vector<std::size_t>> dominated(groups);
    std::vector<std::size_t> domination_count(groups, 0);
    for (std::size_t p = 0; p < groups; ++p) {
        for (std::size_t q = p + 1; q < groups; ++q) {
            const auto& vp = population[representative[p]];
            const auto& vq = population[representative[q]];
            if (dominates(vp, vq, sense) == Dominance::strict) {
                dominated[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(vq, vp, sense) == Dominance::strict) {
                dominated[q].push_back(p);
                ++domination_count[p];
            }
        }
    }

    std::vector<std::size_t> group_rank(groups, 0);
    std::vector<std::size_t> current;
    for (std::size_t g = 0; g < groups; ++g) {
        if (domination_count[g] == 0) {
            current.push_back(g);
        }
    }
    std::size_t rank = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto g : current) {
            group_rank[g] = rank;
            for (auto h : dominated[g]) {
                if (--domination_count[h] == 0) {
                    next.push_back(h);
                }
            }
        }
        current = std::move(next);
        ++rank;
    }

    RankedFronts result;
    result.fronts.resize(rank);
    for (std::size_t i = 0; i < population.size(); ++i) {
        result.fronts[group_rank[group_of[i]]].push_back(i);
    }
    return result;
}

} // namespace moea
