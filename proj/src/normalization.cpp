#include "moea/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "moea/errors.hpp"

namespace moea {

void update_ideal_and_worst(NormalizationState& state, std::span<const ObjectiveVector> z) {
    if (z.empty()) {
        return;
    }
    if (!state.observed()) {
        state.ideal = z.front();
        state.worst = z.front();
    }
    const std::size_t m = state.ideal.size();
    for (const auto& v : z) {
        if (v.size() != m) {
            throw InvalidParameter("update_ideal_and_worst: dimension mismatch");
        }
        for (std::size_t j = 0; j < m; ++j) {
            state.ideal[j] = std::min(state.ideal[j], v[j]);
            state.worst[j] = std::max(state.worst[j], v[j]);
        }
    }
}

double achievement_scalarization(const ObjectiveVector& z, const ObjectiveVector& ideal,
                                 std::size_t objective, double off_axis_weight) {
    double value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double weight = k == objective ? 1.0 : off_axis_weight;
        value = std::max(value, (z[k] - ideal[k]) / weight);
    }
    return value;
}

ObjectiveVector extreme_point(std::size_t objective, std::span<const ObjectiveVector> candidates,
                              const ObjectiveVector& ideal, double off_axis_weight) {
    if (candidates.empty()) {
        throw InvalidParameter("extreme_point: no candidates");
    }
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double value =
            achievement_scalarization(candidates[i], ideal, objective, off_axis_weight);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    return candidates[best];
}

Intercepts hyperplane_intercepts(std::span<const ObjectiveVector> extremes,
                                 const ObjectiveVector& ideal, double singular_pivot) {
    const std::size_t m = ideal.size();
    Intercepts result;
    if (extremes.size() != m) {
        return result;
    }
    // Solve A w = 1 where row i of A is extreme i minus the ideal point; the
    // plane is {x : w . x = 1} in translated coordinates.
    std::vector<double> a(m * (m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            a[i * (m + 1) + j] = extremes[i][j] - ideal[j];
        }
        a[i * (m + 1) + m] = 1.0;
    }
    auto at = [&](std::size_t row, std::size_t col) -> double& { return a[row * (m + 1) + col]; };
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < m; ++row) {
            if (std::abs(at(row, col)) > std::abs(at(pivot, col))) {
                pivot = row;
            }
        }
        if (!(std::abs(at(pivot, col)) >= singular_pivot)) {
            return result;
        }
        if (pivot != col) {
            for (std::size_t k = 0; k <= m; ++k) {
                std::swap(at(pivot, k), at(col, k));
            }
        }
        for (std::size_t row = col + 1; row < m; ++row) {
            const double factor = at(row, col) / at(col, col);
            for (std::size_t k = col; k <= m; ++k) {
                at(row, k) -= factor * at(col, k);
            }
        }
    }
    std::vector<double> w(m);
    for (std::size_t i = m; i-- > 0;) {
        double rhs = at(i, m);
        for (std::size_t k = i + 1; k < m; ++k) {
            rhs -= at(i, k) * w[k];
        }
        w[i] = rhs / at(i, i);
    }
    result.values = ObjectiveVector(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double translated =
            w[j] != 0.0 ? 1.0 / w[j] : std::numeric_limits<double>::infinity();
        result.values[j] = ideal[j] + translated;
    }
    result.valid = true;
    return result;
}

NormalizedMap::NormalizedMap(ObjectiveVector ideal, ObjectiveVector nadir)
    : ideal_(std::move(ideal)), nadir_(std::move(nadir)) {
    if (ideal_.size() != nadir_.size()) {
        throw InvalidParameter("NormalizedMap: ideal and nadir differ in dimension");
    }
}

ObjectiveVector NormalizedMap::operator()(const ObjectiveVector& raw) const {
    ObjectiveVector out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
        out[j] = (raw[j] - ideal_[j]) / (nadir_[j] - ideal_[j]);
    }
    return out;
}

NormalizedMap normalize(NormalizationState& state, std::span<const ObjectiveVector> objectives,
                        const RankedFronts& fronts, const NormalizationConfig& config) {
    std::vector<ObjectiveVector> z;
    for (const auto& front : fronts.fronts) {
        for (auto i : front) {
            z.push_back(objectives[i]);
        }
    }
    if (z.empty()) {
        throw InvalidParameter("normalize: no individuals to normalize");
    }
    update_ideal_and_worst(state, z);
    const std::size_t m = state.ideal.size();

    std::vector<ObjectiveVector> candidates = z;
    candidates.insert(candidates.end(), state.extremes.begin(), state.extremes.end());
    std::vector<ObjectiveVector> extremes;
    extremes.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        extremes.push_back(extreme_point(j, candidates, state.ideal, config.asf_off_axis_weight));
    }

    ObjectiveVector nadir(m);
    const Intercepts intercepts = hyperplane_intercepts(extremes, state.ideal, config.singular_pivot);
    bool valid = intercepts.valid;
    for (std::size_t j = 0; valid && j < m; ++j) {
        const double value = intercepts.values[j];
        if (value >= config.epsilon_nad && value <= state.worst[j]) {
            nadir[j] = value;
        } else {
            valid = false;
        }
    }
    if (!valid) {
        for (std::size_t j = 0; j < m; ++j) {
            nadir[j] = -std::numeric_limits<double>::infinity();
            for (auto i : fronts.fronts.front()) {
                nadir[j] = std::max(nadir[j], objectives[i][j]);
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (nadir[j] < state.ideal[j] + config.epsilon_nad) {
            for (const auto& v : z) {
                nadir[j] = std::max(nadir[j], v[j]);
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (nadir[j] >= state.ideal[j] + config.epsilon_nad) {
            continue;
        }
        if (!config.widen_degenerate) {
            std::ostringstream message;
            message << "degenerate population: objective " << j << " has ideal "
                    << state.ideal[j] << " and nadir estimate " << nadir[j]
                    << " after all fallbacks";
            throw DegeneratePopulation(message.str());
        }
        nadir[j] = state.worst[j] >= state.ideal[j] + config.epsilon_nad ? state.worst[j]
                                                                         : state.ideal[j] + 1.0;
    }

    state.extremes = std::move(extremes);
    state.nadir = nadir;
    return NormalizedMap(state.ideal, std::move(nadir));
}

} // namespace moea
