#include "moea/refpoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moea/errors.hpp"

namespace moea {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += a[i] * b[i];
    }
    return total;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

void append_compositions(std::size_t remaining, std::size_t parts, std::vector<int>& prefix,
                         std::vector<int>& out) {
    if (parts == 1) {
        out.insert(out.end(), prefix.begin(), prefix.end());
        out.push_back(static_cast<int>(remaining));
        return;
    }
    for (std::size_t first = 0; first <= remaining; ++first) {
        prefix.push_back(static_cast<int>(first));
        append_compositions(remaining - first, parts - 1, prefix, out);
        prefix.pop_back();
    }
}

// Collects the minimal-distance candidates; `order` of insertion does not
// matter because callers sort the ties afterwards.
class TieTracker {
public:
    void offer(std::size_t index, double distance) {
        if (distance < best_) {
            best_ = distance;
            ties_.clear();
            ties_.push_back(index);
        } else if (distance == best_) {
            ties_.push_back(index);
        }
    }
    std::vector<std::size_t> take() {
        std::sort(ties_.begin(), ties_.end());
        return std::move(ties_);
    }

private:
    double best_ = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ties_;
};

} // namespace

std::size_t reference_point_count(std::size_t m, std::size_t p) {
    return binomial(p + m - 1, m - 1);
}

ReferencePointSet generate_reference_points(std::size_t m, std::size_t p) {
    if (m < 2) {
        throw InvalidParameter("reference points need at least two objectives");
    }
    if (p == 0) {
        throw InvalidParameter("reference points need at least one division");
    }
    ReferencePointSet set;
    set.dimension_ = m;
    set.divisions_ = p;
    set.compositions_.reserve(reference_point_count(m, p) * m);
    std::vector<int> prefix;
    append_compositions(p, m, prefix, set.compositions_);
    set.coordinates_.resize(set.compositions_.size());
    const auto scale = static_cast<double>(p);
    for (std::size_t i = 0; i < set.compositions_.size(); ++i) {
        set.coordinates_[i] = static_cast<double>(set.compositions_[i]) / scale;
    }
    return set;
}

std::size_t ReferencePointSet::index_of(std::span<const int> composition) const {
    if (composition.size() != dimension_) {
        throw InvalidParameter("index_of: composition has the wrong dimension");
    }
    std::size_t index = 0;
    std::size_t remaining = divisions_;
    for (std::size_t i = 0; i + 1 < dimension_; ++i) {
        const auto part = static_cast<std::size_t>(composition[i]);
        const std::size_t parts_after = dimension_ - 1 - i;
        // compositions whose i-th part is smaller than `part` (hockey stick)
        index += binomial(remaining + parts_after, parts_after) -
                 binomial(remaining - part + parts_after, parts_after);
        remaining -= part;
    }
    return index;
}

std::vector<std::size_t> ReferencePointSet::nearest_exhaustive(std::span<const double> v) const {
    TieTracker tracker;
    for (std::size_t r = 0; r < size(); ++r) {
        tracker.offer(r, perpendicular_distance(v, point(r)));
    }
    return tracker.take();
}

std::vector<std::size_t> ReferencePointSet::nearest(std::span<const double> v) const {
    if (v.size() != dimension_) {
        throw InvalidParameter("nearest: vector has the wrong dimension");
    }
    double sum = 0.0;
    bool non_negative = true;
    for (double x : v) {
        non_negative = non_negative && x >= 0.0;
        sum += x;
    }
    if (dimension_ != 3 || !non_negative || !(sum > 0.0) || !std::isfinite(sum)) {
        return nearest_exhaustive(v);
    }

    // The minimal-angle lattice point lies within sqrt(18)/p of the central
    // projection of v onto the simplex, so a box of radius 5 in lattice units
    // around that projection contains every candidate.
    constexpr double radius = 5.0;
    const auto p = static_cast<double>(divisions_);
    const int divisions = static_cast<int>(divisions_);
    double centre[3];
    for (std::size_t i = 0; i < 3; ++i) {
        centre[i] = v[i] / sum * p;
    }
    const int lo0 = std::max(0, static_cast<int>(std::floor(centre[0] - radius)));
    const int hi0 = std::min(divisions, static_cast<int>(std::ceil(centre[0] + radius)));
    const int lo1 = std::max(0, static_cast<int>(std::floor(centre[1] - radius)));
    const int hi1 = std::min(divisions, static_cast<int>(std::ceil(centre[1] + radius)));

    TieTracker tracker;
    for (int k0 = lo0; k0 <= hi0; ++k0) {
        for (int k1 = lo1; k1 <= hi1 && k0 + k1 <= divisions; ++k1) {
            const int k2 = divisions - k0 - k1;
            if (std::abs(static_cast<double>(k2) - centre[2]) > radius + 1.0) {
                continue;
            }
            const int parts[3] = {k0, k1, k2};
            const std::size_t r = index_of(parts);
            tracker.offer(r, perpendicular_distance(v, point(r)));
        }
    }
    return tracker.take();
}

double perpendicular_distance(std::span<const double> v, std::span<const double> r) {
    if (v.size() != r.size()) {
        throw InvalidParameter("perpendicular_distance: dimension mismatch");
    }
    const double norm2 = dot(r, r);
    if (!(norm2 > 0.0)) {
        throw InvalidParameter("perpendicular_distance: zero reference point");
    }
    const double scale = dot(v, r) / norm2;
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double residual = v[i] - scale * r[i];
        total += residual * residual;
    }
    return std::sqrt(total);
}

double angle_between(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw InvalidParameter("angle_between: dimension mismatch");
    }
    const double nu = std::sqrt(dot(u, u));
    const double nv = std::sqrt(dot(v, v));
    if (!(nu > 0.0) || !(nv > 0.0)) {
        throw InvalidParameter("angle_between: zero vector");
    }
    const double cosine = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(cosine);
}

} // namespace moea
