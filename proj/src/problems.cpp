#include "moea/problems.hpp"

#include <sstream>

#include "moea/errors.hpp"

namespace moea {

std::string to_string(const ObjectiveVector& v) {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < v.size(); ++j) {
        out << (j ? "," : "") << v[j];
    }
    out << ')';
    return out.str();
}

std::string_view to_string(ProblemKind kind) {
    return kind == ProblemKind::three_omm ? "3omm" : "omm";
}

ProblemKind parse_problem_kind(std::string_view name) {
    if (name == "3omm") {
        return ProblemKind::three_omm;
    }
    if (name == "omm") {
        return ProblemKind::one_min_max;
    }
    throw InvalidParameter("unknown problem '" + std::string(name) + "'");
}

ObjectiveVector eval_oneminmax(const Genome& x) {
    const auto ones = static_cast<double>(x.count_ones());
    return {static_cast<double>(x.size()) - ones, ones};
}

ObjectiveVector eval_3omm(const Genome& x) {
    const std::size_t n = x.size();
    if (n % 2 != 0) {
        throw InvalidParameter("3-OMM requires an even genome length");
    }
    const std::size_t first = x.count_ones(0, n / 2);
    const std::size_t second = x.count_ones() - first;
    return {static_cast<double>(n - first - second), static_cast<double>(first),
            static_cast<double>(second)};
}

std::vector<ObjectiveVector> pareto_front_3omm(std::size_t n) {
    if (n % 2 != 0) {
        throw InvalidParameter("3-OMM requires an even genome length");
    }
    const std::size_t half = n / 2;
    std::vector<ObjectiveVector> front;
    front.reserve((half + 1) * (half + 1));
    for (std::size_t a = 0; a <= half; ++a) {
        for (std::size_t b = 0; b <= half; ++b) {
            front.push_back({static_cast<double>(n - a - b), static_cast<double>(a),
                             static_cast<double>(b)});
        }
    }
    return front;
}

std::vector<ObjectiveVector> pareto_front_oneminmax(std::size_t n) {
    std::vector<ObjectiveVector> front;
    front.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        front.push_back({static_cast<double>(n - k), static_cast<double>(k)});
    }
    return front;
}

Problem::Problem(ProblemKind kind, std::size_t n) : kind_(kind), n_(n) {
    if (n == 0) {
        throw InvalidParameter("problem length must be positive");
    }
    if (kind == ProblemKind::three_omm && n % 2 != 0) {
        throw InvalidParameter("3-OMM requires an even genome length");
    }
}

ObjectiveVector Problem::evaluate(const Genome& x) const {
    if (x.size() != n_) {
        throw InvalidParameter("genome length does not match the problem");
    }
    return kind_ == ProblemKind::three_omm ? eval_3omm(x) : eval_oneminmax(x);
}

std::vector<ObjectiveVector> Problem::pareto_front() const {
    return kind_ == ProblemKind::three_omm ? pareto_front_3omm(n_) : pareto_front_oneminmax(n_);
}

std::size_t Problem::front_size() const noexcept {
    return kind_ == ProblemKind::three_omm ? (n_ / 2 + 1) * (n_ / 2 + 1) : n_ + 1;
}

} // namespace moea
