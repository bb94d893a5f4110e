#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moea/genome.hpp"

namespace moea {

// M objective values of one individual, raw or normalized.
class ObjectiveVector {
public:
    ObjectiveVector() = default;
    explicit ObjectiveVector(std::size_t m) : values_(m, 0.0) {}
    ObjectiveVector(std::initializer_list<double> values) : values_(values) {}
    explicit ObjectiveVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool operator==(const ObjectiveVector&) const = default;
    auto operator<=>(const ObjectiveVector&) const = default;

private:
    std::vector<double> values_;
};

std::string to_string(const ObjectiveVector& v);

enum class Sense { minimize, maximize };

enum class ProblemKind { one_min_max, three_omm };

std::string_view to_string(ProblemKind kind);
// Accepts "omm" and "3omm".
ProblemKind parse_problem_kind(std::string_view name);

ObjectiveVector eval_oneminmax(const Genome& x);
// Throws InvalidParameter for odd lengths.
ObjectiveVector eval_3omm(const Genome& x);

// Lexicographic in (a, b): {(n-a-b, a, b) : 0 <= a, b <= n/2}.
std::vector<ObjectiveVector> pareto_front_3omm(std::size_t n);
// {(n-k, k) : 0 <= k <= n}, ordered by k.
std::vector<ObjectiveVector> pareto_front_oneminmax(std::size_t n);

class Problem {
public:
    Problem(ProblemKind kind, std::size_t n);

    ProblemKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return to_string(kind_); }
    std::size_t length() const noexcept { return n_; }
    std::size_t objective_count() const noexcept { return kind_ == ProblemKind::three_omm ? 3 : 2; }
    Sense sense() const noexcept { return Sense::maximize; }

    ObjectiveVector evaluate(const Genome& x) const;
    std::vector<ObjectiveVector> pareto_front() const;
    std::size_t front_size() const noexcept;

private:
    ProblemKind kind_;
    std::size_t n_;
};

} // namespace moea
