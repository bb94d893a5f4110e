#include "moea/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "moea/errors.hpp"

using namespace moea;

namespace {

// |v|^2 - (v.r)^2 / |r|^2 evaluated directly.
double oracle_distance(const std::vector<double>& v, std::span<const double> r) {
    double vv = 0, vr = 0, rr = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        vv += v[i] * v[i];
        vr += v[i] * r[i];
        rr += r[i] * r[i];
    }
    return std::sqrt(std::max(0.0, vv - vr * vr / rr));
}

Association manual(std::vector<std::size_t> reference, std::vector<double> distance) {
    return {std::move(reference), std::move(distance)};
}

} // namespace

TEST(Associate, LatticePointAndItsMultiples) {
    const auto points = generate_reference_points(3, 4);
    SeededRandom rng(1);
    for (std::size_t r = 0; r < points.size(); ++r) {
        const auto p = points.point(r);
        const std::vector<ObjectiveVector> values = {ObjectiveVector({p[0], p[1], p[2]}),
                                                     ObjectiveVector({2 * p[0], 2 * p[1], 2 * p[2]})};
        const auto a = associate(values, points, rng);
        EXPECT_EQ(a.reference[0], r);
        EXPECT_EQ(a.reference[1], r);
        EXPECT_NEAR(a.distance[0], 0.0, 1e-15);
        EXPECT_NEAR(a.distance[1], 0.0, 1e-15);
    }
}

TEST(Associate, ExhaustiveDistanceOracle) {
    const auto points = generate_reference_points(3, 2);
    const std::vector<double> v = {0.4, 0.4, 0.2};
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < points.size(); ++r) {
        const double d = oracle_distance(v, points.point(r));
        if (d < best_distance - 1e-12) {
            best_distance = d;
            best = r;
        }
    }
    // (0.5, 0.5, 0) is the winner by hand as well
    EXPECT_EQ(std::vector<double>(points.point(best).begin(), points.point(best).end()),
              (std::vector<double>{0.5, 0.5, 0}));
    SeededRandom rng(2);
    const auto a = associate(std::vector<ObjectiveVector>{{0.4, 0.4, 0.2}}, points, rng);
    EXPECT_EQ(a.reference[0], best);
    EXPECT_NEAR(a.distance[0], best_distance, 1e-12);
}

TEST(Associate, RejectsNonFiniteValues) {
    const auto points = generate_reference_points(3, 3);
    SeededRandom rng(3);
    EXPECT_THROW(associate(std::vector<ObjectiveVector>{{0.1, std::nan(""), 0.2}}, points, rng),
                 InvalidInput);
    EXPECT_THROW(associate(std::vector<ObjectiveVector>{{0.1, INFINITY, 0.2}}, points, rng),
                 InvalidInput);
}

TEST(Associate, ScaleInvariant) {
    const auto points = generate_reference_points(3, 11);
    SeededRandom rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const ObjectiveVector v = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        const double s = 0.1 + 10 * rng.uniform01();
        const ObjectiveVector scaled = {s * v[0], s * v[1], s * v[2]};
        SeededRandom a_rng(9);
        SeededRandom b_rng(9);
        const auto a = associate(std::vector<ObjectiveVector>{v}, points, a_rng);
        const auto b = associate(std::vector<ObjectiveVector>{scaled}, points, b_rng);
        ASSERT_EQ(a.reference, b.reference);
    }
}

TEST(Associate, CopiesOfATiedValueShareOnePoint) {
    const auto points = generate_reference_points(3, 2);
    const std::vector<ObjectiveVector> copies(40, ObjectiveVector{0.5, 0.25, 0.25});
    std::set<std::size_t> seen;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SeededRandom rng(seed);
        const auto a = associate(copies, points, rng);
        ASSERT_EQ(std::set<std::size_t>(a.reference.begin(), a.reference.end()).size(), 1U);
        seen.insert(a.reference.front());
    }
    // both tied points are reachable across seeds
    EXPECT_EQ(seen.size(), 2U);
}

TEST(NichingSelect, WholeFrontWhenKEqualsSize) {
    const auto points = generate_reference_points(3, 2);
    SeededRandom rng(5);
    const auto assoc = manual({0, 1, 1}, {0.1, 0.2, 0.3});
    const std::vector<std::size_t> critical = {0, 1, 2};
    EXPECT_EQ(niching_select({}, critical, 3, points, assoc, rng), critical);
    EXPECT_THROW(niching_select({}, critical, 4, points, assoc, rng), InvalidParameter);
    EXPECT_THROW(niching_select({}, critical, 0, points, assoc, rng), InvalidParameter);
}

TEST(NichingSelect, TwoNichesTwoSlots) {
    const auto points = generate_reference_points(3, 2);
    // a, b -> point 1 at distances 0.1 and 0.2; c -> point 2 at 0.3
    const auto assoc = manual({1, 1, 2}, {0.1, 0.2, 0.3});
    const std::vector<std::size_t> critical = {0, 1, 2};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SeededRandom rng(seed);
        auto chosen = niching_select({}, critical, 2, points, assoc, rng);
        std::sort(chosen.begin(), chosen.end());
        ASSERT_EQ(chosen, (std::vector<std::size_t>{0, 2}));
    }
}

TEST(NichingSelect, CrowdedNicheTakesClosestThenUniform) {
    const auto points = generate_reference_points(3, 2);
    const auto assoc = manual({3, 3, 3, 3, 3}, {0.5, 0.1, 0.4, 0.3, 0.2});
    const std::vector<std::size_t> critical = {0, 1, 2, 3, 4};
    std::map<std::pair<std::size_t, std::size_t>, int> pairs;
    constexpr int trials = 30000;
    for (int t = 0; t < trials; ++t) {
        SeededRandom rng(1000 + static_cast<std::uint64_t>(t));
        const auto chosen = niching_select({}, critical, 3, points, assoc, rng);
        ASSERT_EQ(chosen.size(), 3U);
        ASSERT_EQ(chosen[0], 1U);
        ++pairs[{std::min(chosen[1], chosen[2]), std::max(chosen[1], chosen[2])}];
    }
    ASSERT_EQ(pairs.size(), 6U);
    const double expected = trials / 6.0;
    const double sigma = std::sqrt(trials * (1.0 / 6) * (5.0 / 6));
    for (const auto& [pair, count] : pairs) {
        EXPECT_NEAR(count, expected, 5 * sigma);
    }
}

TEST(NichingSelect, AlreadySelectedCountsSteerTheChoice) {
    const auto points = generate_reference_points(3, 2);
    // selected individual 0 sits at point 1; candidates 1 (point 1) and 2 (point 4)
    const auto assoc = manual({1, 1, 4}, {0.0, 0.01, 0.9});
    const std::vector<std::size_t> selected = {0};
    const std::vector<std::size_t> critical = {1, 2};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SeededRandom rng(seed);
        ASSERT_EQ(niching_select(selected, critical, 1, points, assoc, rng),
                  (std::vector<std::size_t>{2}));
    }
}

TEST(NichingSelect, EveryOccupiedPointSurvivesWhenSlotsSuffice) {
    const auto points = generate_reference_points(3, 6);
    SeededRandom rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t selected_count = rng.below(10);
        const std::size_t critical_count = 2 + rng.below(30);
        const std::size_t total = selected_count + critical_count;
        const std::size_t used_points = 1 + rng.below(8);
        Association assoc;
        for (std::size_t i = 0; i < total; ++i) {
            assoc.reference.push_back(rng.below(used_points) * 3);
            assoc.distance.push_back(rng.uniform01());
        }
        std::vector<std::size_t> selected(selected_count);
        std::vector<std::size_t> critical(critical_count);
        for (std::size_t i = 0; i < total; ++i) {
            (i < selected_count ? selected[i] : critical[i - selected_count]) = i;
        }
        const std::set<std::size_t> occupied(assoc.reference.begin(), assoc.reference.end());
        std::set<std::size_t> held;
        for (auto s : selected) {
            held.insert(assoc.reference[s]);
        }
        const std::size_t missing = occupied.size() - held.size();
        const std::size_t k = std::clamp<std::size_t>(missing + rng.below(2), 1, critical_count);
        const auto chosen = niching_select(selected, critical, k, points, assoc, rng);
        ASSERT_EQ(chosen.size(), k);
        ASSERT_EQ(std::set<std::size_t>(chosen.begin(), chosen.end()).size(), k);
        for (auto c : chosen) {
            ASSERT_TRUE(std::find(critical.begin(), critical.end(), c) != critical.end());
        }
        if (missing <= k) {
            std::set<std::size_t> survivors_points = held;
            for (auto c : chosen) {
                survivors_points.insert(assoc.reference[c]);
            }
            ASSERT_EQ(survivors_points, occupied) << "trial " << trial;
        }
    }
}

TEST(CrowdingDistance, HandComputedValues) {
    const std::vector<ObjectiveVector> objectives = {{1, 3}, {2, 2}, {3, 1}, {4, 0}};
    const std::vector<std::size_t> front = {0, 1, 2, 3};
    const auto d = crowding_distance(objectives, front);
    EXPECT_TRUE(std::isinf(d[0]));
    EXPECT_TRUE(std::isinf(d[3]));
    EXPECT_NEAR(d[1], 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(d[2], 4.0 / 3.0, 1e-15);
}

TEST(CrowdingSelect, BoundaryPointsWin) {
    const std::vector<ObjectiveVector> objectives = {{1, 3}, {2, 2}, {3, 1}};
    const std::vector<std::size_t> front = {0, 1, 2};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SeededRandom rng(seed);
        auto chosen = crowding_distance_select(objectives, front, 2, rng);
        std::sort(chosen.begin(), chosen.end());
        ASSERT_EQ(chosen, (std::vector<std::size_t>{0, 2}));
    }
    SeededRandom rng(1);
    auto all = crowding_distance_select(objectives, front, 3, rng);
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, front);
    EXPECT_THROW(crowding_distance_select(objectives, front, 4, rng), InvalidParameter);
}

TEST(CrowdingSelect, EqualValuesSelectUniformSubsets) {
    const std::vector<ObjectiveVector> objectives(4, ObjectiveVector{2, 2});
    const std::vector<std::size_t> front = {0, 1, 2, 3};
    std::map<std::vector<std::size_t>, int> subsets;
    SeededRandom rng(77);
    constexpr int trials = 60000;
    for (int t = 0; t < trials; ++t) {
        auto chosen = crowding_distance_select(objectives, front, 2, rng);
        std::sort(chosen.begin(), chosen.end());
        ++subsets[chosen];
    }
    ASSERT_EQ(subsets.size(), 6U);
    const double sigma = std::sqrt(trials * (1.0 / 6) * (5.0 / 6));
    for (const auto& [subset, count] : subsets) {
        EXPECT_NEAR(count, trials / 6.0, 5 * sigma);
    }
}
