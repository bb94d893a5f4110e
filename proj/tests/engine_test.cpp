#include "moea/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "moea/dominance.hpp"
#include "moea/errors.hpp"
#include "test_support.hpp"

using namespace moea;

namespace {

RunConfig nsga3_config(std::size_t n, std::size_t p, std::size_t iterations, std::uint64_t seed) {
    RunConfig config;
    config.problem = ProblemKind::three_omm;
    config.n = n;
    config.population_size = (n / 2 + 1) * (n / 2 + 1);
    config.algorithm = Algorithm::nsga3;
    config.divisions = p;
    config.max_iterations = iterations;
    config.seed = seed;
    return config;
}

Population parents_of(std::vector<std::string> bits) {
    Population population;
    for (const auto& b : bits) {
        auto genome = Genome::from_string(b);
        population.push_back({genome, eval_3omm(genome)});
    }
    return population;
}

} // namespace

TEST(RunConfigValidation, RejectsBadSettings) {
    auto good = nsga3_config(8, 10, 5, 1);
    EXPECT_NO_THROW(good.validate());
    auto c = good;
    c.n = 7;
    EXPECT_THROW(c.validate(), ConfigError);
    c = good;
    c.population_size = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = good;
    c.divisions = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = good;
    c.algorithm = Algorithm::nsga2;
    EXPECT_THROW(c.validate(), ConfigError);
    c.divisions = 0;
    EXPECT_NO_THROW(c.validate());
    c = good;
    c.crossover_rate = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = good;
    c.mutation_prob = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(Optimizer{c}, ConfigError);
    EXPECT_DOUBLE_EQ(good.flip_prob(), 1.0 / 8.0);
}

TEST(RunConfigParsing, NamesRoundTrip) {
    EXPECT_EQ(parse_algorithm("nsga2"), Algorithm::nsga2);
    EXPECT_EQ(parse_algorithm(to_string(Algorithm::nsga3)), Algorithm::nsga3);
    EXPECT_EQ(parse_stop_policy("coverage"), StopPolicy::coverage);
    EXPECT_THROW(parse_algorithm("moead"), ConfigError);
    EXPECT_THROW(parse_stop_policy("forever"), ConfigError);
}

TEST(MakeOffspring, MutationOnlyCopiesWithZeroFlips) {
    auto config = nsga3_config(6, 6, 1, 0);
    config.mutation_prob = 0.0;
    const auto parents = parents_of({"000000", "111111", "101010"});
    SeededRandom rng(1);
    const auto batch = make_offspring(parents, config, rng);
    ASSERT_EQ(batch.genomes.size(), 3U);
    EXPECT_EQ(batch.pairs, 0U);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(batch.genomes[i], parents[i].genome);
    }
}

TEST(MakeOffspring, CrossoverPairsAndOddLeftover) {
    auto config = nsga3_config(6, 6, 1, 0);
    config.crossover_rate = 1.0;
    config.mutation_prob = 0.0;
    const auto parents = parents_of({"000000", "111111", "000000", "111111", "110011"});
    SeededRandom rng(2);
    const auto batch = make_offspring(parents, config, rng);
    ASSERT_EQ(batch.genomes.size(), 5U);
    EXPECT_EQ(batch.pairs, 2U);
    EXPECT_EQ(batch.crossovers, 2U);
    // uniform crossover keeps each bit of one parent, so any child is
    // bitwise between the parents; the unpaired parent is copied unchanged
    std::multiset<std::string> seen;
    for (const auto& g : batch.genomes) {
        seen.insert(g.to_string());
    }
    const std::size_t copies_of_leftover = seen.count("110011");
    EXPECT_GE(copies_of_leftover, 1U);
}

TEST(MakeOffspring, CrossoverFractionMatchesRate) {
    auto config = nsga3_config(8, 8, 1, 0);
    config.crossover_rate = 0.5;
    SeededRandom rng(3);
    Population parents;
    for (int i = 0; i < 100; ++i) {
        auto genome = random_genome(8, rng);
        parents.push_back({genome, eval_3omm(genome)});
    }
    std::size_t pairs = 0;
    std::size_t crossed = 0;
    for (int t = 0; t < 400; ++t) {
        const auto batch = make_offspring(parents, config, rng);
        ASSERT_EQ(batch.genomes.size(), parents.size());
        pairs += batch.pairs;
        crossed += batch.crossovers;
    }
    ASSERT_EQ(pairs, 400U * 50U);
    const double sigma = std::sqrt(pairs * 0.25);
    EXPECT_NEAR(double(crossed), pairs * 0.5, 5 * sigma);
}

TEST(Optimizer, PopulationSizeIsPreserved) {
    for (std::size_t size : {1U, 2U, 7U, 25U}) {
        auto config = nsga3_config(8, 10, 10, size);
        config.population_size = size;
        config.crossover_rate = 0.5;
        const Optimizer optimizer(config);
        SeededRandom rng(size);
        auto state = optimizer.initialize(rng);
        ASSERT_EQ(state.population.size(), size);
        for (int t = 0; t < 10; ++t) {
            optimizer.step(state, rng);
            ASSERT_EQ(state.population.size(), size);
        }
    }
}

TEST(Optimizer, ThreeOmmHasOneFrontSoCriticalRankIsOne) {
    const Optimizer optimizer(nsga3_config(10, 20, 0, 5));
    SeededRandom rng(5);
    auto state = optimizer.initialize(rng);
    for (int t = 0; t < 30; ++t) {
        const auto stats = optimizer.step(state, rng);
        ASSERT_EQ(stats.front_count, 1U);
        ASSERT_EQ(stats.critical_rank, 1U);
        ASSERT_EQ(stats.before_critical, 0U);
        ASSERT_EQ(stats.critical_size, 2 * state.population.size());
    }
}

TEST(Optimizer, CriticalRankSplitsFronts) {
    RunConfig config;
    config.problem = ProblemKind::one_min_max;
    config.n = 12;
    config.population_size = 9;
    config.algorithm = Algorithm::nsga2;
    const Optimizer optimizer(config);
    SeededRandom rng(6);
    auto state = optimizer.initialize(rng);
    for (int t = 0; t < 30; ++t) {
        const auto stats = optimizer.step(state, rng);
        ASSERT_LT(stats.before_critical, config.population_size);
        ASSERT_GE(stats.before_critical + stats.critical_size, config.population_size);
    }
}

TEST(Optimizer, IdealAndWorstAreMonotone) {
    const Optimizer optimizer(nsga3_config(12, 30, 0, 7));
    SeededRandom rng(7);
    auto state = optimizer.initialize(rng);
    optimizer.step(state, rng);
    for (int t = 0; t < 60; ++t) {
        const auto ideal = state.normalization.ideal;
        const auto worst = state.normalization.worst;
        optimizer.step(state, rng);
        for (std::size_t j = 0; j < 3; ++j) {
            // running componentwise minimum and maximum
            ASSERT_LE(state.normalization.ideal[j], ideal[j]);
            ASSERT_GE(state.normalization.worst[j], worst[j]);
        }
    }
}

TEST(Run, ZeroIterationsGivesOneRecord) {
    std::vector<RunRecord> records;
    const auto summary = run(nsga3_config(8, 10, 0, 9), [&](const RunRecord& r) { records.push_back(r); });
    ASSERT_EQ(records.size(), 1U);
    EXPECT_EQ(records[0].iteration, 0U);
    EXPECT_EQ(summary.iterations, 0U);
    EXPECT_EQ(summary.front_size, 25U);
}

TEST(Run, DeterministicForAFixedSeed) {
    auto config = nsga3_config(8, 20, 40, 11);
    config.crossover_rate = 0.5;
    std::vector<RunRecord> a;
    std::vector<RunRecord> b;
    run(config, [&](const RunRecord& r) { a.push_back(r); });
    run(config, [&](const RunRecord& r) { b.push_back(r); });
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].covered, b[i].covered);
        EXPECT_EQ(a[i].new_covered, b[i].new_covered);
        EXPECT_EQ(a[i].losses_cumulative, b[i].losses_cumulative);
    }
}

TEST(Run, CoverageStopEndsAtFirstFullIteration) {
    auto config = nsga3_config(6, 126, 5000, 12);
    config.stop = StopPolicy::coverage;
    std::vector<RunRecord> records;
    const auto summary = run(config, [&](const RunRecord& r) { records.push_back(r); });
    ASSERT_TRUE(summary.first_full_coverage.has_value());
    EXPECT_EQ(records.back().iteration, *summary.first_full_coverage);
    EXPECT_EQ(records.back().covered, 16U);
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        EXPECT_LT(records[i].covered, 16U);
    }
}

TEST(Run, NoLossAndFullCoverageWithFineLattice) {
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        auto config = nsga3_config(20, 420, 1500, 100 + seed);
        config.stop = StopPolicy::monitor;
        std::size_t previous = 0;
        const auto summary = run(config, [&](const RunRecord& r) {
            ASSERT_TRUE(r.lost.empty()) << "iteration " << r.iteration;
            ASSERT_GE(r.covered, previous);
            previous = r.covered;
        });
        EXPECT_EQ(summary.losses, 0U);
        EXPECT_TRUE(summary.first_full_coverage.has_value());
        EXPECT_EQ(summary.final_covered, 121U);
    }
}

TEST(Run, NadirEqualsWorstWhileTheFrontIsKept) {
    const Optimizer optimizer(nsga3_config(8, 168, 0, 13));
    SeededRandom rng(13);
    auto state = optimizer.initialize(rng);
    for (int t = 0; t < 200; ++t) {
        optimizer.step(state, rng);
        const auto& s = state.normalization;
        bool spread = true;
        for (std::size_t j = 0; j < 3; ++j) {
            spread = spread && s.worst[j] != s.ideal[j];
        }
        if (!spread) {
            continue;
        }
        for (std::size_t j = 0; j < 3; ++j) {
            ASSERT_EQ(s.nadir[j], s.worst[j]) << "iteration " << t;
        }
    }
}
