#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "moea/analysis.hpp"
#include "moea/genome.hpp"
#include "moea/normalization.hpp"
#include "moea/problems.hpp"
#include "moea/refpoints.hpp"

namespace moea {

enum class Algorithm { nsga2, nsga3 };

enum class StopPolicy {
    iterations,  // run the full iteration budget
    coverage,    // stop at the first iteration with full front coverage
    monitor      // full budget, lost values reported in every record
};

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(StopPolicy policy);
Algorithm parse_algorithm(std::string_view name);
StopPolicy parse_stop_policy(std::string_view name);

struct RunConfig {
    ProblemKind problem = ProblemKind::three_omm;
    std::size_t n = 0;
    std::size_t population_size = 0;
    Algorithm algorithm = Algorithm::nsga3;
    std::size_t divisions = 0;  // nsga3 only
    double crossover_rate = 0.0;
    std::optional<double> mutation_prob;  // 1/n when unset
    double swap_prob = 0.5;
    std::size_t max_iterations = 0;
    std::uint64_t seed = 0;  // seed of this run's own stream
    std::size_t run_id = 0;
    StopPolicy stop = StopPolicy::iterations;
    NormalizationConfig normalization{};

    double flip_prob() const noexcept;
    // Throws ConfigError describing the first violated constraint.
    void validate() const;
};

struct Individual {
    Genome genome;
    ObjectiveVector objectives;
};

using Population = std::vector<Individual>;

struct GenerationState {
    Population population;
    NormalizationState normalization;
    std::size_t iteration = 0;
};

struct OffspringBatch {
    std::vector<Genome> genomes;
    std::size_t pairs = 0;       // pairs formed (0 when crossover is off)
    std::size_t crossovers = 0;  // pairs that were recombined
};

// One child per parent. With a positive crossover rate the parents are
// paired at random, each pair is recombined with that probability, and every
// resulting genome is mutated; an odd leftover is only mutated.
OffspringBatch make_offspring(std::span<const Individual> parents, const RunConfig& config,
                              RandomSource& rng);

struct IterationStats {
    std::size_t iteration = 0;
    std::size_t front_count = 0;
    std::size_t critical_rank = 0;      // i*, 1-based
    std::size_t before_critical = 0;    // |Z_t|
    std::size_t critical_size = 0;      // |F_i*|
    std::size_t crossovers = 0;
};

// Generation loop shared by NSGA-II and NSGA-III.
class Optimizer {
public:
    // Throws ConfigError if the configuration is invalid.
    explicit Optimizer(RunConfig config);

    const RunConfig& config() const noexcept { return config_; }
    const Problem& problem() const noexcept { return problem_; }
    const ReferencePointSet* reference_points() const noexcept {
        return points_ ? &*points_ : nullptr;
    }

    GenerationState initialize(RandomSource& rng) const;
    IterationStats step(GenerationState& state, RandomSource& rng) const;

private:
    std::vector<std::size_t> select_nsga3(GenerationState& state,
                                          std::span<const ObjectiveVector> objectives,
                                          const RankedFronts& fronts, std::size_t critical,
                                          std::size_t slots, RandomSource& rng) const;

    RunConfig config_;
    Problem problem_;
    std::optional<ReferencePointSet> points_;
};

struct RunSummary {
    std::size_t iterations = 0;  // iterations executed after initialization
    std::optional<std::size_t> first_full_coverage;
    std::size_t final_covered = 0;
    std::size_t front_size = 0;
    std::size_t losses = 0;
};

using RecordSink = std::function<void(const RunRecord&)>;

// Full run with coverage tracking: one record for the initial population and
// one per iteration. The random stream is SeededRandom(config.seed).
RunSummary run(const RunConfig& config, const RecordSink& sink);

} // namespace moea
