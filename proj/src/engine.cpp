#include "moea/engine.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "moea/dominance.hpp"
#include "moea/errors.hpp"
#include "moea/selection.hpp"

namespace moea {

std::string_view to_string(Algorithm algorithm) {
    return algorithm == Algorithm::nsga2 ? "nsga2" : "nsga3";
}

std::string_view to_string(StopPolicy policy) {
    switch (policy) {
    case StopPolicy::iterations: return "iters";
    case StopPolicy::coverage: return "coverage";
    case StopPolicy::monitor: return "monitor";
    }
    return "iters";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "nsga2") {
        return Algorithm::nsga2;
    }
    if (name == "nsga3") {
        return Algorithm::nsga3;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

StopPolicy parse_stop_policy(std::string_view name) {
    if (name == "iters") {
        return StopPolicy::iterations;
    }
    if (name == "coverage") {
        return StopPolicy::coverage;
    }
    if (name == "monitor") {
        return StopPolicy::monitor;
    }
    throw ConfigError("unknown stop policy '" + std::string(name) + "'");
}

double RunConfig::flip_prob() const noexcept {
    return mutation_prob ? *mutation_prob : 1.0 / static_cast<double>(n);
}

void RunConfig::validate() const {
    if (n == 0) {
        throw ConfigError("n must be positive");
    }
    if (problem == ProblemKind::three_omm && n % 2 != 0) {
        throw ConfigError("3omm requires an even n");
    }
    if (population_size == 0) {
        throw ConfigError("population size must be positive");
    }
    if (algorithm == Algorithm::nsga3 && divisions == 0) {
        throw ConfigError("nsga3 requires a positive number of divisions");
    }
    if (algorithm == Algorithm::nsga2 && divisions != 0) {
        throw ConfigError("divisions only apply to nsga3");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ConfigError("crossover rate must lie in [0, 1]");
    }
    if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
        throw ConfigError("mutation probability must lie in [0, 1]");
    }
    if (!(swap_prob >= 0.0 && swap_prob <= 1.0)) {
        throw ConfigError("swap probability must lie in [0, 1]");
    }
}

OffspringBatch make_offspring(std::span<const Individual> parents, const RunConfig& config,
                              RandomSource& rng) {
    const double flip = config.flip_prob();
    OffspringBatch batch;
    batch.genomes.reserve(parents.size());
    if (config.crossover_rate <= 0.0) {
        for (const auto& parent : parents) {
            batch.genomes.push_back(standard_bit_mutation(parent.genome, flip, rng));
        }
        return batch;
    }

    std::vector<std::size_t> order(parents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::size_t pos = 0;
    for (; pos + 1 < order.size(); pos += 2) {
        const Genome& a = parents[order[pos]].genome;
        const Genome& b = parents[order[pos + 1]].genome;
        ++batch.pairs;
        if (rng.bernoulli(config.crossover_rate)) {
            ++batch.crossovers;
            auto [first, second] = uniform_crossover(a, b, config.swap_prob, rng);
            batch.genomes.push_back(standard_bit_mutation(first, flip, rng));
            batch.genomes.push_back(standard_bit_mutation(second, flip, rng));
        } else {
            batch.genomes.push_back(standard_bit_mutation(a, flip, rng));
            batch.genomes.push_back(standard_bit_mutation(b, flip, rng));
        }
    }
    if (pos < order.size()) {
        batch.genomes.push_back(standard_bit_mutation(parents[order[pos]].genome, flip, rng));
    }
    return batch;
}

namespace {

RunConfig validated(RunConfig config) {
    config.validate();
    return config;
}

} // namespace

Optimizer::Optimizer(RunConfig config)
    : config_(validated(std::move(config))), problem_(config_.problem, config_.n) {
    if (config_.algorithm == Algorithm::nsga3) {
        points_ = generate_reference_points(problem_.objective_count(), config_.divisions);
    }
    config_.normalization.widen_degenerate = true;
}

GenerationState Optimizer::initialize(RandomSource& rng) const {
    GenerationState state;
    state.population.reserve(config_.population_size);
    for (std::size_t i = 0; i < config_.population_size; ++i) {
        Genome genome = random_genome(config_.n, rng);
        ObjectiveVector objectives = problem_.evaluate(genome);
        state.population.push_back({std::move(genome), std::move(objectives)});
    }
    return state;
}

IterationStats Optimizer::step(GenerationState& state, RandomSource& rng) const {
    const std::size_t target = config_.population_size;
    IterationStats stats;
    stats.iteration = state.iteration + 1;

    OffspringBatch offspring = make_offspring(state.population, config_, rng);
    stats.crossovers = offspring.crossovers;

    Population combined = std::move(state.population);
    combined.reserve(2 * target);
    for (auto& genome : offspring.genomes) {
        ObjectiveVector objectives = problem_.evaluate(genome);
        combined.push_back({std::move(genome), std::move(objectives)});
    }
    std::vector<ObjectiveVector> objectives;
    objectives.reserve(combined.size());
    for (const auto& individual : combined) {
        objectives.push_back(individual.objectives);
    }

    const RankedFronts fronts = fast_nondominated_sort(objectives, problem_.sense());
    stats.front_count = fronts.front_count();

    std::size_t critical = 0;
    std::size_t before = 0;
    while (before + fronts.fronts[critical].size() < target) {
        before += fronts.fronts[critical].size();
        ++critical;
    }
    stats.critical_rank = critical + 1;
    stats.before_critical = before;
    stats.critical_size = fronts.fronts[critical].size();

    std::vector<std::size_t> survivors;
    survivors.reserve(target);
    for (std::size_t f = 0; f < critical; ++f) {
        survivors.insert(survivors.end(), fronts.fronts[f].begin(), fronts.fronts[f].end());
    }
    const std::size_t slots = target - before;
    std::vector<std::size_t> chosen;
    if (config_.algorithm == Algorithm::nsga3) {
        chosen = select_nsga3(state, objectives, fronts, critical, slots, rng);
    } else {
        chosen = crowding_distance_select(objectives, fronts.fronts[critical], slots, rng);
    }
    survivors.insert(survivors.end(), chosen.begin(), chosen.end());
    std::sort(survivors.begin(), survivors.end());

    state.population.clear();
    state.population.reserve(target);
    for (auto i : survivors) {
        state.population.push_back(std::move(combined[i]));
    }
    state.iteration = stats.iteration;
    return stats;
}

std::vector<std::size_t> Optimizer::select_nsga3(GenerationState& state,
                                                 std::span<const ObjectiveVector> objectives,
                                                 const RankedFronts& fronts, std::size_t critical,
                                                 std::size_t slots, RandomSource& rng) const {
    RankedFronts considered;
    considered.fronts.assign(fronts.fronts.begin(),
                             fronts.fronts.begin() + static_cast<std::ptrdiff_t>(critical + 1));
    const NormalizedMap map =
        normalize(state.normalization, objectives, considered, config_.normalization);

    const auto& candidates = fronts.fronts[critical];
    if (slots == candidates.size()) {
        return candidates;
    }

    std::vector<std::size_t> members;
    for (const auto& front : considered.fronts) {
        members.insert(members.end(), front.begin(), front.end());
    }
    std::sort(members.begin(), members.end());
    std::vector<ObjectiveVector> normalized;
    normalized.reserve(members.size());
    for (auto i : members) {
        normalized.push_back(map(objectives[i]));
    }
    const Association local = associate(normalized, *points_, rng);

    Association association;
    association.reference.assign(objectives.size(), 0);
    association.distance.assign(objectives.size(), 0.0);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
        association.reference[members[pos]] = local.reference[pos];
        association.distance[members[pos]] = local.distance[pos];
    }

    std::vector<std::size_t> selected;
    for (std::size_t f = 0; f < critical; ++f) {
        selected.insert(selected.end(), fronts.fronts[f].begin(), fronts.fronts[f].end());
    }
    return niching_select(selected, candidates, slots, *points_, association, rng);
}

RunSummary run(const RunConfig& config, const RecordSink& sink) {
    const Optimizer optimizer(config);
    SeededRandom rng(config.seed);
    const auto front = optimizer.problem().pareto_front();
    const FrontIndex index(front);
    CoverageTracker tracker(config.run_id, index);

    auto objectives_of = [](const Population& population) {
        std::vector<ObjectiveVector> values;
        values.reserve(population.size());
        for (const auto& individual : population) {
            values.push_back(individual.objectives);
        }
        return values;
    };
    using Clock = std::chrono::steady_clock;
    auto emit = [&](RunRecord record) {
        if (config.stop != StopPolicy::monitor) {
            record.lost.clear();
        }
        if (sink) {
            sink(record);
        }
    };

    RunSummary summary;
    summary.front_size = index.size();
    auto started = Clock::now();
    GenerationState state = optimizer.initialize(rng);
    emit(tracker.observe(0, objectives_of(state.population),
                         std::chrono::duration<double>(Clock::now() - started).count()));
    if (tracker.full()) {
        summary.first_full_coverage = 0;
    }

    while (state.iteration < config.max_iterations) {
        if (config.stop == StopPolicy::coverage && tracker.full()) {
            break;
        }
        started = Clock::now();
        optimizer.step(state, rng);
        const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
        emit(tracker.observe(state.iteration, objectives_of(state.population), elapsed));
        if (tracker.full() && !summary.first_full_coverage) {
            summary.first_full_coverage = state.iteration;
        }
    }
    summary.iterations = state.iteration;
    summary.final_covered = tracker.covered().size();
    summary.losses = tracker.losses();
    return summary;
}

} // namespace moea
