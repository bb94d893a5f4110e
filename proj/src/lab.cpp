#include "moea/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "moea/analysis.hpp"

namespace moea::lab {
namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem",   "n",     "algo",          "pop-size",      "pop-mult", "divisions",
        "divisions-per-n",    "crossover-rate", "mutation-prob", "iterations", "seeds",
        "seed",      "stop"};
    return keys;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, const std::string& key) {
    T value{};
    std::istringstream in(text);
    in >> value;
    if (!in || !(in >> std::ws).eof()) {
        throw SpecError(line, "invalid value '" + text + "' for key '" + key + "'");
    }
    return value;
}

std::size_t parse_count(const std::string& text, std::size_t line, const std::string& key) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw SpecError(line, "invalid value '" + text + "' for key '" + key + "'");
    }
    return parse_number<std::size_t>(text, line, key);
}

std::string format_double(double value, const char* pattern) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, pattern, value);
    return buffer;
}

std::size_t default_population(ProblemKind problem, std::size_t n) {
    return Problem(problem, n).front_size();
}

} // namespace

SpecError::SpecError(std::size_t line, const std::string& message)
    : ConfigError(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::size_t scaled_ceil(double factor, std::size_t base) {
    return static_cast<std::size_t>(std::ceil(factor * static_cast<double>(base) - 1e-9));
}

SpecTable parse_spec_text(std::string_view text) {
    SpecTable table;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_number;
        std::string line(text.substr(start, end - start));
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw SpecError(line_number, "expected key=value, got '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (!known_keys().contains(key)) {
            throw SpecError(line_number, "unknown key '" + key + "'");
        }
        std::string_view values = std::string_view(line).substr(eq + 1);
        std::size_t from = 0;
        while (from <= values.size()) {
            auto comma = values.find(',', from);
            if (comma == std::string_view::npos) {
                comma = values.size();
            }
            std::string value = trim(values.substr(from, comma - from));
            if (value.empty()) {
                throw SpecError(line_number, "empty value for key '" + key + "'");
            }
            table[key].emplace_back(std::move(value), line_number);
            from = comma + 1;
        }
    }
    return table;
}

SpecTable parse_spec_json(std::string_view text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& error) {
        const std::size_t offset = std::min<std::size_t>(error.byte, text.size());
        const auto line = static_cast<std::size_t>(
                              std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n')) +
                          1;
        throw SpecError(line, "malformed JSON spec");
    }
    if (!document.is_object()) {
        throw SpecError(1, "JSON spec must be an object");
    }
    SpecTable table;
    auto scalar = [](const nlohmann::json& value, const std::string& key) -> std::string {
        if (value.is_string()) {
            return value.get<std::string>();
        }
        if (value.is_number()) {
            return value.dump();
        }
        throw SpecError(0, "key '" + key + "' must hold numbers or strings");
    };
    for (const auto& [key, value] : document.items()) {
        if (!known_keys().contains(key)) {
            throw SpecError(0, "unknown key '" + key + "'");
        }
        if (value.is_array()) {
            for (const auto& item : value) {
                table[key].emplace_back(scalar(item, key), 0);
            }
        } else {
            table[key].emplace_back(scalar(value, key), 0);
        }
    }
    return table;
}

ExperimentSpec expand_spec(const SpecTable& table, std::optional<std::uint64_t> seed_override) {
    auto list = [&](const std::string& key) -> const std::vector<std::pair<std::string, std::size_t>>* {
        auto it = table.find(key);
        return it == table.end() ? nullptr : &it->second;
    };
    auto single = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
        const auto* values = list(key);
        if (!values) {
            return std::nullopt;
        }
        if (values->size() != 1) {
            throw SpecError(values->at(1).second, "key '" + key + "' takes a single value");
        }
        return values->front();
    };

    ExperimentSpec spec;
    ProblemKind problem = ProblemKind::three_omm;
    if (auto value = single("problem")) {
        try {
            problem = parse_problem_kind(value->first);
        } catch (const InvalidParameter& error) {
            throw SpecError(value->second, error.what());
        }
    }
    const auto* ns = list("n");
    if (!ns || ns->empty()) {
        throw SpecError(0, "spec lists no values for 'n'");
    }
    std::vector<Algorithm> algorithms;
    if (const auto* values = list("algo")) {
        for (const auto& [text, line] : *values) {
            try {
                algorithms.push_back(parse_algorithm(text));
            } catch (const ConfigError& error) {
                throw SpecError(line, error.what());
            }
        }
    } else {
        algorithms.push_back(Algorithm::nsga3);
    }
    if (list("pop-size") && list("pop-mult")) {
        throw SpecError(list("pop-mult")->front().second, "give either pop-size or pop-mult");
    }
    if (list("divisions") && list("divisions-per-n")) {
        throw SpecError(list("divisions-per-n")->front().second,
                        "give either divisions or divisions-per-n");
    }
    std::vector<double> chis;
    if (const auto* values = list("crossover-rate")) {
        for (const auto& [text, line] : *values) {
            chis.push_back(parse_number<double>(text, line, "crossover-rate"));
        }
    } else {
        chis.push_back(0.0);
    }
    std::optional<double> mutation;
    if (auto value = single("mutation-prob")) {
        mutation = parse_number<double>(value->first, value->second, "mutation-prob");
    }
    std::size_t iterations = 1000;
    if (auto value = single("iterations")) {
        iterations = parse_count(value->first, value->second, "iterations");
    }
    std::size_t seeds = 1;
    if (auto value = single("seeds")) {
        seeds = parse_count(value->first, value->second, "seeds");
        if (seeds == 0) {
            throw SpecError(value->second, "seeds must be positive");
        }
    }
    if (auto value = single("seed")) {
        spec.master_seed = parse_number<std::uint64_t>(value->first, value->second, "seed");
    }
    if (seed_override) {
        spec.master_seed = *seed_override;
    }
    if (auto value = single("stop")) {
        try {
            spec.stop = parse_stop_policy(value->first);
        } catch (const ConfigError& error) {
            throw SpecError(value->second, error.what());
        }
    }

    for (const auto& [n_text, n_line] : *ns) {
        const std::size_t n = parse_count(n_text, n_line, "n");
        for (auto algorithm : algorithms) {
            // population sizes for this n
            std::vector<std::pair<std::size_t, std::size_t>> sizes;
            if (const auto* values = list("pop-size")) {
                for (const auto& [text, line] : *values) {
                    sizes.emplace_back(parse_count(text, line, "pop-size"), line);
                }
            } else if (const auto* values = list("pop-mult")) {
                for (const auto& [text, line] : *values) {
                    const double factor = parse_number<double>(text, line, "pop-mult");
                    std::size_t front = 0;
                    try {
                        front = default_population(problem, n);
                    } catch (const InvalidParameter& error) {
                        throw SpecError(n_line, error.what());
                    }
                    sizes.emplace_back(scaled_ceil(factor, front), line);
                }
            } else {
                try {
                    sizes.emplace_back(default_population(problem, n), n_line);
                } catch (const InvalidParameter& error) {
                    throw SpecError(n_line, error.what());
                }
            }
            std::vector<std::pair<std::size_t, std::size_t>> divisions;
            if (algorithm == Algorithm::nsga2) {
                divisions.emplace_back(0, 0);
            } else if (const auto* values = list("divisions")) {
                for (const auto& [text, line] : *values) {
                    divisions.emplace_back(parse_count(text, line, "divisions"), line);
                }
            } else if (const auto* values = list("divisions-per-n")) {
                for (const auto& [text, line] : *values) {
                    divisions.emplace_back(
                        scaled_ceil(parse_number<double>(text, line, "divisions-per-n"), n), line);
                }
            } else {
                divisions.emplace_back(scaled_ceil(4.65, n), n_line);
            }
            for (const auto& [size, size_line] : sizes) {
                for (const auto& [p, p_line] : divisions) {
                    for (double chi : chis) {
                        RunConfig config;
                        config.problem = problem;
                        config.n = n;
                        config.population_size = size;
                        config.algorithm = algorithm;
                        config.divisions = p;
                        config.crossover_rate = chi;
                        config.mutation_prob = mutation;
                        config.max_iterations = iterations;
                        config.stop = spec.stop;
                        try {
                            config.validate();
                        } catch (const ConfigError& error) {
                            throw SpecError(std::max({n_line, size_line, p_line}), error.what());
                        }
                        for (std::size_t s = 0; s < seeds; ++s) {
                            config.run_id = spec.runs.size();
                            config.seed = derive_stream_seed(spec.master_seed, config.run_id);
                            spec.runs.push_back(config);
                            spec.config_of.push_back(spec.config_count);
                        }
                        ++spec.config_count;
                    }
                }
            }
        }
    }
    return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read spec file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json = first != std::string::npos && text[first] == '{';
    return expand_spec(json ? parse_spec_json(text) : parse_spec_text(text), seed_override);
}

std::string run_csv_header() {
    return "run_id,algo,n,N,p,chi,seed,iteration,covered,front_size,losses_cum,new_covered\n";
}

std::string run_csv_row(const RunConfig& config, const RunRecord& record) {
    std::ostringstream row;
    row << record.run_id << ',' << to_string(config.algorithm) << ',' << config.n << ','
        << config.population_size << ',' << config.divisions << ','
        << format_double(config.crossover_rate, "%g") << ',' << config.seed << ','
        << record.iteration << ',' << record.covered << ',' << record.front_size << ','
        << record.losses_cumulative << ',' << record.new_covered << '\n';
    return row.str();
}

std::vector<RunOutput> execute(const std::vector<RunConfig>& runs, std::size_t jobs) {
    std::vector<RunOutput> outputs(runs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) {
                return;
            }
            try {
                std::string rows;
                outputs[i].summary = run(runs[i], [&](const RunRecord& record) {
                    rows += run_csv_row(runs[i], record);
                });
                outputs[i].csv_rows = std::move(rows);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = runs.size();
                return;
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(runs.size(), 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < jobs; ++t) {
            threads.emplace_back(worker);
        }
        for (auto& thread : threads) {
            thread.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return outputs;
}

std::string summary_csv(const ExperimentSpec& spec, const std::vector<RunOutput>& outputs) {
    std::ostringstream csv;
    csv << "config_id,problem,algo,n,N,p,chi,runs,covered_runs,mean_iters,median_iters,max_iters\n";
    for (std::size_t c = 0; c < spec.config_count; ++c) {
        const RunConfig* config = nullptr;
        std::size_t runs = 0;
        std::vector<double> times;
        for (std::size_t i = 0; i < spec.runs.size(); ++i) {
            if (spec.config_of[i] != c) {
                continue;
            }
            config = &spec.runs[i];
            ++runs;
            if (outputs[i].summary.first_full_coverage) {
                times.push_back(static_cast<double>(*outputs[i].summary.first_full_coverage));
            }
        }
        const SampleSummary stats = summarize(times);
        csv << c << ',' << to_string(config->problem) << ',' << to_string(config->algorithm) << ','
            << config->n << ',' << config->population_size << ',' << config->divisions << ','
            << format_double(config->crossover_rate, "%g") << ',' << runs << ',' << times.size()
            << ',';
        if (times.empty()) {
            csv << "NA,NA,NA\n";
        } else {
            csv << format_double(stats.mean, "%.6f") << ',' << format_double(stats.median, "%.6f")
                << ',' << format_double(stats.max, "%.6f") << '\n';
        }
    }
    return csv.str();
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path temporary = path;
    temporary += ".tmp";
    {
        std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + temporary.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("failed writing " + temporary.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(temporary, path, ec);
    if (ec) {
        throw std::runtime_error("cannot move " + temporary.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

namespace {

class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

std::optional<std::uint64_t> environment_seed() {
    const char* text = std::getenv("MOEA_LAB_SEED");
    if (!text || !*text) {
        return std::nullopt;
    }
    const std::string value = text;
    if (value.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError("MOEA_LAB_SEED must be a non-negative integer");
    }
    return std::stoull(value);
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << content;
    } else {
        write_file_atomically(out_path, content);
    }
}

std::string report_row(const AngleReport& report) {
    std::ostringstream row;
    row << report.n << ',' << report.p << ',' << format_double(report.min_pairwise_angle, "%.17g")
        << ',' << format_double(report.max_assoc_angle, "%.17g") << ','
        << (report.separated ? "true" : "false") << ',' << report.collisions << '\n';
    return row.str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"NSGA-III / NSGA-II experiments on OneMinMax benchmarks", "moea-lab"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "execute runs of one configuration, CSV per iteration");
    std::string problem_name = "3omm";
    std::size_t n = 0;
    std::size_t pop_size = 0;
    std::string algo_name = "nsga3";
    std::size_t divisions = 0;
    std::size_t iterations = 1000;
    std::size_t seeds = 1;
    std::uint64_t seed = 1;
    double crossover_rate = 0.0;
    double mutation_prob = 0.0;
    std::string stop_name = "iters";
    std::size_t jobs = 1;
    std::string out_path;
    run_cmd->add_option("--problem", problem_name, "omm or 3omm")->check(CLI::IsMember({"omm", "3omm"}));
    run_cmd->add_option("--n", n, "genome length")->required();
    auto* pop_opt = run_cmd->add_option("--pop-size", pop_size, "population size (default: front size)");
    run_cmd->add_option("--algo", algo_name, "nsga2 or nsga3")->check(CLI::IsMember({"nsga2", "nsga3"}));
    auto* div_opt = run_cmd->add_option("--divisions", divisions, "reference point divisions (nsga3)");
    run_cmd->add_option("--iterations", iterations, "iteration budget");
    run_cmd->add_option("--seeds", seeds, "number of runs")->check(CLI::PositiveNumber);
    auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed");
    run_cmd->add_option("--crossover-rate", crossover_rate, "probability of recombining a pair")
        ->check(CLI::Range(0.0, 1.0));
    auto* mut_opt = run_cmd->add_option("--mutation-prob", mutation_prob, "bit flip probability (default 1/n)")
                        ->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--stop", stop_name, "iters, coverage or monitor")
        ->check(CLI::IsMember({"iters", "coverage", "monitor"}));
    run_cmd->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out_path, "CSV output file (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "expand a spec file and run every configuration");
    std::string spec_path;
    std::string sweep_out = "sweep_out";
    std::size_t sweep_jobs = 1;
    std::uint64_t sweep_seed = 1;
    sweep_cmd->add_option("spec", spec_path, "spec file (key=value lines or JSON)")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_option("--jobs", sweep_jobs, "parallel runs")->check(CLI::PositiveNumber);
    auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "master seed");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "unique-association check over the 3-OMM front");
    std::vector<std::size_t> verify_n;
    std::vector<std::size_t> verify_p;
    std::string verify_out;
    verify_cmd->add_option("--n", verify_n, "even genome lengths")->required()->delimiter(',');
    verify_cmd->add_option("--p", verify_p, "divisions")->required()->delimiter(',');
    verify_cmd->add_option("--out", verify_out, "CSV output file (default stdout)");

    // verify-min-p
    auto* minp_cmd = app.add_subcommand("verify-min-p", "least collision-free number of divisions");
    std::vector<std::size_t> minp_n;
    std::size_t p_min = 1;
    std::size_t p_max = 0;
    std::string minp_out;
    minp_cmd->add_option("--n", minp_n, "even genome lengths")->required()->delimiter(',');
    minp_cmd->add_option("--p-min", p_min, "first p scanned");
    minp_cmd->add_option("--p-max", p_max, "last p scanned")->required();
    minp_cmd->add_option("--out", minp_out, "CSV output file (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& error) {
        err << "moea-lab: " << error.what() << '\n';
        return 2;
    }

    try {
        if (run_cmd->parsed()) {
            const Algorithm algorithm = parse_algorithm(algo_name);
            if (algorithm == Algorithm::nsga2 && div_opt->count() > 0) {
                throw UsageError("--divisions only applies to --algo nsga3");
            }
            const ProblemKind problem = parse_problem_kind(problem_name);
            RunConfig config;
            config.problem = problem;
            config.n = n;
            config.algorithm = algorithm;
            config.crossover_rate = crossover_rate;
            config.max_iterations = iterations;
            config.stop = parse_stop_policy(stop_name);
            if (mut_opt->count() > 0) {
                config.mutation_prob = mutation_prob;
            }
            try {
                config.population_size = pop_opt->count() > 0 ? pop_size : default_population(problem, n);
            } catch (const InvalidParameter& error) {
                throw UsageError(error.what());
            }
            if (algorithm == Algorithm::nsga3) {
                config.divisions = div_opt->count() > 0 ? divisions : scaled_ceil(4.65, n);
            }
            config.validate();
            std::uint64_t master = 1;
            if (auto env = environment_seed()) {
                master = *env;
            }
            if (seed_opt->count() > 0) {
                master = seed;
            }
            std::vector<RunConfig> runs;
            for (std::size_t s = 0; s < seeds; ++s) {
                config.run_id = s;
                config.seed = derive_stream_seed(master, s);
                runs.push_back(config);
            }
            const auto outputs = execute(runs, jobs);
            std::string csv = run_csv_header();
            for (const auto& output : outputs) {
                csv += output.csv_rows;
            }
            emit(out_path, csv, out);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            std::optional<std::uint64_t> master = environment_seed();
            if (sweep_seed_opt->count() > 0) {
                master = sweep_seed;
            }
            const ExperimentSpec spec = load_spec(spec_path, master);
            if (spec.runs.empty()) {
                throw UsageError("spec expands to no runs");
            }
            const std::filesystem::path dir(sweep_out);
            std::filesystem::create_directories(dir);
            const auto outputs = execute(spec.runs, sweep_jobs);
            std::string merged = run_csv_header();
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "run_%04zu.csv", i);
                write_file_atomically(dir / name, run_csv_header() + outputs[i].csv_rows);
                merged += outputs[i].csv_rows;
            }
            write_file_atomically(dir / "runs.csv", merged);
            write_file_atomically(dir / "summary.csv", summary_csv(spec, outputs));
            return 0;
        }

        if (verify_cmd->parsed()) {
            std::string csv = "n,p,min_pairwise_angle,max_assoc_angle,separated,collisions\n";
            for (auto length : verify_n) {
                for (auto p : verify_p) {
                    try {
                        csv += report_row(verify_unique_association(length, p));
                    } catch (const InvalidParameter& error) {
                        throw UsageError(error.what());
                    }
                }
            }
            emit(verify_out, csv, out);
            return 0;
        }

        if (minp_cmd->parsed()) {
            std::string csv = "n,p_min,lower_bound,p_max,min_pairwise_angle,max_assoc_angle,separated,collisions\n";
            for (auto length : minp_n) {
                MinimalPResult result;
                try {
                    if (length == 0 || length % 2 != 0) {
                        throw InvalidParameter("n must be positive and even");
                    }
                    result = minimal_p_search(length, p_min, p_max);
                } catch (const InvalidParameter& error) {
                    throw UsageError(error.what());
                }
                std::ostringstream row;
                row << length << ',';
                if (result.p) {
                    row << *result.p;
                } else {
                    row << "NA";
                }
                row << ',' << result.lower_bound << ',' << p_max << ',';
                if (result.report) {
                    row << format_double(result.report->min_pairwise_angle, "%.17g") << ','
                        << format_double(result.report->max_assoc_angle, "%.17g") << ','
                        << (result.report->separated ? "true" : "false") << ','
                        << result.report->collisions << '\n';
                } else {
                    row << "NA,NA,NA,NA\n";
                }
                csv += row.str();
            }
            emit(minp_out, csv, out);
            return 0;
        }
    } catch (const ConfigError& error) {
        err << "moea-lab: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        err << "moea-lab: " << error.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace moea::lab
