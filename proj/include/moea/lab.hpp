#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moea/engine.hpp"
#include "moea/errors.hpp"

namespace moea::lab {

// Malformed experiment spec; line is 1-based, 0 when unknown.
class SpecError : public ConfigError {
public:
    SpecError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Experiment grid expanded into concrete runs.
struct ExperimentSpec {
    std::vector<RunConfig> runs;  // run_id == position
    // config_of[i] is the grid point (before seed replication) of run i
    std::vector<std::size_t> config_of;
    std::size_t config_count = 0;
    std::uint64_t master_seed = 1;
    StopPolicy stop = StopPolicy::iterations;
};

// Raw key -> values table; repeated keys accumulate.
using SpecTable = std::map<std::string, std::vector<std::pair<std::string, std::size_t>>>;

// Line-oriented key=value text. '#' starts a comment; a value may also be a
// comma-separated list.
SpecTable parse_spec_text(std::string_view text);
// JSON object whose values are scalars or arrays of scalars.
SpecTable parse_spec_json(std::string_view text);
// Validates every grid point; seed overrides the table's `seed` key.
ExperimentSpec expand_spec(const SpecTable& table, std::optional<std::uint64_t> seed_override);
// Reads a file and dispatches on its content ('{' selects JSON).
ExperimentSpec load_spec(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override);

// ceil(factor * base) with a small guard against representation error, so
// 4.65 * 40 gives 186.
std::size_t scaled_ceil(double factor, std::size_t base);

std::string run_csv_header();
std::string run_csv_row(const RunConfig& config, const RunRecord& record);

struct RunOutput {
    std::string csv_rows;  // without header
    RunSummary summary;
};

// Executes the runs on up to `jobs` threads; results are in run order.
std::vector<RunOutput> execute(const std::vector<RunConfig>& runs, std::size_t jobs);

std::string summary_csv(const ExperimentSpec& spec, const std::vector<RunOutput>& outputs);

// Writes via a temporary sibling file and a rename.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

// Entry point of the moea-lab binary; args excludes the program name.
// Returns the process exit code: 0 ok, 1 runtime or I/O failure, 2 usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace moea::lab
