#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moea {

// Source of raw 64-bit words. Every random decision in the library is derived
// from next_word() through the helpers below, so a run replays bit-exactly
// from its seed on any platform.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual std::uint64_t next_word() = 0;

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();
    // true with probability `prob`; always consumes one word.
    bool bernoulli(double prob);
    // Uniform in [0, bound); bound must be positive. Rejection sampling, so the
    // number of words consumed varies.
    std::size_t below(std::size_t bound);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }
};

// Mersenne twister stream. mt19937_64 is specified exactly by the standard,
// unlike the std distributions, which is why the helpers above do the mapping.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t next_word() override { return engine_(); }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Seed of the dedicated stream for run `run_index` under `master_seed`.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t run_index);

class Genome {
public:
    Genome() = default;
    // All-zero genome of length n.
    explicit Genome(std::size_t n);
    // Parses a string of '0'/'1' characters, first character is bit 0.
    static Genome from_string(std::string_view bits);

    std::size_t size() const noexcept { return size_; }
    bool operator[](std::size_t i) const noexcept {
        return (words_[i / 64] >> (i % 64)) & 1U;
    }
    std::size_t count_ones() const noexcept;
    // Ones among positions [first, last).
    std::size_t count_ones(std::size_t first, std::size_t last) const noexcept;
    std::size_t hamming_distance(const Genome& other) const;

    std::string to_string() const;

    bool operator==(const Genome&) const = default;

private:
    friend class GenomeBuilder;

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Mutable staging area used by the variation operators; Genome itself only
// exposes reads.
class GenomeBuilder {
public:
    explicit GenomeBuilder(std::size_t n) : genome_(n) {}
    explicit GenomeBuilder(Genome base) : genome_(std::move(base)) {}

    void set(std::size_t i, bool value) noexcept {
        auto& word = genome_.words_[i / 64];
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        word = value ? (word | mask) : (word & ~mask);
    }
    void flip(std::size_t i) noexcept {
        genome_.words_[i / 64] ^= std::uint64_t{1} << (i % 64);
    }
    bool get(std::size_t i) const noexcept { return genome_[i]; }

    Genome build() && { return std::move(genome_); }

private:
    Genome genome_;
};

Genome random_genome(std::size_t n, RandomSource& rng);

// Flips every bit independently with probability flip_prob.
Genome standard_bit_mutation(const Genome& parent, double flip_prob, RandomSource& rng);

// Exchanges the bits of a and b at each position independently with
// probability swap_prob.
std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b, double swap_prob,
                                            RandomSource& rng);

} // namespace moea
