#include "moea/genome.hpp"

#include <bit>

#include "moea/errors.hpp"

namespace moea {

double RandomSource::uniform01() {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

bool RandomSource::bernoulli(double prob) {
    return uniform01() < prob;
}

std::size_t RandomSource::below(std::size_t bound) {
    if (bound == 0) {
        throw InvalidParameter("below: bound must be positive");
    }
    const auto range = static_cast<std::uint64_t>(bound);
    // Largest multiple of range that fits, minus one.
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % range + 1) % range;
    for (;;) {
        const std::uint64_t word = next_word();
        if (word <= limit) {
            return static_cast<std::size_t>(word % range);
        }
    }
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    // splitmix64 finalizer over a combination of both inputs
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (run_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Genome::Genome(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

Genome Genome::from_string(std::string_view bits) {
    GenomeBuilder builder(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            builder.set(i, true);
        } else if (bits[i] != '0') {
            throw InvalidParameter("genome string may only contain '0' and '1'");
        }
    }
    return std::move(builder).build();
}

std::size_t Genome::count_ones() const noexcept {
    std::size_t total = 0;
    for (auto word : words_) {
        total += static_cast<std::size_t>(std::popcount(word));
    }
    return total;
}

std::size_t Genome::count_ones(std::size_t first, std::size_t last) const noexcept {
    std::size_t total = 0;
    for (std::size_t i = first; i < last; ++i) {
        total += (*this)[i] ? 1 : 0;
    }
    return total;
}

std::size_t Genome::hamming_distance(const Genome& other) const {
    if (other.size_ != size_) {
        throw InvalidParameter("hamming_distance: genome lengths differ");
    }
    std::size_t total = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        total += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
    }
    return total;
}

std::string Genome::to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) {
            out[i] = '1';
        }
    }
    return out;
}

Genome random_genome(std::size_t n, RandomSource& rng) {
    if (n == 0) {
        throw InvalidParameter("random_genome: length must be positive");
    }
    GenomeBuilder builder(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) {
            word = rng.next_word();
        }
        builder.set(i, (word >> (i % 64)) & 1U);
    }
    return std::move(builder).build();
}

Genome standard_bit_mutation(const Genome& parent, double flip_prob, RandomSource& rng) {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
        throw InvalidParameter("standard_bit_mutation: flip probability must lie in [0, 1]");
    }
    if (parent.size() == 0) {
        throw InvalidParameter("standard_bit_mutation: empty parent");
    }
    GenomeBuilder child(parent);
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (rng.bernoulli(flip_prob)) {
            child.flip(i);
        }
    }
    return std::move(child).build();
}

std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b, double swap_prob,
                                            RandomSource& rng) {
    if (a.size() != b.size()) {
        throw InvalidParameter("uniform_crossover: parents differ in length");
    }
    if (!(swap_prob >= 0.0 && swap_prob <= 1.0)) {
        throw InvalidParameter("uniform_crossover: swap probability must lie in [0, 1]");
    }
    GenomeBuilder first(a);
    GenomeBuilder second(b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (rng.bernoulli(swap_prob)) {
            first.set(i, b[i]);
            second.set(i, a[i]);
        }
    }
    return {std::move(first).build(), std::move(second).build()};
}

} // namespace moea
