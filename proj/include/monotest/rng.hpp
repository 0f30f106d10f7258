#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace monotest {

// Seeded stream over std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Every derived variate uses a transform written out here, so a
// seed reproduces the same numbers on any conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next() {
        ++raw_draws_;
        return engine_();
    }

    // Uniform on {1, ..., m}. Lemire's multiply-shift with rejection, so the
    // result carries no modulo bias.
    std::size_t uniform_index(std::size_t m);

    // Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform_open();

    // Standard normal by the Marsaglia polar method; the second variate of
    // each accepted pair is cached and returned on the next call.
    double standard_normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t raw_draws() const { return raw_draws_; }
    std::uint64_t index_draws() const { return index_draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t raw_draws_ = 0;
    std::uint64_t index_draws_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a over the bytes of a name, for mixing labels into seeds.
std::uint64_t hash_label(std::string_view label);

// Folds the parts into a single seed with splitmix64 chaining. Stable across
// versions: changing this changes every recorded experiment.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts);

}  // namespace monotest
