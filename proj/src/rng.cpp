#include "monotest/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace monotest {

__extension__ typedef unsigned __int128 u128;

std::size_t RandomStream::uniform_index(std::size_t m) {
    if (m == 0) throw std::invalid_argument("uniform_index: empty range");
    ++index_draws_;
    const auto range = static_cast<std::uint64_t>(m);
    auto product = static_cast<u128>(next()) * range;
    auto low = static_cast<std::uint64_t>(product);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            product = static_cast<u128>(next()) * range;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::size_t>(product >> 64) + 1;
}

double RandomStream::uniform_open() {
    // (k + 0.5) / 2^53 never hits 0 or 1.
    const std::uint64_t k = next() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform_open() - 1.0;
        v = 2.0 * uniform_open() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace monotest
