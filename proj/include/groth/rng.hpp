#pragma once
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string_view>

namespace groth {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ull) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Substream key hash(seed, purpose tag, ids...). Every random draw in the
/// library comes from an Rng constructed from such a key, so results do not
/// depend on scheduling or on how many other streams were used.
std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                         std::initializer_list<std::uint64_t> ids = {}) noexcept;

/**
 * Deterministic random source.
 *
 * Algorithm identity (frozen; changing any of it changes every generated file):
 *  - engine: std::mt19937_64 seeded with the 64-bit stream key;
 *  - uniform01: top 53 bits of one engine output times 2^-53, in [0, 1);
 *  - below(b): OpenBSD-style rejection, x % b once x >= 2^64 mod b;
 *  - normal: Marsaglia polar method on 2*uniform01 - 1, both outputs used in turn.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t key) : engine_(key) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();
    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

} // namespace groth
