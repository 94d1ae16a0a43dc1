#include <groth/rng.hpp>

#include <cmath>

namespace groth {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t basis) noexcept
{
    std::uint64_t h = basis;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    return fnv1a64(std::as_bytes(std::span(text.data(), text.size())));
}

std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                         std::initializer_list<std::uint64_t> ids) noexcept
{
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ fnv1a64(tag));
    for (std::uint64_t id : ids) h = mix64(h ^ mix64(id));
    return h;
}

double Rng::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    const std::uint64_t floor = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= floor) return x % bound;
    }
}

double Rng::normal()
{
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    return u * factor;
}

} // namespace groth
