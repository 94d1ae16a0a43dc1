#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>
#include <groth/grouped_linalg.hpp>
#include <groth/rng.hpp>

namespace groth {

enum class CoeffMode
{
    unit_norm,     ///< every nonzero block has unit l2 norm
    dynamic_range, ///< one block rescaled so that max/min block norm = D
    heterogeneous, ///< unit block norms, unequal magnitudes inside a block
};

/// Which block the dynamic-range mode rescales: one block shrunk to 1/D, or grown to D.
enum class RangeDirection
{
    down,
    up,
};

CoeffMode parse_coeff_mode(const std::string& s);
std::string to_string(CoeffMode mode);
RangeDirection parse_range_direction(const std::string& s);
std::string to_string(RangeDirection dir);

struct SynthSpec
{
    index_t n = 0;
    index_t m = 0;
    index_t r = 0;
    index_t k = 0;
    std::uint64_t seed = 0;
    CoeffMode coeff_mode = CoeffMode::unit_norm;
    double dynamic_range = 1.0;
    RangeDirection dr_direction = RangeDirection::down;
    std::uint64_t trial_id = 0;

    /// Throws invalid_input unless 1 <= r <= n, 1 <= k <= m and D >= 1.
    void validate() const;
};

struct DesignSample
{
    GroupedDesign design;
    /// 1-based groups that had to be redrawn because the first draw was
    /// numerically rank deficient; empty in practice.
    std::vector<index_t> resampled_groups;
};

/// m independent n x r standard-normal blocks, each orthonormalized by
/// Gram-Schmidt. A pure function of (seed, n, m, r); group i draws from
/// substream (seed, "design", i, attempt).
DesignSample gen_design(const SynthSpec& spec, unsigned threads = 1);

/// First k entries of a uniform random permutation of 1..m, in draw order
/// (partial Fisher-Yates).
std::vector<index_t> sample_permutation_prefix(index_t m, index_t k, Rng& rng);

/// Uniform random k-subset of 1..m, sorted; deterministic per (seed, trial_id).
std::vector<index_t> sample_support(index_t m, index_t k, std::uint64_t seed,
                                    std::uint64_t trial_id);

/// The k nonzero blocks as columns of an r x k matrix, drawn from substream
/// (seed, "coefficients", trial_id). The dynamic-range block choice is the last
/// draw, so every D shares the same directions.
Eigen::MatrixXd gen_coefficient_blocks(const SynthSpec& spec);

/// Places block columns into an (r*m) grouped vector at the given 1-based groups.
GroupedVector assemble_coefficients(index_t m, const Eigen::MatrixXd& blocks,
                                    std::span<const index_t> groups);

/// Coefficient vector supported on `support` (sorted groups get blocks in order).
GroupedVector gen_coefficients(const SynthSpec& spec, std::span<const index_t> support);

/// y = sum_{i in support} X_i beta_i (noiseless).
Response synthesize_response(const GroupedDesign& x, const GroupedVector& beta);

/// max over min of the nonzero block norms.
double dynamic_range_of(const GroupedVector& beta);

} // namespace groth
