#include <groth/synth.hpp>
#include <groth/error.hpp>
#include <groth/parallel.hpp>

#include <algorithm>
#include <numeric>

namespace groth {
namespace {

constexpr unsigned max_design_attempts = 32;

} // namespace

CoeffMode parse_coeff_mode(const std::string& s)
{
    if (s == "unit-norm") return CoeffMode::unit_norm;
    if (s == "dynamic-range") return CoeffMode::dynamic_range;
    if (s == "heterogeneous") return CoeffMode::heterogeneous;
    throw invalid_input("unknown coefficient mode '" + s + "'");
}

std::string to_string(CoeffMode mode)
{
    switch (mode) {
    case CoeffMode::unit_norm: return "unit-norm";
    case CoeffMode::dynamic_range: return "dynamic-range";
    case CoeffMode::heterogeneous: return "heterogeneous";
    }
    return "?";
}

RangeDirection parse_range_direction(const std::string& s)
{
    if (s == "down") return RangeDirection::down;
    if (s == "up") return RangeDirection::up;
    throw invalid_input("unknown dynamic-range direction '" + s + "'");
}

std::string to_string(RangeDirection dir)
{
    return dir == RangeDirection::down ? "down" : "up";
}

void SynthSpec::validate() const
{
    if (n < 1 || m < 1 || r < 1) throw invalid_input("n, m, r must be positive");
    if (r > n) throw invalid_input("r must not exceed n");
    if (k < 1 || k > m) throw invalid_input("k must lie in 1..m");
    if (!(dynamic_range >= 1.0)) throw invalid_input("dynamic range must be >= 1");
    if (coeff_mode == CoeffMode::dynamic_range && k < 2) {
        throw invalid_input("dynamic-range coefficients need k >= 2");
    }
}

DesignSample gen_design(const SynthSpec& spec, unsigned threads)
{
    if (spec.n < 1 || spec.m < 1 || spec.r < 1 || spec.r > spec.n) {
        throw invalid_input("gen_design needs 1 <= r <= n and m >= 1");
    }
    const index_t n = spec.n, m = spec.m, r = spec.r;
    Eigen::MatrixXd data(n, m * r);
    std::vector<unsigned> attempts(static_cast<std::size_t>(m), 0);

    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t gi) {
        auto block = data.middleCols(static_cast<index_t>(gi) * r, r);
        for (unsigned attempt = 0; attempt < max_design_attempts; ++attempt) {
            Rng rng(stream_key(spec.seed, "design", {gi, attempt}));
            for (index_t c = 0; c < r; ++c) {
                for (index_t row = 0; row < n; ++row) block(row, c) = rng.normal();
            }
            if (orthonormalize_in_place(block)) {
                attempts[gi] = attempt;
                return;
            }
        }
        throw degenerate_group(static_cast<long>(gi + 1), "group could not be drawn full rank");
    });

    std::vector<index_t> resampled;
    for (std::size_t gi = 0; gi < attempts.size(); ++gi) {
        if (attempts[gi] > 0) resampled.push_back(static_cast<index_t>(gi) + 1);
    }
    return DesignSample{GroupedDesign(std::move(data), r), std::move(resampled)};
}

std::vector<index_t> sample_permutation_prefix(index_t m, index_t k, Rng& rng)
{
    if (k < 0 || k > m) throw invalid_input("permutation prefix longer than m");
    std::vector<index_t> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), index_t{1});
    for (index_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<index_t>(rng.below(static_cast<std::uint64_t>(m - i)));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(static_cast<std::size_t>(k));
    return perm;
}

std::vector<index_t> sample_support(index_t m, index_t k, std::uint64_t seed,
                                    std::uint64_t trial_id)
{
    Rng rng(stream_key(seed, "support", {trial_id}));
    auto out = sample_permutation_prefix(m, k, rng);
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::MatrixXd gen_coefficient_blocks(const SynthSpec& spec)
{
    spec.validate();
    Rng rng(stream_key(spec.seed, "coefficients", {spec.trial_id}));
    Eigen::MatrixXd blocks(spec.r, spec.k);
    for (index_t b = 0; b < spec.k; ++b) {
        double nrm = 0.0;
        do {
            for (index_t e = 0; e < spec.r; ++e) blocks(e, b) = rng.normal();
            nrm = blocks.col(b).norm();
        } while (nrm == 0.0);
        blocks.col(b) /= nrm;
    }
    if (spec.coeff_mode == CoeffMode::dynamic_range) {
        const auto pick = static_cast<index_t>(rng.below(static_cast<std::uint64_t>(spec.k)));
        const double scale = spec.dr_direction == RangeDirection::down
            ? 1.0 / spec.dynamic_range
            : spec.dynamic_range;
        blocks.col(pick) *= scale;
    }
    return blocks;
}

GroupedVector assemble_coefficients(index_t m, const Eigen::MatrixXd& blocks,
                                    std::span<const index_t> groups)
{
    if (static_cast<index_t>(groups.size()) != blocks.cols()) {
        throw dimension_mismatch("one block per group expected");
    }
    GroupedVector beta(m, blocks.rows());
    for (std::size_t b = 0; b < groups.size(); ++b) {
        beta.set_block(groups[b], blocks.col(static_cast<index_t>(b)));
    }
    return beta;
}

GroupedVector gen_coefficients(const SynthSpec& spec, std::span<const index_t> support)
{
    if (static_cast<index_t>(support.size()) != spec.k) {
        throw dimension_mismatch("support size differs from spec.k");
    }
    return assemble_coefficients(spec.m, gen_coefficient_blocks(spec), support);
}

Response synthesize_response(const GroupedDesign& x, const GroupedVector& beta)
{
    if (beta.m() != x.m() || beta.r() != x.r()) {
        throw dimension_mismatch("beta is not blocked like the design");
    }
    Response y = Response::Zero(x.n());
    for (index_t i : beta.support()) y.noalias() += x.group(i) * beta.block(i);
    return y;
}

double dynamic_range_of(const GroupedVector& beta)
{
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (index_t i : beta.support()) {
        const double v = beta.block_norm(i);
        lo = any ? std::min(lo, v) : v;
        hi = any ? std::max(hi, v) : v;
        any = true;
    }
    if (!any) throw invalid_input("dynamic range of a zero vector");
    return hi / lo;
}

} // namespace groth
