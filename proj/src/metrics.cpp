#include <groth/metrics.hpp>
#include <groth/error.hpp>

#include <algorithm>
#include <vector>

namespace groth {
namespace {

std::vector<index_t> as_set(std::span<const index_t> xs)
{
    std::vector<index_t> out(xs.begin(), xs.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t difference_size(const std::vector<index_t>& a, const std::vector<index_t>& b)
{
    std::vector<index_t> diff;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return diff.size();
}

} // namespace

double fdp(std::span<const index_t> estimated, std::span<const index_t> truth)
{
    const auto est = as_set(estimated);
    if (est.empty()) throw undefined_metric("FDP of an empty estimate");
    const auto tru = as_set(truth);
    return static_cast<double>(difference_size(est, tru)) / static_cast<double>(est.size());
}

double ndp(std::span<const index_t> estimated, std::span<const index_t> truth)
{
    const auto tru = as_set(truth);
    if (tru.empty()) throw undefined_metric("NDP with an empty true model");
    const auto est = as_set(estimated);
    return static_cast<double>(difference_size(tru, est)) / static_cast<double>(tru.size());
}

double energy_ratio(const GroupedVector& beta, index_t i)
{
    const auto support = beta.support();
    if (!std::binary_search(support.begin(), support.end(), i)) {
        throw invalid_input("energy_ratio: group " + std::to_string(i) + " is not in the support");
    }
    const double total = beta.values().squaredNorm();
    const double own = beta.block(i).squaredNorm();
    return static_cast<double>(support.size()) * own / total;
}

SelectionScore score_selection(const ModelEstimate& estimated, const GroupedVector& beta,
                               double mu, double c3, index_t m)
{
    const auto truth = beta.support();
    SelectionScore s;
    s.fdp = fdp(estimated.indices, truth);
    s.ndp = ndp(estimated.indices, truth);
    s.exact = s.fdp == 0.0 && s.ndp == 0.0 && as_set(estimated.indices).size() == truth.size();

    const double floor = noise_floor(beta.values().norm(), mu, c3, m);
    s.L = largest_L(beta, floor);
    const double k = static_cast<double>(truth.size());
    s.fdp_bound = 1.0 - static_cast<double>(s.L) / k;
    s.ndp_bound = s.fdp_bound;
    return s;
}

} // namespace groth
