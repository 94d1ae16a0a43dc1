#include <groth/selection.hpp>
#include <groth/error.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace groth {
namespace {

// Indices 0..count-1 ordered by score descending, index ascending; first `keep` only.
std::vector<index_t> top_by_score(const Eigen::VectorXd& scores, index_t keep)
{
    std::vector<index_t> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), index_t{0});
    auto better = [&](index_t a, index_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), better);
    order.resize(static_cast<std::size_t>(keep));
    return order;
}

} // namespace

ModelEstimate select_top_groups(const GroupedVector& f, index_t k)
{
    if (k < 1 || k > f.m()) {
        throw invalid_order("model order k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(f.m()));
    }
    const Eigen::VectorXd norms = f.block_norms();
    if (!norms.allFinite()) throw invalid_input("non-finite marginal correlations");

    ModelEstimate est;
    for (index_t g : top_by_score(norms, k)) {
        est.indices.push_back(g + 1);
        est.scores.push_back(norms[g]);
    }
    return est;
}

ModelEstimate groth_select(const GroupedDesign& x, const Response& y, index_t k)
{
    if (k < 1 || k > x.m()) {
        throw invalid_order("model order k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(x.m()));
    }
    return select_top_groups(marginal_correlations(x, y), k);
}

ColumnModelEstimate individual_threshold_select(const GroupedDesign& x, const Response& y,
                                                index_t s)
{
    if (s < 1 || s > x.p()) {
        throw invalid_order("column model order s = " + std::to_string(s) + " outside 1.." +
                            std::to_string(x.p()));
    }
    const Eigen::VectorXd mags = marginal_correlations(x, y).values().cwiseAbs();
    if (!mags.allFinite()) throw invalid_input("non-finite marginal correlations");

    ColumnModelEstimate est;
    for (index_t c : top_by_score(mags, s)) {
        est.columns.push_back(c + 1);
        est.scores.push_back(mags[c]);
    }
    return est;
}

double noise_floor(double beta_norm, double mu, double c3, index_t m)
{
    if (m < 2) throw invalid_input("noise floor needs m >= 2");
    return c3 * mu * beta_norm * std::sqrt(std::log(static_cast<double>(m)));
}

std::vector<index_t> groups_at_or_above(const GroupedVector& beta, double threshold)
{
    std::vector<index_t> out;
    for (index_t i : beta.support()) {
        if (beta.block_norm(i) >= threshold) out.push_back(i);
    }
    return out;
}

std::vector<index_t> guaranteed_set(const GroupedVector& beta, double mu, double c3, index_t m)
{
    return groups_at_or_above(beta, noise_floor(beta.values().norm(), mu, c3, m));
}

std::vector<double> sorted_block_norms(const GroupedVector& beta)
{
    std::vector<double> norms;
    for (index_t i : beta.support()) norms.push_back(beta.block_norm(i));
    std::sort(norms.begin(), norms.end(), std::greater<>());
    return norms;
}

index_t largest_L(const GroupedVector& beta, double threshold)
{
    const auto norms = sorted_block_norms(beta);
    if (norms.empty()) throw invalid_input("largest_L: beta has empty support");
    index_t count = 0;
    while (count < static_cast<index_t>(norms.size()) && norms[count] >= threshold) ++count;
    return count;
}

SufficientCondition sufficient_condition_holds(const GroupedDesign& x, const GroupedVector& beta,
                                               double threshold_norm)
{
    if (beta.m() != x.m() || beta.r() != x.r()) {
        throw dimension_mismatch("beta is not blocked like the design");
    }
    const auto support = beta.support();
    if (support.empty()) throw invalid_input("sufficient condition: empty support");
    if (static_cast<index_t>(support.size()) >= x.m()) {
        throw invalid_input("sufficient condition: support covers every group");
    }

    Response y = Response::Zero(x.n());
    for (index_t i : support) y.noalias() += x.group(i) * beta.block(i);
    const GroupedVector f = marginal_correlations(x, y);

    SufficientCondition out;
    std::vector<bool> in_support(static_cast<std::size_t>(x.m()) + 1, false);
    for (index_t i : support) {
        in_support[static_cast<std::size_t>(i)] = true;
        out.gram_deviation = std::max(out.gram_deviation, (f.block(i) - beta.block(i)).norm());
    }
    for (index_t i = 1; i <= x.m(); ++i) {
        if (!in_support[static_cast<std::size_t>(i)]) {
            out.cross_correlation = std::max(out.cross_correlation, f.block_norm(i));
        }
    }
    out.holds = threshold_norm > out.gram_deviation + out.cross_correlation;
    return out;
}

} // namespace groth
