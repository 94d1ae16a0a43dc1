#pragma once
#include <vector>
#include <groth/grouped_linalg.hpp>

namespace groth {

/// Selected groups (1-based), best first, with their ||f_i||_2 scores.
struct ModelEstimate
{
    std::vector<index_t> indices;
    std::vector<double> scores;
};

/// Selected columns (1-based), best first, with their |f_j| scores.
struct ColumnModelEstimate
{
    std::vector<index_t> columns;
    std::vector<double> scores;
};

/// The k groups with the largest block norms of f; ties go to the smaller index.
ModelEstimate select_top_groups(const GroupedVector& f, index_t k);

/// Group thresholding: rank groups by ||X_i^T y||_2 and keep the first k.
ModelEstimate groth_select(const GroupedDesign& x, const Response& y, index_t k);

/// Baseline that ignores grouping: rank columns by |x_j^T y| and keep s.
ColumnModelEstimate individual_threshold_select(const GroupedDesign& x, const Response& y,
                                                index_t s);

/// c3 * mu * ||beta||_2 * sqrt(log m), the level above which inclusion is guaranteed.
double noise_floor(double beta_norm, double mu, double c3, index_t m);

/// { i in support(beta) : ||beta_i||_2 >= threshold }, sorted.
std::vector<index_t> groups_at_or_above(const GroupedVector& beta, double threshold);

/// Groups of beta whose energy clears the noise floor (inclusive).
std::vector<index_t> guaranteed_set(const GroupedVector& beta, double mu, double c3, index_t m);

/// Number of support blocks with norm >= threshold (the largest L such that
/// the L-th largest block norm still clears it). Throws on empty support.
index_t largest_L(const GroupedVector& beta, double threshold);

/// Support block norms sorted in descending order.
std::vector<double> sorted_block_norms(const GroupedVector& beta);

struct SufficientCondition
{
    bool holds = false;
    /// ||(X_K^T X_K - I) beta_K||_{2,inf}
    double gram_deviation = 0.0;
    /// ||X_{K^c}^T X_K beta_K||_{2,inf}
    double cross_correlation = 0.0;
};

/// threshold_norm > gram_deviation + cross_correlation (strict), with K = support(beta).
/// Requires 1 <= |K| < m.
SufficientCondition sufficient_condition_holds(const GroupedDesign& x, const GroupedVector& beta,
                                               double threshold_norm);

} // namespace groth
