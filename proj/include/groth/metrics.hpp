#pragma once
#include <span>
#include <groth/grouped_linalg.hpp>
#include <groth/selection.hpp>

namespace groth {

/// |estimated \ truth| / |estimated|. Inputs are treated as sets.
double fdp(std::span<const index_t> estimated, std::span<const index_t> truth);

/// |truth \ estimated| / |truth|.
double ndp(std::span<const index_t> estimated, std::span<const index_t> truth);

/// k * ||beta_i||^2 / ||beta||^2 with k = |support(beta)|; i must be in the support.
double energy_ratio(const GroupedVector& beta, index_t i);

struct SelectionScore
{
    double fdp = 0.0;
    double ndp = 0.0;
    bool exact = false;
    index_t L = 0;
    double fdp_bound = 1.0;
    double ndp_bound = 1.0;
};

/// FDP/NDP against support(beta) plus the guaranteed bound 1 - L/k, where L
/// counts blocks at or above the noise floor c3 * mu * ||beta|| * sqrt(log m).
SelectionScore score_selection(const ModelEstimate& estimated, const GroupedVector& beta,
                               double mu, double c3, index_t m);

} // namespace groth
