#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include <groth/grouped_linalg.hpp>

namespace groth {

struct WorstCaseCoherence
{
    double value = 0.0;
    /// 1-based (i, j), i < j; the lexicographically smallest pair on ties.
    std::pair<index_t, index_t> argmax_pair{1, 2};
};

struct AverageCoherence
{
    double value = 0.0;
    /// 1-based group attaining the maximum; smallest index on ties.
    index_t argmax_group = 1;
};

/// mu = max_{i != j} ||X_i^T X_j||_2 over all m(m-1)/2 pairs.
/// threads = 0 uses every hardware thread; the result does not depend on it.
WorstCaseCoherence worst_case_group_coherence(const GroupedDesign& x, unsigned threads = 1);

/// nu = max_i ||sum_{j != i} X_i^T X_j||_2 / (m - 1).
AverageCoherence average_group_coherence(const GroupedDesign& x, unsigned threads = 1);

struct CoherenceReport
{
    double mu = 0.0;
    double nu = 0.0;
    /// mu * sqrt(log m)
    double grocp1_stat = 0.0;
    /// nu / (mu * sqrt(r log m / n)); empty when mu = 0.
    std::optional<double> grocp2_stat;
    double c_mu = 1.0;
    double c_nu = 1.0;
    bool passes_grocp1 = false;
    bool passes_grocp2 = false;
    std::pair<index_t, index_t> argmax_pair{1, 2};
    index_t argmax_group = 1;
    std::vector<std::string> warnings;
};

/// Checks GroCP-1 (mu <= c_mu / sqrt(log m)) and GroCP-2
/// (nu <= c_nu * mu * sqrt(r log m / n)); natural logarithms, inclusive bounds.
CoherenceReport check_grocp(const GroupedDesign& x, double c_mu = 1.0, double c_nu = 1.0,
                            unsigned threads = 1);

/// Verdicts for precomputed coherences (m, r, n describe the design).
CoherenceReport grocp_verdict(double mu, double nu, index_t n, index_t m, index_t r,
                              double c_mu, double c_nu);

/// Column names of the CSV form, in field order.
std::string coherence_csv_header();
std::string coherence_csv_row(const CoherenceReport& report);
std::string coherence_text(const CoherenceReport& report);

} // namespace groth
