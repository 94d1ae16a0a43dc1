#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>
#include <groth/grouped_linalg.hpp>

namespace groth {

inline constexpr const char* trial_record_schema = "groth-lab trial-record v1";

/**
 * One CSV row of an experiment or validation run.
 *
 * kind is "trial" for a single Monte-Carlo draw and "summary" for the mean over
 * the trials of one grid point and method; in summary rows fdp, ndp, inclusion
 * and sufficient hold averages (rates) and trial_id counts the trials.
 * Fields that do not apply to an experiment are left empty.
 */
struct TrialRecord
{
    std::string kind = "trial";
    std::string experiment;
    index_t grid_index = 0;
    index_t n = 0;
    index_t m = 0;
    index_t r = 0;
    index_t k = 0;
    double dynamic_range = 1.0;
    std::uint64_t trial_id = 0;
    std::uint64_t seed = 0;
    std::optional<double> mu;
    std::optional<double> nu;
    std::optional<double> fdp;
    std::optional<double> ndp;
    std::optional<index_t> L;
    std::optional<double> inclusion;
    std::optional<double> sufficient;
    std::string method;
    std::uint64_t input_hash = 0;
    double wall_time = 0.0;
};

std::string trial_csv_header();
std::string trial_csv_row(const TrialRecord& rec);

/// Writes the schema comment, an optional timestamp comment, the header and rows.
/// The timestamp line ("# generated ...") is the only non-reproducible content.
void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& rows,
                     const std::string& timestamp_comment);

/// Parses a CSV produced by write_trial_csv (comments skipped).
std::vector<TrialRecord> read_trial_csv(std::istream& is);

} // namespace groth
