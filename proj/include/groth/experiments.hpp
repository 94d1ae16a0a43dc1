#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <groth/config.hpp>
#include <groth/synth.hpp>
#include <groth/trial_record.hpp>
#include <groth/validate.hpp>

namespace groth {

enum class ExperimentId
{
    fig1a,
    fig1b,
    fig1c,
    fig2,
    theorem,
};

ExperimentId parse_experiment_id(const std::string& s);
std::string to_string(ExperimentId id);

enum class Preset
{
    desk,
    paper,
};

Preset parse_preset(const std::string& s);
std::string to_string(Preset preset);

/**
 * Grid and trial settings of one experiment.
 *
 *  fig1a, fig1b  p, n (list), m (list; r = p / m), trials = design replicates
 *  fig1c         n, p, r (one value), rk (list; k = rk / r), dynamic_range (list)
 *  fig2          n, p, r (list; m = p / r), rk (list)
 *  theorem       n, m, r (one value), k
 */
struct ExperimentConfig
{
    ExperimentId experiment = ExperimentId::fig1a;
    Preset preset = Preset::desk;
    std::uint64_t seed = 1;
    index_t trials = 1;

    index_t p = 0;
    std::vector<index_t> n_values;
    std::vector<index_t> m_values;
    std::vector<index_t> r_values;
    std::vector<index_t> rk_values;
    index_t k = 0;

    std::vector<double> dynamic_ranges{1.0};
    RangeDirection dr_direction = RangeDirection::down;
    CoeffMode coeff_mode = CoeffMode::unit_norm;

    TheoremConstants constants;
    BetaMode beta_mode = BetaMode::fixed;

    void validate() const;
};

/// Built-in grid for an experiment at the given scale.
ExperimentConfig preset_config(ExperimentId id, Preset preset);

/// Starts from the preset (`preset_override`, else the file's `preset` key, else
/// desk) and applies every other key of the file on top. Unknown keys are errors.
ExperimentConfig make_config(ExperimentId id, const KeyValueConfig& file,
                             std::optional<Preset> preset_override = std::nullopt);

/// The config as key = value text; make_config on it reproduces the config.
std::string format_config(const ExperimentConfig& cfg);

struct RunOptions
{
    unsigned threads = 1;
    /// Fill each row's wall_time; off by default so output is reproducible.
    bool timing = false;
};

/**
 * Runs every trial of the experiment. Rows come sorted by (grid index, kind,
 * trial id, method), trial rows before the summary rows of their grid point.
 * The result does not depend on options.threads.
 */
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::vector<TrialRecord> run_fig1a(const ExperimentConfig& cfg, const RunOptions& options = {});
std::vector<TrialRecord> run_fig1b(const ExperimentConfig& cfg, const RunOptions& options = {});
std::vector<TrialRecord> run_fig1c(const ExperimentConfig& cfg, const RunOptions& options = {});
std::vector<TrialRecord> run_fig2(const ExperimentConfig& cfg, const RunOptions& options = {});
std::vector<TrialRecord> run_theorem(const ExperimentConfig& cfg, const RunOptions& options = {});

/// FNV-1a over the column-major bytes of the design matrix.
std::uint64_t design_fingerprint(const GroupedDesign& x);

} // namespace groth
