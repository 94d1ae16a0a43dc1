#include <groth/experiments.hpp>
#include <groth/coherence.hpp>
#include <groth/error.hpp>
#include <groth/io.hpp>
#include <groth/metrics.hpp>
#include <groth/parallel.hpp>
#include <groth/selection.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace groth {
namespace {

using clock_type = std::chrono::steady_clock;

std::vector<index_t> to_index_list(const std::string& text)
{
    std::vector<index_t> out;
    for (auto v : parse_int_list(text)) out.push_back(static_cast<index_t>(v));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>) {
            out += io::format_double(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

index_t single(const std::vector<index_t>& values, const char* key)
{
    if (values.size() != 1) throw invalid_input(std::string("expected exactly one value for ") + key);
    return values.front();
}

std::uint64_t hash_bytes_of(const Eigen::VectorXd& v, std::uint64_t basis)
{
    return fnv1a64(std::as_bytes(std::span(v.data(), static_cast<std::size_t>(v.size()))), basis);
}

/// FNV over (design fingerprint, y, beta): identical for every method fed the same instance.
std::uint64_t instance_hash(std::uint64_t design_fp, const Response& y, const GroupedVector& beta)
{
    const auto fp = std::as_bytes(std::span(&design_fp, 1));
    return hash_bytes_of(beta.values(), hash_bytes_of(y, fnv1a64(fp)));
}

struct DesignInfo
{
    GroupedDesign x;
    double mu;
    double nu;
    std::uint64_t fingerprint;
};

DesignInfo make_design(index_t n, index_t m, index_t r, std::uint64_t seed, unsigned threads)
{
    SynthSpec spec;
    spec.n = n;
    spec.m = m;
    spec.r = r;
    spec.k = 1;
    spec.seed = seed;
    GroupedDesign x = gen_design(spec, threads).design;
    const double mu = worst_case_group_coherence(x, threads).value;
    const double nu = average_group_coherence(x, threads).value;
    const std::uint64_t fp = design_fingerprint(x);
    return DesignInfo{std::move(x), mu, nu, fp};
}

TrialRecord base_record(const ExperimentConfig& cfg, index_t grid, const GroupedDesign& x,
                        index_t k, std::uint64_t trial)
{
    TrialRecord rec;
    rec.experiment = to_string(cfg.experiment);
    rec.grid_index = grid;
    rec.n = x.n();
    rec.m = x.m();
    rec.r = x.r();
    rec.k = k;
    rec.trial_id = trial;
    rec.seed = cfg.seed;
    return rec;
}

/// Group thresholding with the true k, scored at group level.
TrialRecord groth_record(TrialRecord rec, const DesignInfo& d, const GroupedVector& beta,
                         const Response& y, const TheoremConstants& consts)
{
    const index_t k = static_cast<index_t>(beta.support().size());
    const ModelEstimate est = select_top_groups(marginal_correlations(d.x, y), k);
    const SelectionScore score = score_selection(est, beta, d.mu, consts.c3(), d.x.m());
    const auto guaranteed = guaranteed_set(beta, d.mu, consts.c3(), d.x.m());
    const std::set<index_t> chosen(est.indices.begin(), est.indices.end());
    const bool included = std::all_of(guaranteed.begin(), guaranteed.end(),
                                      [&](index_t g) { return chosen.count(g) > 0; });
    if (score.fdp != score.ndp) throw std::logic_error("fdp and ndp differ at |K^| = |K|");
    rec.method = "groth";
    rec.fdp = score.fdp;
    rec.ndp = score.ndp;
    rec.L = score.L;
    rec.inclusion = included ? 1.0 : 0.0;
    if (k < d.x.m()) {
        const auto norms = sorted_block_norms(beta);
        const double level = score.L >= 1 ? norms[static_cast<std::size_t>(score.L) - 1] : 0.0;
        rec.sufficient = score.L >= 1 && sufficient_condition_holds(d.x, beta, level).holds ? 1.0 : 0.0;
    }
    return rec;
}

/// Column thresholding with a budget of r * k columns, scored at column level.
TrialRecord individual_record(TrialRecord rec, const DesignInfo& d, const GroupedVector& beta,
                              const Response& y)
{
    const index_t budget = d.x.r() * static_cast<index_t>(beta.support().size());
    const ColumnModelEstimate est = individual_threshold_select(d.x, y, budget);
    std::vector<index_t> truth;
    for (index_t c = 0; c < beta.values().size(); ++c) {
        if (beta.values()[c] != 0.0) truth.push_back(c + 1);
    }
    rec.method = "individual";
    rec.fdp = fdp(est.columns, truth);
    rec.ndp = ndp(est.columns, truth);
    return rec;
}

double seconds_since(clock_type::time_point start)
{
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

/// One summary row per method over the trial rows of a grid point.
std::vector<TrialRecord> summarize(const std::vector<TrialRecord>& trials)
{
    std::vector<std::string> methods;
    for (const auto& t : trials) {
        if (std::find(methods.begin(), methods.end(), t.method) == methods.end()) {
            methods.push_back(t.method);
        }
    }
    std::sort(methods.begin(), methods.end());

    auto mean_of = [](const std::vector<const TrialRecord*>& rows, auto field) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto* row : rows) {
            if (const auto& v = row->*field) {
                sum += static_cast<double>(*v);
                ++count;
            }
        }
        return count ? std::optional<double>(sum / static_cast<double>(count)) : std::nullopt;
    };

    std::vector<TrialRecord> out;
    for (const auto& method : methods) {
        std::vector<const TrialRecord*> rows;
        for (const auto& t : trials) {
            if (t.method == method) rows.push_back(&t);
        }
        TrialRecord s = *rows.front();
        s.kind = "summary";
        s.trial_id = rows.size();
        s.mu = mean_of(rows, &TrialRecord::mu);
        s.nu = mean_of(rows, &TrialRecord::nu);
        s.fdp = mean_of(rows, &TrialRecord::fdp);
        s.ndp = mean_of(rows, &TrialRecord::ndp);
        s.inclusion = mean_of(rows, &TrialRecord::inclusion);
        s.sufficient = mean_of(rows, &TrialRecord::sufficient);
        s.L.reset();
        std::uint64_t h = fnv1a64(std::string_view("summary"));
        s.wall_time = 0.0;
        for (const auto* row : rows) {
            h = fnv1a64(std::as_bytes(std::span(&row->input_hash, 1)), h);
            s.wall_time += row->wall_time;
        }
        s.input_hash = h;
        out.push_back(std::move(s));
    }
    return out;
}

/// Flattens per-task rows (tasks in grid-major order) and appends a summary
/// block after the last task of every grid point.
std::vector<TrialRecord> assemble(std::vector<std::vector<TrialRecord>> per_task)
{
    std::vector<TrialRecord> out;
    std::vector<TrialRecord> current;
    auto flush = [&] {
        if (current.empty()) return;
        auto summary = summarize(current);
        for (auto& row : current) out.push_back(std::move(row));
        for (auto& row : summary) out.push_back(std::move(row));
        current.clear();
    };
    for (auto& rows : per_task) {
        for (auto& row : rows) {
            if (!current.empty() && current.front().grid_index != row.grid_index) flush();
            current.push_back(std::move(row));
        }
    }
    flush();
    return out;
}

std::vector<TrialRecord> run_coherence_grid(const ExperimentConfig& cfg, const RunOptions& options,
                                            bool n_outer)
{
    cfg.validate();
    struct Task
    {
        index_t grid, n, m;
        std::uint64_t replicate;
    };
    std::vector<Task> tasks;
    index_t grid = 0;
    const auto& outer = n_outer ? cfg.n_values : cfg.m_values;
    const auto& inner = n_outer ? cfg.m_values : cfg.n_values;
    for (index_t a : outer) {
        for (index_t b : inner) {
            const index_t n = n_outer ? a : b;
            const index_t m = n_outer ? b : a;
            for (index_t t = 0; t < cfg.trials; ++t) {
                tasks.push_back({grid, n, m, static_cast<std::uint64_t>(t)});
            }
            ++grid;
        }
    }

    std::vector<std::vector<TrialRecord>> rows(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t ti) {
        const auto start = clock_type::now();
        const Task& task = tasks[ti];
        const index_t r = cfg.p / task.m;
        const auto seed = stream_key(cfg.seed, "coherence-design",
                                     {static_cast<std::uint64_t>(task.n),
                                      static_cast<std::uint64_t>(task.m), task.replicate});
        const DesignInfo d = make_design(task.n, task.m, r, seed, 1);
        if (d.nu > d.mu * (1.0 + 1e-12)) {
            throw std::runtime_error("average coherence exceeds worst-case coherence at n = " +
                                     std::to_string(task.n) + ", m = " + std::to_string(task.m));
        }
        TrialRecord rec = base_record(cfg, task.grid, d.x, 0, task.replicate);
        rec.mu = d.mu;
        rec.nu = d.nu;
        rec.input_hash = d.fingerprint;
        if (options.timing) rec.wall_time = seconds_since(start);
        rows[ti].push_back(std::move(rec));
    });
    return assemble(std::move(rows));
}

} // namespace

ExperimentId parse_experiment_id(const std::string& s)
{
    if (s == "fig1a") return ExperimentId::fig1a;
    if (s == "fig1b") return ExperimentId::fig1b;
    if (s == "fig1c") return ExperimentId::fig1c;
    if (s == "fig2") return ExperimentId::fig2;
    if (s == "theorem") return ExperimentId::theorem;
    throw invalid_input("unknown experiment '" + s + "'");
}

std::string to_string(ExperimentId id)
{
    switch (id) {
    case ExperimentId::fig1a: return "fig1a";
    case ExperimentId::fig1b: return "fig1b";
    case ExperimentId::fig1c: return "fig1c";
    case ExperimentId::fig2: return "fig2";
    case ExperimentId::theorem: return "theorem";
    }
    return "?";
}

Preset parse_preset(const std::string& s)
{
    if (s == "desk") return Preset::desk;
    if (s == "paper") return Preset::paper;
    throw invalid_input("unknown preset '" + s + "'");
}

std::string to_string(Preset preset)
{
    return preset == Preset::desk ? "desk" : "paper";
}

void ExperimentConfig::validate() const
{
    if (trials < 1) throw invalid_input("trials must be >= 1");
    constants.validate();
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw invalid_input(what);
    };
    switch (experiment) {
    case ExperimentId::fig1a:
    case ExperimentId::fig1b:
        need(p > 0, "p must be positive");
        need(!n_values.empty() && !m_values.empty(), "n and m grids must be nonempty");
        for (index_t m : m_values) {
            need(m >= 2 && p % m == 0, "every m must be >= 2 and divide p (m = " + std::to_string(m) + ")");
            for (index_t n : n_values) {
                need(n >= p / m, "r = p / m must not exceed n (n = " + std::to_string(n) + ", m = " + std::to_string(m) + ")");
            }
        }
        break;
    case ExperimentId::fig1c:
    case ExperimentId::fig2: {
        const index_t n = single(n_values, "n");
        need(p > 0 && n > 0, "n and p must be positive");
        need(!r_values.empty() && !rk_values.empty(), "r and rk grids must be nonempty");
        if (experiment == ExperimentId::fig1c) {
            single(r_values, "r");
            need(!dynamic_ranges.empty(), "dynamic_range grid must be nonempty");
            for (double dr : dynamic_ranges) need(dr >= 1.0, "dynamic ranges must be >= 1");
        }
        for (index_t r : r_values) {
            need(r >= 1 && r <= n && p % r == 0, "every r must lie in 1..n and divide p (r = " + std::to_string(r) + ")");
            need(p / r >= 2, "need at least two groups");
            for (index_t rk : rk_values) {
                need(rk % r == 0, "rk = " + std::to_string(rk) + " is not a multiple of r = " + std::to_string(r));
                const index_t k = rk / r;
                const index_t kmin = experiment == ExperimentId::fig1c ? 2 : 1;
                need(k >= kmin && k <= p / r, "k = rk / r out of range (rk = " + std::to_string(rk) + ")");
            }
        }
        break;
    }
    case ExperimentId::theorem: {
        const index_t n = single(n_values, "n");
        const index_t m = single(m_values, "m");
        const index_t r = single(r_values, "r");
        need(m >= 2 && r >= 1 && r <= n, "theorem needs m >= 2 and 1 <= r <= n");
        need(k >= 1 && k <= m, "k must lie in 1..m");
        break;
    }
    }
}

ExperimentConfig preset_config(ExperimentId id, Preset preset)
{
    ExperimentConfig c;
    c.experiment = id;
    c.preset = preset;
    const bool desk = preset == Preset::desk;
    switch (id) {
    case ExperimentId::fig1a:
        c.p = desk ? 2000 : 20000;
        c.n_values = desk ? std::vector<index_t>{256, 512, 1024} : std::vector<index_t>{1000, 2000, 3000, 4000};
        c.m_values = desk ? std::vector<index_t>{125, 250, 500, 1000, 2000}
                          : std::vector<index_t>{500, 1000, 2000, 4000, 5000, 10000, 20000};
        c.trials = desk ? 3 : 1;
        break;
    case ExperimentId::fig1b:
        c.p = desk ? 2000 : 20000;
        c.n_values = desk ? std::vector<index_t>{128, 256, 512, 1024, 2048}
                          : std::vector<index_t>{1000, 2000, 3000, 4000, 5000};
        c.m_values = desk ? std::vector<index_t>{125, 250, 500, 1000} : std::vector<index_t>{500, 1000, 2000, 4000};
        c.trials = desk ? 3 : 1;
        break;
    case ExperimentId::fig1c:
        c.n_values = {desk ? 300 : 3000};
        c.p = desk ? 1500 : 15000;
        c.r_values = {desk ? 6 : 12};
        c.rk_values = desk ? std::vector<index_t>{90, 120, 150, 180, 240, 300}
                           : std::vector<index_t>{300, 600, 900, 1200, 1500, 1800, 2400, 3000};
        c.dynamic_ranges = {1.0, 10.0, 100.0, 1000.0};
        c.coeff_mode = CoeffMode::dynamic_range;
        c.trials = desk ? 200 : 500;
        break;
    case ExperimentId::fig2:
        c.n_values = {desk ? 300 : 3000};
        c.p = desk ? 1500 : 15000;
        c.r_values = {3, 6, 12};
        c.rk_values = desk ? std::vector<index_t>{24, 48, 72, 96, 120, 144, 180, 240}
                           : std::vector<index_t>{240, 480, 720, 960, 1200, 1440, 1800, 2400};
        c.coeff_mode = CoeffMode::heterogeneous;
        c.trials = desk ? 200 : 500;
        break;
    case ExperimentId::theorem:
        c.n_values = {512};
        c.m_values = {128};
        c.r_values = {4};
        c.k = 8;
        c.trials = desk ? 2000 : 10000;
        c.coeff_mode = CoeffMode::unit_norm;
        break;
    }
    return c;
}

ExperimentConfig make_config(ExperimentId id, const KeyValueConfig& file,
                             std::optional<Preset> preset_override)
{
    if (file.has("experiment") && parse_experiment_id(file.get("experiment")) != id) {
        throw invalid_input("config is for experiment '" + file.get("experiment") + "', not '" +
                            to_string(id) + "'");
    }
    Preset preset = Preset::desk;
    if (preset_override) {
        preset = *preset_override;
    } else if (file.has("preset")) {
        preset = parse_preset(file.get("preset"));
    }
    ExperimentConfig c = preset_config(id, preset);

    for (const auto& [key, value] : file.entries()) {
        if (key == "experiment" || key == "preset") continue;
        if (key == "seed") c.seed = parse_uint(value);
        else if (key == "trials") c.trials = static_cast<index_t>(parse_int(value));
        else if (key == "p") c.p = static_cast<index_t>(parse_int(value));
        else if (key == "n") c.n_values = to_index_list(value);
        else if (key == "m") c.m_values = to_index_list(value);
        else if (key == "r") c.r_values = to_index_list(value);
        else if (key == "rk") c.rk_values = to_index_list(value);
        else if (key == "k") c.k = static_cast<index_t>(parse_int(value));
        else if (key == "dynamic_range") c.dynamic_ranges = parse_real_list(value);
        else if (key == "dr_direction") c.dr_direction = parse_range_direction(value);
        else if (key == "coeff_mode") c.coeff_mode = parse_coeff_mode(value);
        else if (key == "c1") c.constants.c1 = parse_real(value);
        else if (key == "c2") c.constants.c2 = parse_real(value);
        else if (key == "beta_mode") c.beta_mode = parse_beta_mode(value);
        else throw invalid_input("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

std::string format_config(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    os << "experiment = " << to_string(cfg.experiment) << '\n'
       << "preset = " << to_string(cfg.preset) << '\n'
       << "seed = " << cfg.seed << '\n'
       << "trials = " << cfg.trials << '\n';
    if (!cfg.n_values.empty()) os << "n = " << join(cfg.n_values) << '\n';
    switch (cfg.experiment) {
    case ExperimentId::fig1a:
    case ExperimentId::fig1b:
        os << "p = " << cfg.p << '\n' << "m = " << join(cfg.m_values) << '\n';
        break;
    case ExperimentId::fig1c:
    case ExperimentId::fig2:
        os << "p = " << cfg.p << '\n'
           << "r = " << join(cfg.r_values) << '\n'
           << "rk = " << join(cfg.rk_values) << '\n'
           << "coeff_mode = " << to_string(cfg.coeff_mode) << '\n';
        if (cfg.experiment == ExperimentId::fig1c) {
            os << "dynamic_range = " << join(cfg.dynamic_ranges) << '\n'
               << "dr_direction = " << to_string(cfg.dr_direction) << '\n';
        }
        break;
    case ExperimentId::theorem:
        os << "m = " << join(cfg.m_values) << '\n'
           << "r = " << join(cfg.r_values) << '\n'
           << "k = " << cfg.k << '\n'
           << "coeff_mode = " << to_string(cfg.coeff_mode) << '\n'
           << "beta_mode = " << to_string(cfg.beta_mode) << '\n';
        break;
    }
    os << "c1 = " << io::format_double(cfg.constants.c1) << '\n'
       << "c2 = " << io::format_double(cfg.constants.c2) << '\n';
    return os.str();
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
    switch (cfg.experiment) {
    case ExperimentId::fig1a: return run_fig1a(cfg, options);
    case ExperimentId::fig1b: return run_fig1b(cfg, options);
    case ExperimentId::fig1c: return run_fig1c(cfg, options);
    case ExperimentId::fig2: return run_fig2(cfg, options);
    case ExperimentId::theorem: return run_theorem(cfg, options);
    }
    throw invalid_input("unknown experiment");
}

std::vector<TrialRecord> run_fig1a(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.experiment != ExperimentId::fig1a) throw invalid_input("config is not for fig1a");
    return run_coherence_grid(cfg, options, true);
}

std::vector<TrialRecord> run_fig1b(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.experiment != ExperimentId::fig1b) throw invalid_input("config is not for fig1b");
    return run_coherence_grid(cfg, options, false);
}

std::vector<TrialRecord> run_fig1c(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.experiment != ExperimentId::fig1c) throw invalid_input("config is not for fig1c");
    cfg.validate();
    const index_t n = cfg.n_values.front();
    const index_t r = cfg.r_values.front();
    const index_t m = cfg.p / r;
    const DesignInfo d = make_design(n, m, r, stream_key(cfg.seed, "fig1c-design"), options.threads);

    struct Task
    {
        std::size_t rk_index, dr_index;
        std::uint64_t trial;
    };
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < cfg.rk_values.size(); ++g) {
        for (std::size_t di = 0; di < cfg.dynamic_ranges.size(); ++di) {
            for (index_t t = 0; t < cfg.trials; ++t) tasks.push_back({g, di, static_cast<std::uint64_t>(t)});
        }
    }

    std::vector<std::vector<TrialRecord>> rows(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t ti) {
        const auto start = clock_type::now();
        const Task& task = tasks[ti];
        const index_t k = cfg.rk_values[task.rk_index] / r;
        // Keyed on the rk point only: every dynamic range sees the same supports and directions.
        SynthSpec spec;
        spec.n = n;
        spec.m = m;
        spec.r = r;
        spec.k = k;
        spec.seed = stream_key(cfg.seed, "fig1c", {task.rk_index});
        spec.coeff_mode = CoeffMode::dynamic_range;
        spec.dynamic_range = cfg.dynamic_ranges[task.dr_index];
        spec.dr_direction = cfg.dr_direction;
        spec.trial_id = task.trial;

        const auto support = sample_support(m, k, spec.seed, task.trial);
        const GroupedVector beta = gen_coefficients(spec, support);
        const Response y = synthesize_response(d.x, beta);

        const index_t grid = static_cast<index_t>(task.rk_index * cfg.dynamic_ranges.size() + task.dr_index);
        TrialRecord rec = base_record(cfg, grid, d.x, k, task.trial);
        rec.dynamic_range = spec.dynamic_range;
        rec.mu = d.mu;
        rec.nu = d.nu;
        rec.input_hash = instance_hash(d.fingerprint, y, beta);
        rec = groth_record(std::move(rec), d, beta, y, cfg.constants);
        if (options.timing) rec.wall_time = seconds_since(start);
        rows[ti].push_back(std::move(rec));
    });
    return assemble(std::move(rows));
}

std::vector<TrialRecord> run_fig2(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.experiment != ExperimentId::fig2) throw invalid_input("config is not for fig2");
    cfg.validate();
    const index_t n = cfg.n_values.front();

    std::vector<DesignInfo> designs;
    for (index_t r : cfg.r_values) {
        designs.push_back(make_design(n, cfg.p / r, r,
                                      stream_key(cfg.seed, "fig2-design", {static_cast<std::uint64_t>(r)}),
                                      options.threads));
    }

    struct Task
    {
        std::size_t r_index, rk_index;
        std::uint64_t trial;
    };
    std::vector<Task> tasks;
    for (std::size_t ri = 0; ri < cfg.r_values.size(); ++ri) {
        for (std::size_t g = 0; g < cfg.rk_values.size(); ++g) {
            for (index_t t = 0; t < cfg.trials; ++t) tasks.push_back({ri, g, static_cast<std::uint64_t>(t)});
        }
    }

    std::vector<std::vector<TrialRecord>> rows(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const DesignInfo& d = designs[task.r_index];
        const index_t r = d.x.r();
        const index_t k = cfg.rk_values[task.rk_index] / r;
        SynthSpec spec;
        spec.n = n;
        spec.m = d.x.m();
        spec.r = r;
        spec.k = k;
        spec.seed = stream_key(cfg.seed, "fig2", {task.r_index, task.rk_index});
        spec.coeff_mode = cfg.coeff_mode;
        spec.trial_id = task.trial;

        auto start = clock_type::now();
        const auto support = sample_support(spec.m, k, spec.seed, task.trial);
        const GroupedVector beta = gen_coefficients(spec, support);
        const Response y = synthesize_response(d.x, beta);
        const double setup = seconds_since(start);

        const index_t grid = static_cast<index_t>(task.r_index * cfg.rk_values.size() + task.rk_index);
        TrialRecord rec = base_record(cfg, grid, d.x, k, task.trial);
        rec.mu = d.mu;
        rec.nu = d.nu;
        rec.input_hash = instance_hash(d.fingerprint, y, beta);

        start = clock_type::now();
        TrialRecord g = groth_record(rec, d, beta, y, cfg.constants);
        if (options.timing) g.wall_time = setup + seconds_since(start);
        start = clock_type::now();
        TrialRecord ind = individual_record(rec, d, beta, y);
        if (options.timing) ind.wall_time = setup + seconds_since(start);
        rows[ti].push_back(std::move(g));
        rows[ti].push_back(std::move(ind));
    });
    return assemble(std::move(rows));
}

std::vector<TrialRecord> run_theorem(const ExperimentConfig& cfg, const RunOptions& options)
{
    if (cfg.experiment != ExperimentId::theorem) throw invalid_input("config is not for theorem");
    cfg.validate();
    const index_t n = cfg.n_values.front();
    const index_t m = cfg.m_values.front();
    const index_t r = cfg.r_values.front();
    const DesignInfo d = make_design(n, m, r, stream_key(cfg.seed, "theorem-design"), options.threads);

    std::vector<std::vector<TrialRecord>> rows(static_cast<std::size_t>(cfg.trials));
    parallel_for(rows.size(), options.threads, [&](std::size_t t) {
        const auto start = clock_type::now();
        SynthSpec spec;
        spec.n = n;
        spec.m = m;
        spec.r = r;
        spec.k = cfg.k;
        spec.seed = stream_key(cfg.seed, "theorem");
        spec.coeff_mode = cfg.coeff_mode;
        spec.trial_id = t;
        TheoremTrial trial = theorem_trial(d.x, d.mu, d.nu, spec, cfg.constants, cfg.beta_mode);
        TrialRecord rec = std::move(trial.record);
        rec.seed = cfg.seed;
        rec.input_hash = fnv1a64(std::as_bytes(std::span(&d.fingerprint, 1)), rec.input_hash);
        if (options.timing) rec.wall_time = seconds_since(start);
        rows[t].push_back(std::move(rec));
    });
    return assemble(std::move(rows));
}

std::uint64_t design_fingerprint(const GroupedDesign& x)
{
    const auto& a = x.matrix();
    return fnv1a64(std::as_bytes(std::span(a.data(), static_cast<std::size_t>(a.size()))));
}

} // namespace groth
