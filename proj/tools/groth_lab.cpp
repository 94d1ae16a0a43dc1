#include <groth/coherence.hpp>
#include <groth/config.hpp>
#include <groth/error.hpp>
#include <groth/experiments.hpp>
#include <groth/io.hpp>
#include <groth/selection.hpp>
#include <groth/synth.hpp>
#include <groth/trial_record.hpp>
#include <groth/validate.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>

using namespace groth;

namespace {

constexpr int exit_violation = 1;
constexpr int exit_input = 2;

std::string timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Opens `path` for writing, or returns stdout for "-" / empty.
class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw invalid_input("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct DesignArgs
{
    std::string path;
    std::string dims;
    bool orthonormalize = false;

    void add_to(CLI::App* app)
    {
        app->add_option("--design", path, "Design file (GDM1 binary or CSV)")->required();
        app->add_option("--dims", dims, "n,m,r; required for CSV designs");
        app->add_flag("--orthonormalize", orthonormalize,
                      "Orthonormalize each group before use instead of rejecting it");
    }

    GroupedDesign load() const
    {
        std::optional<io::Dims> d;
        if (!dims.empty()) {
            const auto v = parse_int_list(dims);
            if (v.size() != 3) throw invalid_input("--dims expects n,m,r");
            d = io::Dims{static_cast<index_t>(v[0]), static_cast<index_t>(v[1]), static_cast<index_t>(v[2])};
        }
        io::RawDesign raw = io::read_design(path, d);
        if (orthonormalize) return orthonormalize_groups(std::move(raw.data), raw.r);
        return GroupedDesign(std::move(raw.data), raw.r);
    }
};

void write_tail_csv(std::ostream& os, const std::string& event, const TailEstimate& e, index_t k)
{
    auto opt = [](const auto& v) { return v ? io::format_double(static_cast<double>(*v)) : std::string(); };
    os << "event,k,epsilon,trials,event_count,p_hat,wilson_upper95,mu,nu,max_ratio,ceiling,"
          "ceiling_violations,tail_bound,assumptions_hold,bound_respected\n";
    os << event << ',' << k << ',' << io::format_double(e.epsilon) << ',' << e.trials << ','
       << e.event_count << ',' << io::format_double(e.p_hat) << ','
       << io::format_double(e.wilson_upper95) << ',' << io::format_double(e.mu) << ','
       << io::format_double(e.nu) << ',' << io::format_double(e.max_ratio) << ','
       << io::format_double(e.ceiling) << ',' << e.ceiling_violations << ','
       << opt(e.tail_bound) << ',' << (e.assumptions_hold ? 1 : 0) << ','
       << (e.bound_respected ? std::to_string(*e.bound_respected ? 1 : 0) : std::string()) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"groth-lab: group thresholding, group coherence and Monte-Carlo experiments"};
    app.require_subcommand(1);
    int status = 0;

    // experiment ------------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "Run a figure experiment and write its CSV");
    std::string exp_id, exp_config, exp_out, exp_preset;
    std::optional<std::uint64_t> exp_seed;
    unsigned exp_threads = 1;
    bool exp_timing = false, exp_print = false;
    exp->add_option("id", exp_id, "fig1a | fig1b | fig1c | fig2 | theorem")->required();
    exp->add_option("--config", exp_config, "key = value config file");
    exp->add_option("--out", exp_out, "Output CSV ('-' for stdout)");
    exp->add_option("--preset", exp_preset, "desk | paper (overrides the config's preset key)");
    exp->add_option("--seed", exp_seed, "Master seed (overrides the config)");
    exp->add_option("--threads", exp_threads, "Worker threads, 0 = all cores");
    exp->add_flag("--timing", exp_timing, "Record per-row wall time (output no longer reproducible)");
    exp->add_flag("--print-config", exp_print,
                  "Print the effective config (to stdout and stop when --out is absent, else to stderr)");
    exp->callback([&] {
        const ExperimentId id = parse_experiment_id(exp_id);
        const KeyValueConfig file = exp_config.empty() ? KeyValueConfig{} : KeyValueConfig::load(exp_config);
        std::optional<Preset> preset;
        if (!exp_preset.empty()) preset = parse_preset(exp_preset);
        ExperimentConfig cfg = make_config(id, file, preset);
        if (exp_seed) cfg.seed = *exp_seed;
        if (exp_print && exp_out.empty()) {
            std::cout << format_config(cfg);
            return;
        }
        if (exp_out.empty()) throw invalid_input("--out is required");
        if (exp_print) std::cerr << format_config(cfg);

        const auto start = std::chrono::steady_clock::now();
        const auto rows = run_experiment(cfg, RunOptions{exp_threads, exp_timing});
        const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        Output out(exp_out);
        write_trial_csv(out.stream(), rows, timestamp() + " wall_time=" + io::format_double(total));
    });

    // select ----------------------------------------------------------------
    auto* sel = app.add_subcommand("select", "Rank groups by marginal correlation and keep k");
    DesignArgs sel_design;
    std::string sel_response, sel_out, sel_method = "groth";
    index_t sel_k = 0;
    sel_design.add_to(sel);
    sel->add_option("--response", sel_response, "Response vector file, one value per line")->required();
    sel->add_option("--k", sel_k, "Number of groups (or columns for --method individual)")->required();
    sel->add_option("--method", sel_method, "groth | individual")->check(CLI::IsMember({"groth", "individual"}));
    sel->add_option("--out", sel_out, "Output CSV (default stdout)");
    sel->callback([&] {
        const GroupedDesign x = sel_design.load();
        const Response y = io::read_vector(sel_response);
        Output out(sel_out);
        auto& os = out.stream();
        if (sel_method == "groth") {
            const ModelEstimate est = groth_select(x, y, sel_k);
            os << "rank,group,score\n";
            for (std::size_t i = 0; i < est.indices.size(); ++i) {
                os << i + 1 << ',' << est.indices[i] << ',' << io::format_double(est.scores[i]) << '\n';
            }
        } else {
            const ColumnModelEstimate est = individual_threshold_select(x, y, sel_k);
            os << "rank,column,score\n";
            for (std::size_t i = 0; i < est.columns.size(); ++i) {
                os << i + 1 << ',' << est.columns[i] << ',' << io::format_double(est.scores[i]) << '\n';
            }
        }
    });

    // coherence -------------------------------------------------------------
    auto* coh = app.add_subcommand("coherence", "Group coherences and the coherence-property verdict");
    DesignArgs coh_design;
    double c_mu = 1.0, c_nu = 1.0;
    std::string coh_format = "text";
    unsigned coh_threads = 1;
    coh_design.add_to(coh);
    coh->add_option("--c-mu", c_mu, "GroCP-1 constant");
    coh->add_option("--c-nu", c_nu, "GroCP-2 constant");
    coh->add_option("--format", coh_format, "csv | text")->check(CLI::IsMember({"csv", "text"}));
    coh->add_option("--threads", coh_threads, "Worker threads, 0 = all cores");
    coh->callback([&] {
        const CoherenceReport rep = check_grocp(coh_design.load(), c_mu, c_nu, coh_threads);
        for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
        if (coh_format == "csv") {
            std::cout << coherence_csv_header() << '\n' << coherence_csv_row(rep) << '\n';
        } else {
            std::cout << coherence_text(rep);
        }
    });

    // synth -----------------------------------------------------------------
    auto* syn = app.add_subcommand("synth", "Generate a design, coefficients and response");
    SynthSpec spec;
    std::string syn_mode = "unit-norm", syn_dir = "down";
    std::string syn_design, syn_beta, syn_response, syn_support;
    unsigned syn_threads = 1;
    syn->add_option("--n", spec.n)->required();
    syn->add_option("--m", spec.m)->required();
    syn->add_option("--r", spec.r)->required();
    syn->add_option("--k", spec.k)->required();
    syn->add_option("--seed", spec.seed);
    syn->add_option("--trial", spec.trial_id, "Trial id selecting the support/coefficient draw");
    syn->add_option("--coeff-mode", syn_mode, "unit-norm | dynamic-range | heterogeneous");
    syn->add_option("--dynamic-range", spec.dynamic_range);
    syn->add_option("--dr-direction", syn_dir, "down | up");
    syn->add_option("--design-out", syn_design, "GDM1 design file");
    syn->add_option("--beta-out", syn_beta, "Coefficient vector file");
    syn->add_option("--response-out", syn_response, "Response vector file");
    syn->add_option("--support-out", syn_support, "Support group list file");
    syn->add_option("--threads", syn_threads);
    syn->callback([&] {
        spec.coeff_mode = parse_coeff_mode(syn_mode);
        spec.dr_direction = parse_range_direction(syn_dir);
        spec.validate();
        const DesignSample sample = gen_design(spec, syn_threads);
        for (index_t g : sample.resampled_groups) {
            std::cerr << "note: group " << g << " was redrawn (rank-deficient draw)\n";
        }
        const auto support = sample_support(spec.m, spec.k, spec.seed, spec.trial_id);
        const GroupedVector beta = gen_coefficients(spec, support);
        const Response y = synthesize_response(sample.design, beta);
        if (!syn_design.empty()) io::write_gdm1(syn_design, sample.design.matrix(), spec.r);
        if (!syn_beta.empty()) io::write_vector(syn_beta, beta.values());
        if (!syn_response.empty()) io::write_vector(syn_response, y);
        if (!syn_support.empty()) {
            Output out(syn_support);
            for (index_t g : support) out.stream() << g << '\n';
        }
    });

    // validate --------------------------------------------------------------
    auto* val = app.add_subcommand("validate", "Monte-Carlo checks of the tail and recovery guarantees");
    val->require_subcommand(1);

    struct LemmaArgs
    {
        index_t n = 256, m = 64, r = 4, k = 8;
        std::uint64_t design_seed = 1, seed = 1, trials = 10000;
        double epsilon = 0.5, c1 = 2.0;
        unsigned threads = 1;
        std::string out;
        DesignArgs design;
        bool from_file = false;
    };
    auto lemma_cmd = [&](const std::string& name, bool in_model) {
        auto args = std::make_shared<LemmaArgs>();
        auto* cmd = val->add_subcommand(name, in_model ? "In-model Gram deviation tail"
                                                       : "Off-model cross-correlation tail");
        cmd->add_option("--design", args->design.path, "Design file; a Gaussian design is drawn when absent");
        cmd->add_option("--dims", args->design.dims, "n,m,r for CSV designs");
        cmd->add_option("--n", args->n);
        cmd->add_option("--m", args->m);
        cmd->add_option("--r", args->r);
        cmd->add_option("--design-seed", args->design_seed);
        cmd->add_option("--k", args->k);
        cmd->add_option("--epsilon", args->epsilon);
        cmd->add_option("--trials", args->trials);
        cmd->add_option("--seed", args->seed);
        cmd->add_option("--c1", args->c1);
        cmd->add_option("--threads", args->threads);
        cmd->add_option("--out", args->out);
        cmd->callback([&, args, in_model, name] {
            GroupedDesign x = [&] {
                if (!args->design.path.empty()) return args->design.load();
                SynthSpec s;
                s.n = args->n;
                s.m = args->m;
                s.r = args->r;
                s.k = 1;
                s.seed = args->design_seed;
                return gen_design(s, args->threads).design;
            }();
            SynthSpec zs;
            zs.n = x.n();
            zs.m = args->k;
            zs.r = x.r();
            zs.k = args->k;
            zs.seed = args->seed;
            const GroupedVector z(Eigen::Map<const Eigen::VectorXd>(gen_coefficient_blocks(zs).data(), x.r() * args->k),
                                  x.r());
            TailOptions opts;
            opts.c1 = args->c1;
            opts.threads = args->threads;
            const TailEstimate est = in_model ? lemma1_tail(x, z, args->epsilon, args->trials, args->seed, opts)
                                              : lemma2_tail(x, z, args->epsilon, args->trials, args->seed, opts);
            Output out(args->out);
            write_tail_csv(out.stream(), name, est, args->k);
            if (est.ceiling_violations > 0) status = exit_violation;
        });
    };
    lemma_cmd("lemma1", true);
    lemma_cmd("lemma2", false);

    auto* thm = val->add_subcommand("theorem", "Recovery guarantee trials (rows as in 'experiment theorem')");
    std::string thm_config, thm_out, thm_preset;
    std::optional<std::uint64_t> thm_seed;
    unsigned thm_threads = 1;
    thm->add_option("--config", thm_config);
    thm->add_option("--preset", thm_preset);
    thm->add_option("--seed", thm_seed);
    thm->add_option("--threads", thm_threads);
    thm->add_option("--out", thm_out)->required();
    thm->callback([&] {
        const KeyValueConfig file = thm_config.empty() ? KeyValueConfig{} : KeyValueConfig::load(thm_config);
        std::optional<Preset> preset;
        if (!thm_preset.empty()) preset = parse_preset(thm_preset);
        ExperimentConfig cfg = make_config(ExperimentId::theorem, file, preset);
        if (thm_seed) cfg.seed = *thm_seed;
        const auto rows = run_theorem(cfg, RunOptions{thm_threads, false});
        Output out(thm_out);
        write_trial_csv(out.stream(), rows, timestamp());

        std::uint64_t violations = 0, failures = 0, trials = 0;
        for (const auto& row : rows) {
            if (row.kind != "trial") continue;
            ++trials;
            if (*row.inclusion == 0.0) {
                ++failures;
                if (row.sufficient && *row.sufficient == 1.0) ++violations;
            }
        }
        const double upper = wilson_upper95(failures, trials);
        const double ceiling = std::exp(2.0) / static_cast<double>(cfg.m_values.front());
        std::cerr << "inclusion failures " << failures << "/" << trials << ", Wilson 95% upper "
                  << upper << " (ceiling e^2/m = " << ceiling << "), implication violations "
                  << violations << '\n';
        if (violations > 0) status = exit_violation;
    });

    auto* smo = val->add_subcommand("smoothness", "Modulus of smoothness of the Euclidean norm");
    std::vector<index_t> smo_r{2, 3, 8};
    std::vector<double> smo_tau{0.1, 0.5, 1.0};
    std::uint64_t smo_samples = 100000, smo_seed = 1;
    unsigned smo_threads = 1;
    std::string smo_out;
    smo->add_option("--r", smo_r)->delimiter(',');
    smo->add_option("--tau", smo_tau)->delimiter(',');
    smo->add_option("--samples", smo_samples);
    smo->add_option("--seed", smo_seed);
    smo->add_option("--threads", smo_threads);
    smo->add_option("--out", smo_out);
    smo->callback([&] {
        Output out(smo_out);
        auto& os = out.stream();
        os << "r,tau,samples,max_slack,violations\n";
        for (index_t r : smo_r) {
            for (const auto& res : modulus_smoothness_check(r, smo_tau, smo_samples, smo_seed, smo_threads)) {
                os << r << ',' << io::format_double(res.tau) << ',' << res.samples << ','
                   << io::format_double(res.max_slack) << ',' << res.violations << '\n';
                if (res.violations > 0) status = exit_violation;
            }
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input + 1;
    }
    return status;
}
