#include <groth/validate.hpp>
#include <groth/coherence.hpp>
#include <groth/error.hpp>
#include <groth/metrics.hpp>
#include <groth/parallel.hpp>
#include <groth/selection.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace groth {
namespace {

constexpr double wilson_z95 = 1.959963984540054;
constexpr std::uint64_t smoothness_chunk = 4096;

std::pair<double, double> coherences(const GroupedDesign& x, const TailOptions& opts)
{
    const double mu = opts.mu ? *opts.mu : worst_case_group_coherence(x, opts.threads).value;
    const double nu = opts.nu ? *opts.nu : average_group_coherence(x, opts.threads).value;
    return {mu, nu};
}

// Stacks sum_j X_{groups[j]} z_j.
Response combine(const GroupedDesign& x, std::span<const index_t> groups, const GroupedVector& z)
{
    if (static_cast<index_t>(groups.size()) != z.m() || z.r() != x.r()) {
        throw dimension_mismatch("z must have one length-r block per selected group");
    }
    Response w = Response::Zero(x.n());
    for (std::size_t j = 0; j < groups.size(); ++j) {
        w.noalias() += x.group(groups[j]) * z.block(static_cast<index_t>(j) + 1);
    }
    return w;
}

enum class TailEvent
{
    in_model,
    off_model,
};

TailEstimate run_tail(TailEvent event, const GroupedDesign& x, const GroupedVector& z,
                      double epsilon, std::uint64_t trials, std::uint64_t seed,
                      const TailOptions& opts)
{
    const index_t k = z.m();
    if (k > x.m()) throw invalid_input("lemma tail: k exceeds m");
    if (z.r() != x.r()) throw dimension_mismatch("z blocks must have length r");
    if (!(epsilon > 0.0)) throw invalid_input("epsilon must be positive");
    if (trials == 0) throw invalid_input("need at least one trial");

    const auto [mu, nu] = coherences(x, opts);
    const double znorm = z.values().norm();
    const char* tag = event == TailEvent::in_model ? "lemma1" : "lemma2";

    std::vector<double> ratios(static_cast<std::size_t>(trials));
    parallel_for(ratios.size(), opts.threads, [&](std::size_t t) {
        Rng rng(stream_key(seed, tag, {t}));
        const auto prefix = sample_permutation_prefix(x.m(), k, rng);
        const double v = event == TailEvent::in_model ? in_model_deviation(x, prefix, z)
                                                      : off_model_correlation(x, prefix, z);
        ratios[t] = znorm > 0.0 ? v / znorm : 0.0;
    });

    TailEstimate est;
    est.trials = trials;
    est.epsilon = epsilon;
    est.mu = mu;
    est.nu = nu;
    const double kd = static_cast<double>(k);
    const double spread = event == TailEvent::in_model ? std::sqrt(std::max(kd - 1.0, 0.0))
                                                       : std::sqrt(kd);
    est.ceiling = mu * spread;
    for (double ratio : ratios) {
        // exceedance is ">=": ||.|| >= eps ||z||
        if (ratio >= epsilon) ++est.event_count;
        est.max_ratio = std::max(est.max_ratio, ratio);
        if (ratio > est.ceiling * (1.0 + ceiling_rel_tol) + 1e-14) ++est.ceiling_violations;
    }
    est.p_hat = static_cast<double>(est.event_count) / static_cast<double>(trials);
    est.wilson_upper95 = wilson_upper95(est.event_count, trials);

    const TheoremConstants consts{opts.c1, 0.5};
    const double mean_term = nu * spread;
    const double c = event == TailEvent::in_model ? consts.c4() : consts.c5();
    const double prefactor = event == TailEvent::in_model ? kd : static_cast<double>(x.m() - k);
    if (mu > 0.0 && epsilon > mean_term) {
        const double gap = epsilon - mean_term;
        est.tail_bound = std::exp(2.0) * prefactor * std::exp(-c * gap * gap / (mu * mu));
        if (*est.tail_bound < 1.0) est.bound_respected = est.wilson_upper95 <= *est.tail_bound;
    }
    const double eps_limit = nu > 0.0 ? epsilon * epsilon / (nu * nu) : HUGE_VAL;
    const double k_limit = event == TailEvent::in_model ? eps_limit + 1.0 : eps_limit;
    est.assumptions_hold = kd <= std::min(k_limit, static_cast<double>(x.m()) / opts.c1);
    return est;
}

bool is_subset(std::vector<index_t> small, std::vector<index_t> big)
{
    std::sort(small.begin(), small.end());
    std::sort(big.begin(), big.end());
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

double wilson_upper95(std::uint64_t events, std::uint64_t trials)
{
    if (trials == 0 || events > trials) throw invalid_input("wilson_upper95: bad counts");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(events) / n;
    const double z2 = wilson_z95 * wilson_z95;
    const double centre = p + z2 / (2.0 * n);
    const double half = wilson_z95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return std::min(1.0, (centre + half) / (1.0 + z2 / n));
}

void TheoremConstants::validate() const
{
    if (!(c1 >= 2.0)) throw invalid_input("c1 must be >= 2");
    if (!(c2 > 0.0 && c2 < 1.0)) throw invalid_input("c2 must lie in (0, 1)");
}

double TheoremConstants::c3() const
{
    return 32.0 * std::sqrt(2.0 * std::numbers::e) * (2.0 * c1 - 1.0) / ((1.0 - c2) * (c1 - 1.0));
}

double TheoremConstants::c4() const
{
    const double a = c1 - 1.0, b = 2.0 * c1 - 1.0;
    return a * a / (1024.0 * std::numbers::e * b * b);
}

double TheoremConstants::c5() const
{
    const double a = c1 - 1.0;
    return a * a / (1024.0 * std::numbers::e * c1 * c1);
}

Admissibility check_admissibility(const TheoremConstants& consts, index_t n, index_t m,
                                  index_t r, index_t k, double mu, double nu)
{
    consts.validate();
    if (m < 2) throw undefined_coherence("admissibility needs m >= 2");
    Admissibility a;
    const double log_m = std::log(static_cast<double>(m));
    a.sample_budget = consts.c1 * static_cast<double>(r * k) <= static_cast<double>(n);
    a.c_mu = mu * std::sqrt(log_m);
    a.grocp1 = a.c_mu < 1.0 / consts.c3();
    a.c_nu = mu > 0.0 ? nu / (mu * std::sqrt(static_cast<double>(r) * log_m / static_cast<double>(n)))
                      : 0.0;
    a.grocp2 = a.c_nu <= std::sqrt(consts.c1) * consts.c2 * consts.c3();
    return a;
}

double in_model_deviation(const GroupedDesign& x, std::span<const index_t> groups,
                          const GroupedVector& z)
{
    const Response w = combine(x, groups, z);
    double worst = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto xi = x.group(groups[i]);
        const Response others = w - xi * z.block(static_cast<index_t>(i) + 1);
        worst = std::max(worst, (xi.transpose() * others).norm());
    }
    return worst;
}

double off_model_correlation(const GroupedDesign& x, std::span<const index_t> groups,
                             const GroupedVector& z)
{
    const Response w = combine(x, groups, z);
    const GroupedVector f = marginal_correlations(x, w);
    std::vector<bool> inside(static_cast<std::size_t>(x.m()) + 1, false);
    for (index_t g : groups) inside[static_cast<std::size_t>(g)] = true;
    double worst = 0.0;
    for (index_t i = 1; i <= x.m(); ++i) {
        if (!inside[static_cast<std::size_t>(i)]) worst = std::max(worst, f.block_norm(i));
    }
    return worst;
}

TailEstimate lemma1_tail(const GroupedDesign& x, const GroupedVector& z, double epsilon,
                         std::uint64_t trials, std::uint64_t seed, const TailOptions& opts)
{
    return run_tail(TailEvent::in_model, x, z, epsilon, trials, seed, opts);
}

TailEstimate lemma2_tail(const GroupedDesign& x, const GroupedVector& z, double epsilon,
                         std::uint64_t trials, std::uint64_t seed, const TailOptions& opts)
{
    return run_tail(TailEvent::off_model, x, z, epsilon, trials, seed, opts);
}

BetaMode parse_beta_mode(const std::string& s)
{
    if (s == "fixed") return BetaMode::fixed;
    if (s == "resampled") return BetaMode::resampled;
    throw invalid_input("unknown beta mode '" + s + "'");
}

std::string to_string(BetaMode mode)
{
    return mode == BetaMode::fixed ? "fixed" : "resampled";
}

TheoremTrial theorem_trial(const GroupedDesign& x, double mu, double nu, const SynthSpec& spec,
                           const TheoremConstants& consts, BetaMode beta_mode)
{
    spec.validate();
    consts.validate();
    if (spec.n != x.n() || spec.m != x.m() || spec.r != x.r()) {
        throw dimension_mismatch("trial spec does not match the design");
    }
    if (x.m() < 2) throw undefined_coherence("theorem trial needs m >= 2");

    // Groups in draw order receive the coefficient blocks in order.
    Rng support_rng(stream_key(spec.seed, "support", {spec.trial_id}));
    const auto drawn = sample_permutation_prefix(x.m(), spec.k, support_rng);
    SynthSpec coeff_spec = spec;
    if (beta_mode == BetaMode::fixed) coeff_spec.trial_id = 0;
    Eigen::MatrixXd blocks = gen_coefficient_blocks(coeff_spec);
    const GroupedVector beta = assemble_coefficients(x.m(), blocks, drawn);

    const Response y = synthesize_response(x, beta);
    const ModelEstimate est = select_top_groups(marginal_correlations(x, y), spec.k);
    const SelectionScore score = score_selection(est, beta, mu, consts.c3(), x.m());

    TheoremTrial out;
    out.blocks = std::move(blocks);
    out.guaranteed = guaranteed_set(beta, mu, consts.c3(), x.m());
    const bool included = is_subset(out.guaranteed, est.indices);

    std::optional<double> sufficient;
    if (spec.k < x.m()) {
        const auto norms = sorted_block_norms(beta);
        const auto cond = sufficient_condition_holds(x, beta, 0.0);
        out.gram_deviation = cond.gram_deviation;
        out.cross_correlation = cond.cross_correlation;
        const double noise = cond.gram_deviation + cond.cross_correlation;

        for (std::size_t level = 0; level < norms.size(); ++level) {
            if (!(norms[level] > noise)) continue;
            ++out.implication_checks;
            if (!is_subset(groups_at_or_above(beta, norms[level]), est.indices)) {
                ++out.implication_violations;
            }
        }
        const bool holds = score.L >= 1 && norms[static_cast<std::size_t>(score.L) - 1] > noise;
        sufficient = holds ? 1.0 : 0.0;
        out.bound_violated = holds && (score.fdp > score.fdp_bound || score.ndp > score.ndp_bound);
    }

    TrialRecord& rec = out.record;
    rec.experiment = "theorem";
    rec.n = x.n();
    rec.m = x.m();
    rec.r = x.r();
    rec.k = spec.k;
    rec.dynamic_range = dynamic_range_of(beta);
    rec.trial_id = spec.trial_id;
    rec.seed = spec.seed;
    rec.mu = mu;
    rec.nu = nu;
    rec.fdp = score.fdp;
    rec.ndp = score.ndp;
    rec.L = score.L;
    rec.inclusion = included ? 1.0 : 0.0;
    rec.sufficient = sufficient;
    rec.method = "groth";
    const auto ybytes = std::as_bytes(std::span(y.data(), static_cast<std::size_t>(y.size())));
    const auto bbytes = std::as_bytes(
        std::span(beta.values().data(), static_cast<std::size_t>(beta.values().size())));
    rec.input_hash = fnv1a64(bbytes, fnv1a64(ybytes));
    return out;
}

double smoothness_slack(const Eigen::Ref<const Eigen::VectorXd>& u,
                        const Eigen::Ref<const Eigen::VectorXd>& v, double tau)
{
    return 0.5 * ((u + tau * v).norm() + (u - tau * v).norm()) - 1.0 - 0.5 * tau * tau;
}

std::vector<SmoothnessResult> modulus_smoothness_check(index_t r, std::span<const double> taus,
                                                       std::uint64_t samples, std::uint64_t seed,
                                                       unsigned threads)
{
    if (r < 1) throw invalid_input("dimension r must be positive");
    if (samples < 1) throw invalid_input("need at least one sample");
    for (double t : taus) {
        if (!(t > 0.0)) throw invalid_input("tau must be positive");
    }

    const std::size_t chunks = static_cast<std::size_t>((samples + smoothness_chunk - 1) / smoothness_chunk);
    const std::size_t nt = taus.size();
    std::vector<double> chunk_max(chunks * nt, -HUGE_VAL);
    std::vector<std::uint64_t> chunk_viol(chunks * nt, 0);

    parallel_for(chunks, threads, [&](std::size_t c) {
        Rng rng(stream_key(seed, "smoothness", {c}));
        const std::uint64_t begin = c * smoothness_chunk;
        const std::uint64_t end = std::min<std::uint64_t>(samples, begin + smoothness_chunk);
        Eigen::VectorXd u(r), v(r);
        auto draw_unit = [&](Eigen::VectorXd& w) {
            double nrm = 0.0;
            do {
                for (index_t e = 0; e < r; ++e) w[e] = rng.normal();
                nrm = w.norm();
            } while (nrm == 0.0);
            w /= nrm;
        };
        for (std::uint64_t s = begin; s < end; ++s) {
            draw_unit(u);
            draw_unit(v);
            for (std::size_t t = 0; t < nt; ++t) {
                const double slack = smoothness_slack(u, v, taus[t]);
                auto& mx = chunk_max[c * nt + t];
                mx = std::max(mx, slack);
                if (slack > smoothness_tol) ++chunk_viol[c * nt + t];
            }
        }
    });

    std::vector<SmoothnessResult> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        out[t].tau = taus[t];
        out[t].samples = samples;
        out[t].max_slack = -HUGE_VAL;
        for (std::size_t c = 0; c < chunks; ++c) {
            out[t].max_slack = std::max(out[t].max_slack, chunk_max[c * nt + t]);
            out[t].violations += chunk_viol[c * nt + t];
        }
    }
    return out;
}

} // namespace groth
