#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <vector>
#include <groth/grouped_linalg.hpp>
#include <groth/synth.hpp>
#include <groth/trial_record.hpp>

namespace groth {

/// Upper end of the 95% Wilson score interval for events/trials.
double wilson_upper95(std::uint64_t events, std::uint64_t trials);

/// The constants of the main recovery guarantee, derived from c1 >= 2 and c2 in (0, 1).
struct TheoremConstants
{
    double c1 = 2.0;
    double c2 = 0.5;

    void validate() const;
    /// 32 sqrt(2e) (2 c1 - 1) / ((1 - c2)(c1 - 1))
    double c3() const;
    /// (c1 - 1)^2 / (1024 e (2 c1 - 1)^2), exponent constant of the in-model tail bound.
    double c4() const;
    /// (c1 - 1)^2 / (1024 e c1^2), exponent constant of the off-model tail bound.
    double c5() const;
};

/// Whether a design/model size satisfies the guarantee's assumptions, using the
/// smallest admissible c_mu = mu sqrt(log m) and c_nu = nu / (mu sqrt(r log m / n)).
struct Admissibility
{
    bool sample_budget = false; ///< c1 r k <= n
    bool grocp1 = false;        ///< c_mu < 1 / c3
    bool grocp2 = false;        ///< c_nu <= sqrt(c1) c2 c3
    double c_mu = 0.0;
    double c_nu = 0.0;

    bool all() const { return sample_budget && grocp1 && grocp2; }
};

Admissibility check_admissibility(const TheoremConstants& consts, index_t n, index_t m,
                                  index_t r, index_t k, double mu, double nu);

struct TailOptions
{
    double c1 = 2.0;
    unsigned threads = 1;
    /// Precomputed coherences; computed from the design when empty.
    std::optional<double> mu;
    std::optional<double> nu;
};

struct TailEstimate
{
    std::uint64_t event_count = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double epsilon = 0.0;
    double wilson_upper95 = 0.0;

    double mu = 0.0;
    double nu = 0.0;
    /// Largest observed ||.||_{2,inf} / ||z||_2.
    double max_ratio = 0.0;
    /// Deterministic ceiling on that ratio: mu sqrt(k-1) (in-model) or mu sqrt(k) (off-model).
    double ceiling = 0.0;
    std::uint64_t ceiling_violations = 0;
    /// The concentration bound, when its exponent is defined (epsilon exceeds the mean term).
    std::optional<double> tail_bound;
    /// k <= min(eps^2/nu^2 (+1 for the in-model event), m / c1).
    bool assumptions_hold = false;
    /// wilson_upper95 <= tail_bound, reported only when the bound is below 1.
    std::optional<bool> bound_respected;
};

/// Relative slack allowed when checking the deterministic ceilings; covers the
/// spectral norm iteration tolerance in mu.
inline constexpr double ceiling_rel_tol = 1e-9;

/// ||(X_P^T X_P - I) z||_{2,inf} for the ordered groups P (z has |P| blocks).
double in_model_deviation(const GroupedDesign& x, std::span<const index_t> groups,
                          const GroupedVector& z);

/// ||X_{P^c}^T X_P z||_{2,inf}, maximum over groups not in P.
double off_model_correlation(const GroupedDesign& x, std::span<const index_t> groups,
                             const GroupedVector& z);

/// Empirical Pr(||(X_P^T X_P - I) z||_{2,inf} >= eps ||z||) over uniform random
/// ordered k-prefixes P of a permutation of 1..m (k = z.m()).
TailEstimate lemma1_tail(const GroupedDesign& x, const GroupedVector& z, double epsilon,
                         std::uint64_t trials, std::uint64_t seed, const TailOptions& opts = {});

/// Empirical Pr(||X_{P^c}^T X_P z||_{2,inf} >= eps ||z||).
TailEstimate lemma2_tail(const GroupedDesign& x, const GroupedVector& z, double epsilon,
                         std::uint64_t trials, std::uint64_t seed, const TailOptions& opts = {});

/// Whether the block values stay fixed across trials (only the support moves)
/// or are redrawn every trial.
enum class BetaMode
{
    fixed,
    resampled,
};

BetaMode parse_beta_mode(const std::string& s);
std::string to_string(BetaMode mode);

struct TheoremTrial
{
    TrialRecord record;
    /// Coefficient blocks (r x k) in the order they were assigned to the drawn groups.
    Eigen::MatrixXd blocks;
    std::vector<index_t> guaranteed;
    double gram_deviation = 0.0;
    double cross_correlation = 0.0;
    /// Levels l = 1..k at which "||beta_(l)|| > both terms" held.
    std::size_t implication_checks = 0;
    /// Of those, levels where some group with norm >= ||beta_(l)|| was missed.
    std::size_t implication_violations = 0;
    /// sufficient held but observed fdp/ndp exceeded 1 - L/k.
    bool bound_violated = false;
};

/**
 * One run of the full pipeline: random support (spec.seed, spec.trial_id),
 * coefficients, noiseless response, group thresholding with the true k, scoring
 * against the noise floor c3 mu ||beta|| sqrt(log m), and the deterministic
 * sufficient condition. The implication "condition => every group at or above
 * ||beta_(l)|| is selected" is evaluated at every level l, not just at L.
 */
TheoremTrial theorem_trial(const GroupedDesign& x, double mu, double nu, const SynthSpec& spec,
                           const TheoremConstants& consts, BetaMode beta_mode);

struct SmoothnessResult
{
    double tau = 0.0;
    double max_slack = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
};

/// Violations are samples with slack above this.
inline constexpr double smoothness_tol = 1e-12;

/// (||u + tau v|| + ||u - tau v||) / 2 - 1 - tau^2 / 2.
double smoothness_slack(const Eigen::Ref<const Eigen::VectorXd>& u,
                        const Eigen::Ref<const Eigen::VectorXd>& v, double tau);

/// Samples unit pairs (u, v) uniformly on the sphere in R^r and reports the
/// largest slack per tau; each sample is shared by every tau.
std::vector<SmoothnessResult> modulus_smoothness_check(index_t r, std::span<const double> taus,
                                                       std::uint64_t samples, std::uint64_t seed,
                                                       unsigned threads = 1);

} // namespace groth
