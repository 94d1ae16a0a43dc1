#include <groth/coherence.hpp>
#include <groth/error.hpp>
#include <groth/io.hpp>
#include <groth/parallel.hpp>

#include <cmath>
#include <sstream>

namespace groth {
namespace {

void require_two_groups(const GroupedDesign& x)
{
    if (x.m() < 2) {
        throw undefined_coherence("group coherence needs m >= 2, got m = " + std::to_string(x.m()));
    }
}

double block_norm(const Eigen::Ref<const Eigen::MatrixXd>& b)
{
    return b.size() == 1 ? std::abs(b(0, 0)) : spectral_norm(b);
}

} // namespace

WorstCaseCoherence worst_case_group_coherence(const GroupedDesign& x, unsigned threads)
{
    require_two_groups(x);
    const index_t m = x.m();
    const index_t r = x.r();
    const Eigen::MatrixXd& data = x.matrix();

    // Row i of the pair table: best j > i for group i.
    struct RowBest
    {
        double value = -1.0;
        index_t j = 0;
    };
    std::vector<RowBest> rows(static_cast<std::size_t>(m - 1));

    parallel_for(rows.size(), threads, [&](std::size_t row) {
        const index_t i = static_cast<index_t>(row);
        const index_t first = (i + 1) * r;
        const Eigen::MatrixXd panel =
            data.middleCols(i * r, r).transpose() * data.rightCols(data.cols() - first);
        RowBest best;
        for (index_t j = i + 1; j < m; ++j) {
            const double v = block_norm(panel.middleCols((j - i - 1) * r, r));
            if (v > best.value) best = {v, j};
        }
        rows[row] = best;
    });

    WorstCaseCoherence out;
    out.value = -1.0;
    for (std::size_t row = 0; row < rows.size(); ++row) {
        if (rows[row].value > out.value) {
            out.value = rows[row].value;
            out.argmax_pair = {static_cast<index_t>(row) + 1, rows[row].j + 1};
        }
    }
    return out;
}

AverageCoherence average_group_coherence(const GroupedDesign& x, unsigned threads)
{
    require_two_groups(x);
    const index_t m = x.m();
    const index_t r = x.r();
    const Eigen::MatrixXd& data = x.matrix();

    // sum_{j != i} X_i^T X_j = X_i^T (S - X_i) with S the sum of all groups.
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(x.n(), r);
    for (index_t j = 0; j < m; ++j) total += data.middleCols(j * r, r);

    std::vector<double> per_group(static_cast<std::size_t>(m));
    parallel_for(per_group.size(), threads, [&](std::size_t gi) {
        const auto xi = data.middleCols(static_cast<index_t>(gi) * r, r);
        const Eigen::MatrixXd others = total - xi;
        const Eigen::MatrixXd block = xi.transpose() * others;
        per_group[gi] = block_norm(block);
    });

    AverageCoherence out;
    out.value = -1.0;
    for (std::size_t gi = 0; gi < per_group.size(); ++gi) {
        if (per_group[gi] > out.value) {
            out.value = per_group[gi];
            out.argmax_group = static_cast<index_t>(gi) + 1;
        }
    }
    out.value /= static_cast<double>(m - 1);
    return out;
}

CoherenceReport grocp_verdict(double mu, double nu, index_t n, index_t m, index_t r,
                              double c_mu, double c_nu)
{
    if (m < 2) throw undefined_coherence("GroCP needs m >= 2");
    if (!(c_mu > 0.0) || !(c_nu > 0.0)) throw invalid_input("c_mu and c_nu must be positive");

    CoherenceReport rep;
    rep.mu = mu;
    rep.nu = nu;
    rep.c_mu = c_mu;
    rep.c_nu = c_nu;

    const double log_m = std::log(static_cast<double>(m));
    const double scale = std::sqrt(static_cast<double>(r) * log_m / static_cast<double>(n));
    rep.grocp1_stat = mu * std::sqrt(log_m);
    if (mu > 0.0) rep.grocp2_stat = nu / (mu * scale);

    // mu <= c_mu / sqrt(log m), compared as mu * sqrt(log m) <= c_mu so that the
    // boundary c_mu = grocp1_stat is reproduced exactly.
    rep.passes_grocp1 = rep.grocp1_stat <= c_mu;
    rep.passes_grocp2 = nu <= c_nu * mu * scale;

    if (m == 2) rep.warnings.emplace_back("m = 2: log m < 1, GroCP constants are not meaningful");
    return rep;
}

CoherenceReport check_grocp(const GroupedDesign& x, double c_mu, double c_nu, unsigned threads)
{
    const auto wc = worst_case_group_coherence(x, threads);
    const auto avg = average_group_coherence(x, threads);
    auto rep = grocp_verdict(wc.value, avg.value, x.n(), x.m(), x.r(), c_mu, c_nu);
    rep.argmax_pair = wc.argmax_pair;
    rep.argmax_group = avg.argmax_group;
    return rep;
}

std::string coherence_csv_header()
{
    return "mu,nu,grocp1_stat,grocp2_stat,c_mu,c_nu,passes_grocp1,passes_grocp2,"
           "argmax_pair_i,argmax_pair_j,argmax_group";
}

std::string coherence_csv_row(const CoherenceReport& rep)
{
    using io::format_double;
    std::ostringstream os;
    os << format_double(rep.mu) << ',' << format_double(rep.nu) << ','
       << format_double(rep.grocp1_stat) << ','
       << (rep.grocp2_stat ? format_double(*rep.grocp2_stat) : std::string("undefined")) << ','
       << format_double(rep.c_mu) << ',' << format_double(rep.c_nu) << ','
       << (rep.passes_grocp1 ? "true" : "false") << ','
       << (rep.passes_grocp2 ? "true" : "false") << ','
       << rep.argmax_pair.first << ',' << rep.argmax_pair.second << ','
       << rep.argmax_group;
    return os.str();
}

std::string coherence_text(const CoherenceReport& rep)
{
    using io::format_double;
    std::ostringstream os;
    os << "worst-case group coherence mu : " << format_double(rep.mu) << "  (groups "
       << rep.argmax_pair.first << ", " << rep.argmax_pair.second << ")\n"
       << "average group coherence nu    : " << format_double(rep.nu) << "  (group "
       << rep.argmax_group << ")\n"
       << "mu * sqrt(log m)              : " << format_double(rep.grocp1_stat) << '\n'
       << "nu / (mu sqrt(r log m / n))   : "
       << (rep.grocp2_stat ? format_double(*rep.grocp2_stat) : std::string("undefined (mu = 0)"))
       << '\n'
       << "GroCP-1 (c_mu = " << format_double(rep.c_mu) << ")  : "
       << (rep.passes_grocp1 ? "pass" : "fail") << '\n'
       << "GroCP-2 (c_nu = " << format_double(rep.c_nu) << ")  : "
       << (rep.passes_grocp2 ? "pass" : "fail") << '\n';
    for (const auto& w : rep.warnings) os << "warning: " << w << '\n';
    return os.str();
}

} // namespace groth
