#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace oracle {
namespace {

Eigen::MatrixXd block_product(const Eigen::MatrixXd& x, index_t r, index_t i, index_t j)
{
    Eigen::MatrixXd b(r, r);
    for (index_t a = 0; a < r; ++a) {
        for (index_t c = 0; c < r; ++c) {
            double s = 0.0;
            for (index_t row = 0; row < x.rows(); ++row) s += x(row, i * r + a) * x(row, j * r + c);
            b(a, c) = s;
        }
    }
    return b;
}

double svd_norm(const Eigen::MatrixXd& b)
{
    return Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
}

double block_norm2(const Eigen::VectorXd& v, index_t r, index_t g)
{
    double s = 0.0;
    for (index_t e = 0; e < r; ++e) s += v[g * r + e] * v[g * r + e];
    return std::sqrt(s);
}

// Event norms for one ordered prefix; dense loops throughout.
void event_norms(const Eigen::MatrixXd& x, index_t r, const std::vector<index_t>& prefix,
                 const Eigen::VectorXd& z, double& in_model, double& off_model)
{
    const index_t m = x.cols() / r;
    const index_t k = static_cast<index_t>(prefix.size());
    Eigen::MatrixXd xp(x.rows(), r * k);
    for (index_t j = 0; j < k; ++j) xp.middleCols(j * r, r) = x.middleCols(prefix[j] * r, r);
    const Eigen::VectorXd w = matvec(xp, z);

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(r * k, r * k);
    for (index_t a = 0; a < r * k; ++a) {
        for (index_t b = 0; b < r * k; ++b) {
            double s = 0.0;
            for (index_t row = 0; row < x.rows(); ++row) s += xp(row, a) * xp(row, b);
            gram(a, b) = s - (a == b ? 1.0 : 0.0);
        }
    }
    const Eigen::VectorXd dev = matvec(gram, z);
    in_model = 0.0;
    for (index_t j = 0; j < k; ++j) in_model = std::max(in_model, block_norm2(dev, r, j));

    const Eigen::VectorXd f = matvec_t(x, w);
    off_model = 0.0;
    for (index_t g = 0; g < m; ++g) {
        if (std::find(prefix.begin(), prefix.end(), g) == prefix.end()) {
            off_model = std::max(off_model, block_norm2(f, r, g));
        }
    }
}

ExactTail exact(const Eigen::MatrixXd& x, index_t r, const Eigen::VectorXd& z, double eps,
                bool in_model_event)
{
    const index_t m = x.cols() / r;
    const index_t k = z.size() / r;
    const double znorm = z.norm();
    ExactTail out{0, 0, 0.0};
    std::vector<index_t> prefix;
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    auto rec = [&](auto& self) -> void {
        if (static_cast<index_t>(prefix.size()) == k) {
            double a = 0.0, b = 0.0;
            event_norms(x, r, prefix, z, a, b);
            const double ratio = (in_model_event ? a : b) / znorm;
            ++out.arrangements;
            if (ratio >= eps) ++out.events;
            out.max_ratio = std::max(out.max_ratio, ratio);
            return;
        }
        for (index_t g = 0; g < m; ++g) {
            if (used[static_cast<std::size_t>(g)]) continue;
            used[static_cast<std::size_t>(g)] = true;
            prefix.push_back(g);
            self(self);
            prefix.pop_back();
            used[static_cast<std::size_t>(g)] = false;
        }
    };
    rec(rec);
    return out;
}

} // namespace

long double char_poly(const Eigen::MatrixXd& g, long double lambda)
{
    const index_t n = g.rows();
    std::vector<long double> a(static_cast<std::size_t>(n * n));
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < n; ++j) a[i * n + j] = g(i, j) - (i == j ? lambda : 0.0L);
    }
    long double det = 1.0L;
    for (index_t c = 0; c < n; ++c) {
        index_t piv = c;
        for (index_t i = c + 1; i < n; ++i) {
            if (std::fabs(a[i * n + c]) > std::fabs(a[piv * n + c])) piv = i;
        }
        if (a[piv * n + c] == 0.0L) return 0.0L;
        if (piv != c) {
            for (index_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (index_t i = c + 1; i < n; ++i) {
            const long double f = a[i * n + c] / a[c * n + c];
            for (index_t j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

double spectral_norm(const Eigen::MatrixXd& a)
{
    const Eigen::MatrixXd g = a.rows() < a.cols() ? Eigen::MatrixXd(a * a.transpose())
                                                  : Eigen::MatrixXd(a.transpose() * a);
    const index_t n = g.rows();
    // lambda > lambda_max  <=>  lambda I - G positive definite  <=>  every
    // leading minor (-1)^k det(G_k - lambda I_k) is positive.
    auto above = [&](long double lambda) {
        for (index_t k = 1; k <= n; ++k) {
            const long double d = char_poly(g.topLeftCorner(k, k), lambda);
            if ((k % 2 == 0 ? d : -d) <= 0.0L) return false;
        }
        return true;
    };
    long double lo = 0.0L, hi = static_cast<long double>(g.trace()) + 1.0L;
    for (int it = 0; it < 400 && hi - lo > 1e-17L * hi; ++it) {
        const long double mid = 0.5L * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return static_cast<double>(std::sqrt(0.5L * (lo + hi)));
}

Eigen::VectorXd matvec_t(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    Eigen::VectorXd f(x.cols());
    for (index_t c = 0; c < x.cols(); ++c) {
        double s = 0.0;
        for (index_t row = 0; row < x.rows(); ++row) s += x(row, c) * y[row];
        f[c] = s;
    }
    return f;
}

Eigen::VectorXd matvec(const Eigen::MatrixXd& x, const Eigen::VectorXd& b)
{
    Eigen::VectorXd y(x.rows());
    for (index_t row = 0; row < x.rows(); ++row) {
        double s = 0.0;
        for (index_t c = 0; c < x.cols(); ++c) s += x(row, c) * b[c];
        y[row] = s;
    }
    return y;
}

PairMax mu(const Eigen::MatrixXd& x, index_t r)
{
    const index_t m = x.cols() / r;
    PairMax best{-1.0, 0, 0};
    for (index_t i = 0; i < m; ++i) {
        for (index_t j = i + 1; j < m; ++j) {
            const double v = svd_norm(block_product(x, r, i, j));
            if (v > best.value) best = {v, i + 1, j + 1};
        }
    }
    return best;
}

GroupMax nu(const Eigen::MatrixXd& x, index_t r)
{
    const index_t m = x.cols() / r;
    GroupMax best{-1.0, 0};
    for (index_t i = 0; i < m; ++i) {
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(r, r);
        for (index_t j = 0; j < m; ++j) {
            if (j != i) sum += block_product(x, r, i, j);
        }
        const double v = svd_norm(sum) / static_cast<double>(m - 1);
        if (v > best.value) best = {v, i + 1};
    }
    return best;
}

std::vector<index_t> select_groups(const Eigen::MatrixXd& x, index_t r, const Eigen::VectorXd& y,
                                   index_t k)
{
    const index_t m = x.cols() / r;
    const Eigen::VectorXd f = matvec_t(x, y);
    std::vector<double> score(static_cast<std::size_t>(m));
    for (index_t g = 0; g < m; ++g) score[g] = block_norm2(f, r, g);
    std::vector<index_t> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t a, index_t b) { return score[a] > score[b]; });
    std::vector<index_t> out;
    for (index_t i = 0; i < k; ++i) out.push_back(order[i] + 1);
    return out;
}

std::vector<index_t> select_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, index_t s)
{
    const Eigen::VectorXd f = matvec_t(x, y);
    std::vector<index_t> order(static_cast<std::size_t>(x.cols()));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t a, index_t b) { return std::abs(f[a]) > std::abs(f[b]); });
    std::vector<index_t> out;
    for (index_t i = 0; i < s; ++i) out.push_back(order[i] + 1);
    return out;
}

Terms sufficient_terms(const Eigen::MatrixXd& x, index_t r, const Eigen::VectorXd& beta)
{
    const index_t m = x.cols() / r;
    std::vector<index_t> in, out;
    for (index_t g = 0; g < m; ++g) (block_norm2(beta, r, g) > 0.0 ? in : out).push_back(g);
    const index_t k = static_cast<index_t>(in.size());

    Eigen::MatrixXd xk(x.rows(), r * k);
    Eigen::VectorXd bk(r * k);
    for (index_t j = 0; j < k; ++j) {
        xk.middleCols(j * r, r) = x.middleCols(in[j] * r, r);
        bk.segment(j * r, r) = beta.segment(in[j] * r, r);
    }
    Eigen::MatrixXd gram(r * k, r * k);
    for (index_t a = 0; a < r * k; ++a) {
        for (index_t b = 0; b < r * k; ++b) {
            double s = 0.0;
            for (index_t row = 0; row < x.rows(); ++row) s += xk(row, a) * xk(row, b);
            gram(a, b) = s - (a == b ? 1.0 : 0.0);
        }
    }
    const Eigen::VectorXd dev = matvec(gram, bk);
    Terms t{0.0, 0.0};
    for (index_t j = 0; j < k; ++j) t.gram_deviation = std::max(t.gram_deviation, block_norm2(dev, r, j));

    const Eigen::VectorXd w = matvec(xk, bk);
    for (index_t g : out) {
        Eigen::VectorXd fg(r);
        for (index_t e = 0; e < r; ++e) {
            double s = 0.0;
            for (index_t row = 0; row < x.rows(); ++row) s += x(row, g * r + e) * w[row];
            fg[e] = s;
        }
        t.cross_correlation = std::max(t.cross_correlation, fg.norm());
    }
    return t;
}

ExactTail exact_lemma1(const Eigen::MatrixXd& x, index_t r, const Eigen::VectorXd& z, double eps)
{
    return exact(x, r, z, eps, true);
}

ExactTail exact_lemma2(const Eigen::MatrixXd& x, index_t r, const Eigen::VectorXd& z, double eps)
{
    return exact(x, r, z, eps, false);
}

Eigen::MatrixXd random_orthonormal_groups(index_t n, index_t m, index_t r, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(n, r * m);
    for (index_t g = 0; g < m; ++g) {
        Eigen::MatrixXd a(n, r);
        for (index_t c = 0; c < r; ++c) {
            for (index_t row = 0; row < n; ++row) a(row, c) = normal(gen);
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        x.middleCols(g * r, r) = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    }
    return x;
}

Eigen::MatrixXd disjoint_groups(index_t n, index_t m, index_t r)
{
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, r * m);
    for (index_t c = 0; c < r * m; ++c) x(c, c) = 1.0;
    return x;
}

} // namespace oracle
