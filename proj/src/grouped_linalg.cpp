#include <groth/grouped_linalg.hpp>
#include <groth/error.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace groth {
namespace {

constexpr int max_power_iters = 10000;
constexpr int max_squarings = 64;

std::string group_label(index_t i)
{
    return "group " + std::to_string(i);
}

// Largest eigenvalue of a symmetric positive semidefinite matrix.
//
// A few rounds of normalized repeated squaring (g^2, g^4, g^8, ...) turn g into
// an approximate projector onto its top eigenspace; its heaviest column is the
// start vector for the power iteration. This removes the dependence on a
// random start and the slow convergence when the top two eigenvalues are close.
double largest_eigenvalue_psd(const Eigen::MatrixXd& g)
{
    const double scale = g.norm();
    if (scale == 0.0) return 0.0;

    Eigen::MatrixXd b = g / scale;
    for (int s = 0; s < max_squarings; ++s) {
        Eigen::MatrixXd next = b * b;
        const double nn = next.norm();
        if (nn == 0.0) break;
        next /= nn;
        const bool settled = (next - b).norm() <= 1e-15;
        b.swap(next);
        if (settled) break;
    }

    index_t col = 0;
    b.colwise().norm().maxCoeff(&col);
    Eigen::VectorXd x = b.col(col);
    double xn = x.norm();
    if (!(xn > 0.0)) {
        x = Eigen::VectorXd::Ones(g.rows());
        xn = x.norm();
    }
    x /= xn;

    Eigen::VectorXd gx = g * x;
    double lambda = x.dot(gx);
    for (int it = 0; it < max_power_iters; ++it) {
        const double nrm = gx.norm();
        if (nrm == 0.0) return 0.0;
        x = gx / nrm;
        gx.noalias() = g * x;
        const double next = x.dot(gx);
        const bool converged = std::abs(next - lambda) <= tol::spectral * std::abs(next);
        lambda = next;
        if (converged) break;
    }

    // Rayleigh refinement on the renormalized iterate.
    x.normalize();
    lambda = x.dot(g * x);
    return std::max(lambda, 0.0);
}

} // namespace

// ---------------------------------------------------------------------------
// GroupedDesign

GroupedDesign::GroupedDesign(Eigen::MatrixXd data, index_t r)
    : data_(std::move(data)), m_(0), r_(r)
{
    if (r_ < 1) throw invalid_input("group size r must be positive");
    if (data_.rows() < 1 || data_.cols() < 1) throw invalid_input("design matrix is empty");
    if (data_.cols() % r_ != 0) {
        throw dimension_mismatch("column count " + std::to_string(data_.cols()) +
                                 " is not a multiple of r = " + std::to_string(r_));
    }
    if (r_ > data_.rows()) throw invalid_input("group size r exceeds sample count n");
    if (!data_.allFinite()) throw invalid_input("design matrix has non-finite entries");
    m_ = data_.cols() / r_;

    for (index_t c = 0; c < data_.cols(); ++c) {
        const double nrm = data_.col(c).norm();
        if (std::abs(nrm - 1.0) > tol::unit) {
            throw invalid_input("column " + std::to_string(c + 1) + " has norm " +
                                std::to_string(nrm) + ", expected 1");
        }
    }
    for (index_t i = 1; i <= m_; ++i) {
        const auto xi = group(i);
        Eigen::MatrixXd dev = xi.transpose() * xi;
        dev.diagonal().array() -= 1.0;
        if (spectral_norm(dev) > tol::orth) {
            throw invalid_input(group_label(i) + " is not orthonormal");
        }
    }
}

Eigen::Block<const Eigen::MatrixXd, Eigen::Dynamic, Eigen::Dynamic, true> GroupedDesign::group(index_t i) const
{
    if (i < 1 || i > m_) {
        throw index_out_of_range(group_label(i) + " outside 1.." + std::to_string(m_));
    }
    return data_.middleCols((i - 1) * r_, r_);
}

// ---------------------------------------------------------------------------
// GroupedVector

GroupedVector::GroupedVector(index_t m, index_t r)
    : values_(Eigen::VectorXd::Zero(m * r)), m_(m), r_(r)
{
    if (m < 1 || r < 1) throw invalid_input("grouped vector needs m >= 1 and r >= 1");
}

GroupedVector::GroupedVector(Eigen::VectorXd values, index_t r)
    : values_(std::move(values)), m_(0), r_(r)
{
    if (r_ < 1) throw invalid_input("block length r must be positive");
    if (values_.size() == 0 || values_.size() % r_ != 0) {
        throw dimension_mismatch("vector length " + std::to_string(values_.size()) +
                                 " is not a positive multiple of r = " + std::to_string(r_));
    }
    m_ = values_.size() / r_;
}

void GroupedVector::check_index(index_t i) const
{
    if (i < 1 || i > m_) {
        throw index_out_of_range(group_label(i) + " outside 1.." + std::to_string(m_));
    }
}

Eigen::VectorBlock<const Eigen::VectorXd> GroupedVector::block(index_t i) const
{
    check_index(i);
    return values_.segment((i - 1) * r_, r_);
}

void GroupedVector::set_block(index_t i, const Eigen::Ref<const Eigen::VectorXd>& v)
{
    check_index(i);
    if (v.size() != r_) throw dimension_mismatch("block has wrong length");
    values_.segment((i - 1) * r_, r_) = v;
}

double GroupedVector::block_norm(index_t i) const
{
    return block(i).norm();
}

Eigen::VectorXd GroupedVector::block_norms() const
{
    Eigen::VectorXd out(m_);
    for (index_t i = 0; i < m_; ++i) out[i] = values_.segment(i * r_, r_).norm();
    return out;
}

std::vector<index_t> GroupedVector::support() const
{
    std::vector<index_t> out;
    for (index_t i = 0; i < m_; ++i) {
        if ((values_.segment(i * r_, r_).array() != 0.0).any()) out.push_back(i + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// kernels

double spectral_norm(const Eigen::Ref<const Eigen::MatrixXd>& a)
{
    if (a.rows() < 1 || a.cols() < 1) throw invalid_input("spectral_norm of an empty matrix");
    if (!a.allFinite()) throw invalid_input("spectral_norm: non-finite entry");
    if (a.size() == 1) return std::abs(a(0, 0));

    Eigen::MatrixXd g = a.cols() <= a.rows()
        ? Eigen::MatrixXd(a.transpose() * a)
        : Eigen::MatrixXd(a * a.transpose());
    g = 0.5 * (g + g.transpose()).eval();
    return std::sqrt(largest_eigenvalue_psd(g));
}

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p)
{
    if (!(p > 0.0)) throw invalid_input("norm order must be in (0, inf]");
    if (v.size() == 0) return 0.0;
    if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
    if (p == 2.0) return v.norm();
    if (p == 1.0) return v.cwiseAbs().sum();
    double acc = 0.0;
    for (index_t i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
    return std::pow(acc, 1.0 / p);
}

double lpq_norm(const GroupedVector& v, double p, double q)
{
    if (!(p > 0.0) || !(q > 0.0)) throw invalid_input("norm orders must be in (0, inf]");
    Eigen::VectorXd blocks(v.m());
    for (index_t i = 0; i < v.m(); ++i) {
        blocks[i] = lp_norm(v.values().segment(i * v.r(), v.r()), p);
    }
    return lp_norm(blocks, q);
}

Eigen::MatrixXd group_gram(const GroupedDesign& x, index_t i, index_t j)
{
    return x.group(i).transpose() * x.group(j);
}

GroupedVector marginal_correlations(const GroupedDesign& x, const Response& y)
{
    if (y.size() != x.n()) {
        throw dimension_mismatch("response has " + std::to_string(y.size()) +
                                 " entries, design has n = " + std::to_string(x.n()));
    }
    Eigen::VectorXd f = x.matrix().transpose() * y;
    return GroupedVector(std::move(f), x.r());
}

bool orthonormalize_in_place(Eigen::Ref<Eigen::MatrixXd> cols)
{
    for (index_t c = 0; c < cols.cols(); ++c) {
        const double original = cols.col(c).norm();
        if (!(original > 0.0) || !std::isfinite(original)) return false;
        for (int pass = 0; pass < 2; ++pass) {
            for (index_t j = 0; j < c; ++j) {
                const double proj = cols.col(j).dot(cols.col(c));
                cols.col(c) -= proj * cols.col(j);
            }
        }
        const double nrm = cols.col(c).norm();
        if (nrm <= tol::rank * original) return false;
        cols.col(c) /= nrm;
    }
    return true;
}

GroupedDesign orthonormalize_groups(Eigen::MatrixXd raw, index_t r)
{
    if (r < 1) throw invalid_input("group size r must be positive");
    if (raw.cols() % r != 0 || raw.cols() == 0) {
        throw dimension_mismatch("column count is not a positive multiple of r");
    }
    if (r > raw.rows()) throw invalid_input("group size r exceeds sample count n");
    if (!raw.allFinite()) throw invalid_input("matrix has non-finite entries");

    const index_t m = raw.cols() / r;
    for (index_t i = 0; i < m; ++i) {
        if (!orthonormalize_in_place(raw.middleCols(i * r, r))) {
            throw degenerate_group(static_cast<long>(i + 1),
                                   group_label(i + 1) + " is rank deficient");
        }
    }
    return GroupedDesign(std::move(raw), r);
}

} // namespace groth
