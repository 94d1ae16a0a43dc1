#pragma once
#include <vector>
#include <Eigen/Dense>

namespace groth {

using index_t = Eigen::Index;

/// Response vector y (one entry per sample).
using Response = Eigen::VectorXd;

namespace tol {

/// Allowed deviation of a column norm from 1.
inline constexpr double unit = 1e-8;
/// Allowed spectral norm of X_i^T X_i - I.
inline constexpr double orth = 1e-8;
/// Relative pivot below which a Gram-Schmidt column counts as dependent.
inline constexpr double rank = 1e-10;
/// Relative convergence tolerance of the spectral norm iteration.
inline constexpr double spectral = 1e-12;

} // namespace tol

/**
 * An n x (r*m) design matrix split into m groups of r adjacent columns.
 *
 * Group i (1-based) occupies columns (i-1)*r ... i*r-1 of the stored matrix.
 * Construction validates that every column has unit l2 norm and that every
 * group is orthonormal (X_i^T X_i = I); the object is immutable afterwards.
 */
class GroupedDesign
{
public:
    /// Throws invalid_input if the matrix violates any design invariant.
    GroupedDesign(Eigen::MatrixXd data, index_t r);

    index_t n() const noexcept { return data_.rows(); }
    index_t m() const noexcept { return m_; }
    index_t r() const noexcept { return r_; }
    index_t p() const noexcept { return data_.cols(); }

    const Eigen::MatrixXd& matrix() const noexcept { return data_; }

    /// Columns of group i, 1-based.
    Eigen::Block<const Eigen::MatrixXd, Eigen::Dynamic, Eigen::Dynamic, true> group(index_t i) const;

private:
    Eigen::MatrixXd data_;
    index_t m_;
    index_t r_;
};

/**
 * A vector of length r*m partitioned into m blocks of length r.
 * The support (groups with a nonzero block) is always recomputed from the values.
 */
class GroupedVector
{
public:
    GroupedVector(index_t m, index_t r);
    GroupedVector(Eigen::VectorXd values, index_t r);

    index_t m() const noexcept { return m_; }
    index_t r() const noexcept { return r_; }
    index_t size() const noexcept { return values_.size(); }

    const Eigen::VectorXd& values() const noexcept { return values_; }

    /// Block i, 1-based.
    Eigen::VectorBlock<const Eigen::VectorXd> block(index_t i) const;
    void set_block(index_t i, const Eigen::Ref<const Eigen::VectorXd>& v);

    double block_norm(index_t i) const;

    /// l2 norm of every block, in group order.
    Eigen::VectorXd block_norms() const;

    /// Sorted 1-based indices of the groups whose block is nonzero.
    std::vector<index_t> support() const;

private:
    void check_index(index_t i) const;

    Eigen::VectorXd values_;
    index_t m_;
    index_t r_;
};

/// Largest singular value of a.
double spectral_norm(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Plain l_p norm; p may be +infinity.
double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p);

/// Mixed norm (sum_i ||v_i||_p^q)^(1/q); either order may be +infinity.
double lpq_norm(const GroupedVector& v, double p, double q);

/// X_i^T X_j (1-based group indices).
Eigen::MatrixXd group_gram(const GroupedDesign& x, index_t i, index_t j);

/// f = X^T y, blocked like the groups of x.
GroupedVector marginal_correlations(const GroupedDesign& x, const Response& y);

/// Modified Gram-Schmidt with one re-orthogonalization pass, in place.
/// Returns false (leaving cols unspecified) if a pivot falls below tol::rank.
bool orthonormalize_in_place(Eigen::Ref<Eigen::MatrixXd> cols);

/// Orthonormalizes each group of r columns of raw independently.
/// Throws degenerate_group naming the first rank-deficient group.
GroupedDesign orthonormalize_groups(Eigen::MatrixXd raw, index_t r);

} // namespace groth
