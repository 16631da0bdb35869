#ifndef BILR_MATRIX_CORE_HPP
#define BILR_MATRIX_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bilr/rng.hpp"

namespace bilr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A bisparse low-rank matrix held in factored form X = left * right^T.
// At most s rows (row_support) and s columns (col_support) are nonzero and
// rank(X) <= r. Factor rows outside the supports are exactly zero.
struct BilrMatrix {
    int n = 0;
    int s = 0;
    int r = 0;
    std::vector<int> row_support;  // sorted ascending, size <= s
    std::vector<int> col_support;  // sorted ascending, size <= s
    Matrix left_factor;            // n x r
    Matrix right_factor;           // n x r

    Matrix dense() const { return left_factor * right_factor.transpose(); }
};

struct SvdResult {
    Vector singular_values;  // nonincreasing, nonnegative
    Matrix left_vectors;     // orthonormal columns u_k
    Matrix right_vectors;    // orthonormal columns v_k

    Matrix reconstruct() const {
        return left_vectors * singular_values.asDiagonal() * right_vectors.transpose();
    }
};

// Draws a random member of the signal class: supports of size exactly s
// uniform without replacement, factor entries iid standard normal on the
// supports, the product rescaled to unit Frobenius norm. Rank is r with
// probability one. Deterministic given the seed.
// Throws std::invalid_argument unless 1 <= r <= s <= n.
BilrMatrix generate_bilr(int n, int s, int r, std::uint64_t seed);

double frobenius_norm(const Matrix& m);

// Sum of entrywise products. Throws std::invalid_argument on shape mismatch.
double frobenius_inner(const Matrix& a, const Matrix& b);

// Thin SVD with singular values sorted nonincreasing. Throws
// std::runtime_error if the decomposition does not converge.
SvdResult svd(const Matrix& m);

// iid N(0,1) entries drawn row-major from the stream.
Matrix gaussian_matrix(int rows, int cols, GaussianStream& g);

// Draws k indices from {0,...,n-1} uniformly without replacement, sorted.
std::vector<int> sample_support(int n, int k, GaussianStream& g);

// Membership test for the signal class: at most s nonzero rows, at most s
// nonzero columns, and singular values beyond the r-th below cutoff * sigma_1.
bool in_bilr_set(const Matrix& x, int s, int r, double sv_cutoff = 1e-10);

}  // namespace bilr

#endif  // BILR_MATRIX_CORE_HPP
