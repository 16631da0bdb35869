#ifndef BILR_OPERATORS_HPP
#define BILR_OPERATORS_HPP

#include <vector>

#include "bilr/matrix_core.hpp"

namespace bilr {

// Best rank-r approximation: keep the r leading singular triplets.
// r = 0 gives the zero matrix; r >= min(rows, cols) returns m unchanged.
Matrix hard_threshold_rank(const Matrix& m, int r);

// Best s-row-sparse approximation: keep the s rows of largest l2 norm and
// zero the rest. Ties broken toward the smaller row index. s >= rows returns
// m unchanged.
Matrix hard_threshold_rows(const Matrix& m, int s);

// Transpose dual of hard_threshold_rows: H_col(M) = H_row(M^T)^T.
Matrix hard_threshold_cols(const Matrix& m, int s);

// Indices kept by the row (column) thresholding above, sorted ascending.
std::vector<int> top_row_indices(const Matrix& m, int s);
std::vector<int> top_col_indices(const Matrix& m, int s);

struct BilrProjection {
    BilrMatrix projection;
    double residual = 0.0;
};

// Projection onto the bisparse low-rank set by full enumeration of all
// (row-support, col-support) pairs of size s with rank truncation on each
// submatrix. Minimizer unique up to ties, which are broken toward the
// lexicographically smallest support pair. Square matrices only; enumeration
// cost is C(n,s)^2 submatrix SVDs, so dimensions are capped.
// Throws std::invalid_argument above the (max_dim, max_sparsity) ceiling.
BilrProjection project_bilr_exhaustive(const Matrix& m, int s, int r, int max_dim = 14,
                                       int max_sparsity = 4);

// Heuristic projection onto the same set: evaluates the single-pass
// composition H_col(H_row(H_rank(m))) and then refines the supports by
// alternating row/column selection sweeps against m, keeping the best
// candidate. Output is always in the set; the residual never exceeds the
// single-pass composition's. No optimality claim.
BilrMatrix project_bilr_heuristic(const Matrix& m, int s, int r, int sweeps);

// All size-k subsets of {0,...,n-1} in lexicographic order.
std::vector<std::vector<int>> enumerate_supports(int n, int k);

}  // namespace bilr

#endif  // BILR_OPERATORS_HPP
