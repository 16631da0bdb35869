#include "bilr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bilr {

Matrix hard_threshold_rank(const Matrix& m, int r) {
    if (r < 0) throw std::invalid_argument("hard_threshold_rank: r must be >= 0");
    if (r >= std::min(m.rows(), m.cols())) return m;
    if (r == 0) return Matrix::Zero(m.rows(), m.cols());
    const SvdResult dec = svd(m);
    return dec.left_vectors.leftCols(r) * dec.singular_values.head(r).asDiagonal() *
           dec.right_vectors.leftCols(r).transpose();
}

std::vector<int> top_row_indices(const Matrix& m, int s) {
    const int rows = static_cast<int>(m.rows());
    if (s >= rows) {
        std::vector<int> all(rows);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<int> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> norms(rows);
    for (int i = 0; i < rows; ++i) norms[i] = m.row(i).squaredNorm();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (norms[a] != norms[b]) return norms[a] > norms[b];
        return a < b;
    });
    std::vector<int> kept(order.begin(), order.begin() + s);
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<int> top_col_indices(const Matrix& m, int s) {
    return top_row_indices(m.transpose(), s);
}

Matrix hard_threshold_rows(const Matrix& m, int s) {
    if (s < 0) throw std::invalid_argument("hard_threshold_rows: s must be >= 0");
    if (s >= m.rows()) return m;
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int i : top_row_indices(m, s)) out.row(i) = m.row(i);
    return out;
}

Matrix hard_threshold_cols(const Matrix& m, int s) {
    return hard_threshold_rows(m.transpose(), s).transpose();
}

std::vector<std::vector<int>> enumerate_supports(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    if (k == 0) {
        out.push_back({});
        return out;
    }
    for (;;) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

namespace {

// Residual and truncated-block SVD for one support pair. The residual is
// split as (energy off the block) + (rank-truncation error on the block),
// both computed on the s x s submatrix only.
struct CandidateScore {
    double residual_sq;
    SvdResult block_svd;
};

CandidateScore score_candidate(const Matrix& m, double total_sq, const std::vector<int>& rows,
                               const std::vector<int>& cols, int r) {
    Matrix block(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) block(a, b) = m(rows[a], cols[b]);

    CandidateScore out;
    out.block_svd = svd(block);
    const int keep = std::min<int>(r, static_cast<int>(out.block_svd.singular_values.size()));
    const Matrix trunc = out.block_svd.left_vectors.leftCols(keep) *
                         out.block_svd.singular_values.head(keep).asDiagonal() *
                         out.block_svd.right_vectors.leftCols(keep).transpose();
    out.residual_sq = std::max(0.0, total_sq - block.squaredNorm()) + (block - trunc).squaredNorm();
    return out;
}

BilrMatrix assemble(int n, int s, int r, const std::vector<int>& rows,
                    const std::vector<int>& cols, const SvdResult& block_svd) {
    BilrMatrix out;
    out.n = n;
    out.s = s;
    out.r = r;
    out.row_support = rows;
    out.col_support = cols;
    out.left_factor = Matrix::Zero(n, r);
    out.right_factor = Matrix::Zero(n, r);
    const int keep = std::min<int>(r, static_cast<int>(block_svd.singular_values.size()));
    for (int k = 0; k < keep; ++k) {
        const double root = std::sqrt(block_svd.singular_values(k));
        for (std::size_t a = 0; a < rows.size(); ++a)
            out.left_factor(rows[a], k) = root * block_svd.left_vectors(a, k);
        for (std::size_t b = 0; b < cols.size(); ++b)
            out.right_factor(cols[b], k) = root * block_svd.right_vectors(b, k);
    }
    return out;
}

}  // namespace

BilrProjection project_bilr_exhaustive(const Matrix& m, int s, int r, int max_dim,
                                       int max_sparsity) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("project_bilr_exhaustive: square matrices only");
    const int n = static_cast<int>(m.rows());
    if (s < 1 || s > n || r < 1 || r > s)
        throw std::invalid_argument("project_bilr_exhaustive: requires 1 <= r <= s <= n");
    if (n > max_dim || s > max_sparsity)
        throw std::invalid_argument(
            "project_bilr_exhaustive: dimension too large for exhaustive enumeration");

    const std::vector<std::vector<int>> supports = enumerate_supports(n, s);
    const long num = static_cast<long>(supports.size());
    const long total = num * num;
    const double total_sq = m.squaredNorm();

    // Argmin over all support pairs; ties resolved toward the smaller flat
    // index, i.e. the lexicographically smaller (S, T), independent of the
    // parallel schedule.
    double best_sq = std::numeric_limits<double>::infinity();
    long best_idx = -1;
#pragma omp parallel
    {
        double loc_sq = std::numeric_limits<double>::infinity();
        long loc_idx = -1;
#pragma omp for schedule(static)
        for (long idx = 0; idx < total; ++idx) {
            const CandidateScore cand =
                score_candidate(m, total_sq, supports[idx / num], supports[idx % num], r);
            if (cand.residual_sq < loc_sq || (cand.residual_sq == loc_sq && idx < loc_idx)) {
                loc_sq = cand.residual_sq;
                loc_idx = idx;
            }
        }
#pragma omp critical
        {
            if (loc_sq < best_sq || (loc_sq == best_sq && loc_idx < best_idx && loc_idx >= 0)) {
                best_sq = loc_sq;
                best_idx = loc_idx;
            }
        }
    }

    const std::vector<int>& rows = supports[best_idx / num];
    const std::vector<int>& cols = supports[best_idx % num];
    const CandidateScore winner = score_candidate(m, total_sq, rows, cols, r);
    BilrProjection out;
    out.projection = assemble(n, s, r, rows, cols, winner.block_svd);
    out.residual = std::sqrt(std::max(0.0, winner.residual_sq));
    return out;
}

BilrMatrix project_bilr_heuristic(const Matrix& m, int s, int r, int sweeps) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("project_bilr_heuristic: square matrices only");
    const int n = static_cast<int>(m.rows());
    if (s < 1 || s > n || r < 1 || r > s)
        throw std::invalid_argument("project_bilr_heuristic: requires 1 <= r <= s <= n");
    if (sweeps < 1) throw std::invalid_argument("project_bilr_heuristic: sweeps must be >= 1");

    const double total_sq = m.squaredNorm();

    // Single-pass composition fixes the initial supports; each sweep then
    // re-selects rows against the current columns and vice versa, always
    // re-truncating the original matrix on the refreshed supports.
    const Matrix single_pass = hard_threshold_cols(hard_threshold_rows(hard_threshold_rank(m, r), s), s);
    std::vector<int> rows = top_row_indices(single_pass, s);
    std::vector<int> cols = top_col_indices(single_pass, s);

    CandidateScore best = score_candidate(m, total_sq, rows, cols, r);
    std::vector<int> best_rows = rows, best_cols = cols;

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        Matrix col_restricted(n, cols.size());
        for (std::size_t b = 0; b < cols.size(); ++b) col_restricted.col(b) = m.col(cols[b]);
        rows = top_row_indices(col_restricted, s);

        Matrix row_restricted(rows.size(), n);
        for (std::size_t a = 0; a < rows.size(); ++a) row_restricted.row(a) = m.row(rows[a]);
        cols = top_col_indices(row_restricted, s);

        const CandidateScore cand = score_candidate(m, total_sq, rows, cols, r);
        if (cand.residual_sq < best.residual_sq) {
            best = cand;
            best_rows = rows;
            best_cols = cols;
        }
    }
    return assemble(n, s, r, best_rows, best_cols, best.block_svd);
}

}  // namespace bilr
