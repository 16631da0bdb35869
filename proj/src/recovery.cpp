#include "bilr/recovery.hpp"

#include <cmath>
#include <stdexcept>

namespace bilr {

namespace {

Vector to_coefficients(const SignVector& y) {
    Vector v(y.m());
    for (int i = 0; i < y.m(); ++i) v(i) = static_cast<double>(y.bits[static_cast<std::size_t>(i)]);
    return v;
}

// Factors of the s x s block of x at (rows, cols), embedded back at the
// supports so factor rows outside them are exactly zero.
BilrMatrix structured_from_supports(const Matrix& x, int s, int r, const std::vector<int>& rows,
                                    const std::vector<int>& cols) {
    Matrix block(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) block(a, b) = x(rows[a], cols[b]);
    const SvdResult dec = svd(block);

    BilrMatrix out;
    out.n = static_cast<int>(x.rows());
    out.s = s;
    out.r = r;
    out.row_support = rows;
    out.col_support = cols;
    out.left_factor = Matrix::Zero(out.n, r);
    out.right_factor = Matrix::Zero(out.n, r);
    const int keep = std::min<int>(r, static_cast<int>(dec.singular_values.size()));
    for (int k = 0; k < keep; ++k) {
        const double root = std::sqrt(dec.singular_values(k));
        for (std::size_t a = 0; a < rows.size(); ++a)
            out.left_factor(rows[a], k) = root * dec.left_vectors(a, k);
        for (std::size_t b = 0; b < cols.size(); ++b)
            out.right_factor(cols[b], k) = root * dec.right_vectors(b, k);
    }
    return out;
}

double consistency_fraction(const SignVector& y, const Vector& requantized_raw) {
    const SignVector yhat = quantize(requantized_raw);
    return static_cast<double>(hamming_distance(y, yhat)) / static_cast<double>(y.m());
}

RecoveryOutput multistep_core(const SignVector& y, const Matrix& back,
                              const FactorizedEnsemble& e, int s, int r) {
    if (s < 1 || s > e.n || r < 1 || r > s)
        throw std::invalid_argument("recover_multistep: requires 1 <= r <= s <= n");
    if (back.rows() != e.p || back.cols() != e.p)
        throw std::invalid_argument("recover_multistep: back projection shape mismatch");

    RecoveryOutput out;
    out.meta.scheme = "multistep";
    out.meta.s = s;
    out.meta.r = r;
    out.meta.back_norm = frobenius_norm(back);

    const Matrix ranked = hard_threshold_rank(back, r);
    out.meta.rank_stage_norm = frobenius_norm(ranked);

    const Matrix lifted = e.side_b.transpose() * ranked;  // n x p
    const std::vector<int> rows = top_row_indices(lifted, s);
    const Matrix row_stage = hard_threshold_rows(lifted, s);
    out.meta.row_stage_norm = frobenius_norm(row_stage);

    const Matrix pre = row_stage * e.side_c;  // n x n
    const std::vector<int> cols = top_col_indices(pre, s);
    const Matrix thresholded = hard_threshold_cols(pre, s);

    out.structured = structured_from_supports(thresholded, s, r, rows, cols);
    out.estimate = out.structured.dense();
    out.meta.estimate_norm = frobenius_norm(out.estimate);
    out.meta.consistency_hamming_frac = consistency_fraction(y, sense_raw(e, out.estimate));
    return out;
}

}  // namespace

RecoveryOutput recover_pbp(const SignVector& y, const DenseEnsemble& e, int s, int r,
                           bool allow_heuristic, int heuristic_sweeps) {
    if (y.m() != e.m) throw std::invalid_argument("recover_pbp: sign vector length mismatch");
    if (s < 1 || s > e.n || r < 1 || r > s)
        throw std::invalid_argument("recover_pbp: requires 1 <= r <= s <= n");

    RecoveryOutput out;
    out.meta.scheme = "pbp";
    out.meta.s = s;
    out.meta.r = r;

    const Matrix back = adjoint(e, to_coefficients(y));
    out.meta.back_norm = frobenius_norm(back);

    if (e.n <= 14 && s <= 4) {
        BilrProjection proj = project_bilr_exhaustive(back, s, r);
        out.structured = std::move(proj.projection);
        out.meta.projection = "exhaustive";
        out.meta.projection_residual = proj.residual;
    } else if (allow_heuristic) {
        out.structured = project_bilr_heuristic(back, s, r, heuristic_sweeps);
        out.meta.projection = "heuristic";
        out.meta.projection_residual = frobenius_norm(back - out.structured.dense());
    } else {
        throw std::invalid_argument(
            "recover_pbp: dimension exceeds the exhaustive projection ceiling; "
            "pass allow_heuristic to opt into the heuristic projection");
    }

    out.estimate = out.structured.dense();
    out.meta.estimate_norm = frobenius_norm(out.estimate);
    out.meta.consistency_hamming_frac = consistency_fraction(y, sense_raw(e, out.estimate));
    return out;
}

RecoveryOutput recover_multistep(const SignVector& y, const FactorizedEnsemble& e, int s, int r) {
    if (y.m() != e.m) throw std::invalid_argument("recover_multistep: sign vector length mismatch");
    return multistep_core(y, adjoint(e, to_coefficients(y)), e, s, r);
}

RecoveryOutput recover_multistep(const SignVector& y, const Matrix& back,
                                 const FactorizedEnsemble& e, int s, int r) {
    if (y.m() != e.m) throw std::invalid_argument("recover_multistep: sign vector length mismatch");
    return multistep_core(y, back, e, s, r);
}

RecoveryOutput rescale_to_unit(const RecoveryOutput& out) {
    const double norm = frobenius_norm(out.estimate);
    if (norm == 0.0) throw std::runtime_error("rescale_to_unit: zero estimate");
    RecoveryOutput scaled = out;
    scaled.structured.left_factor /= norm;
    scaled.estimate = scaled.structured.dense();
    scaled.meta.estimate_norm = frobenius_norm(scaled.estimate);
    return scaled;
}

}  // namespace bilr
