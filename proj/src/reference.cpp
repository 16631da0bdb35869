#include "bilr/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bilr::ref {

Vector sense_raw(const DenseEnsemble& e, const Matrix& x) {
    if (x.rows() != e.n || x.cols() != e.n)
        throw std::invalid_argument("ref::sense_raw: signal shape mismatch");
    Vector raw(e.m);
    for (int i = 0; i < e.m; ++i) {
        const Matrix& a = e.matrix(i);
        double acc = 0.0;
        for (int k = 0; k < e.n; ++k)
            for (int l = 0; l < e.n; ++l) acc += a(k, l) * x(k, l);
        raw(i) = acc;
    }
    return raw;
}

Vector sense_raw(const FactorizedEnsemble& e, const Matrix& x) {
    if (x.rows() != e.n || x.cols() != e.n)
        throw std::invalid_argument("ref::sense_raw: signal shape mismatch");
    const Matrix w = e.side_b * x * e.side_c.transpose();
    Vector raw(e.m);
    for (int i = 0; i < e.m; ++i) {
        const Matrix a = e.inner_matrix(i);
        double acc = 0.0;
        for (int k = 0; k < e.p; ++k)
            for (int l = 0; l < e.p; ++l) acc += a(k, l) * w(k, l);
        raw(i) = acc;
    }
    return raw;
}

Matrix adjoint(const DenseEnsemble& e, const Vector& v) {
    if (v.size() != e.m) throw std::invalid_argument("ref::adjoint: coefficient length mismatch");
    Matrix out = Matrix::Zero(e.n, e.n);
    for (int i = 0; i < e.m; ++i) out += v(i) * e.matrix(i);
    return out;
}

Matrix adjoint(const FactorizedEnsemble& e, const Vector& v) {
    if (v.size() != e.m) throw std::invalid_argument("ref::adjoint: coefficient length mismatch");
    Matrix out = Matrix::Zero(e.p, e.p);
    for (int i = 0; i < e.m; ++i) out += v(i) * e.inner_matrix(i);
    return out;
}

BilrProjection project_bilr_exhaustive(const Matrix& m, int s, int r) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("ref::project_bilr_exhaustive: square matrices only");
    const int n = static_cast<int>(m.rows());
    const std::vector<std::vector<int>> supports = enumerate_supports(n, s);

    BilrProjection best;
    double best_residual = std::numeric_limits<double>::infinity();
    for (const std::vector<int>& rows : supports) {
        for (const std::vector<int>& cols : supports) {
            Matrix masked = Matrix::Zero(n, n);
            for (int a : rows)
                for (int b : cols) masked(a, b) = m(a, b);
            const Matrix cand = hard_threshold_rank(masked, r);
            const double residual = frobenius_norm(m - cand);
            if (residual < best_residual) {
                best_residual = residual;
                BilrMatrix proj;
                proj.n = n;
                proj.s = s;
                proj.r = r;
                proj.row_support = rows;
                proj.col_support = cols;
                const SvdResult dec = svd(cand);
                proj.left_factor = Matrix::Zero(n, r);
                proj.right_factor = Matrix::Zero(n, r);
                const int keep = std::min<int>(r, static_cast<int>(dec.singular_values.size()));
                for (int k = 0; k < keep; ++k) {
                    const double root = std::sqrt(dec.singular_values(k));
                    proj.left_factor.col(k) = root * dec.left_vectors.col(k);
                    proj.right_factor.col(k) = root * dec.right_vectors.col(k);
                }
                best.projection = proj;
                best.residual = residual;
            }
        }
    }
    return best;
}

}  // namespace bilr::ref
