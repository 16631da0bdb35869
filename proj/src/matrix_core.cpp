#include "bilr/matrix_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace bilr {

Matrix gaussian_matrix(int rows, int cols, GaussianStream& g) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = g.gaussian();
    return m;
}

std::vector<int> sample_support(int n, int k, GaussianStream& g) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(g.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

BilrMatrix generate_bilr(int n, int s, int r, std::uint64_t seed) {
    if (r < 1 || r > s || s > n)
        throw std::invalid_argument("generate_bilr: requires 1 <= r <= s <= n");

    BilrMatrix x;
    x.n = n;
    x.s = s;
    x.r = r;

    GaussianStream row_g(seed_mix({seed, stream::row_support}));
    GaussianStream col_g(seed_mix({seed, stream::col_support}));
    x.row_support = sample_support(n, s, row_g);
    x.col_support = sample_support(n, s, col_g);

    GaussianStream fac_g(seed_mix({seed, stream::signal}));
    x.left_factor = Matrix::Zero(n, r);
    x.right_factor = Matrix::Zero(n, r);
    for (int i : x.row_support)
        for (int k = 0; k < r; ++k) x.left_factor(i, k) = fac_g.gaussian();
    for (int j : x.col_support)
        for (int k = 0; k < r; ++k) x.right_factor(j, k) = fac_g.gaussian();

    const double norm = frobenius_norm(x.dense());
    x.left_factor /= norm;
    return x;
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_inner: shape mismatch");
    return a.cwiseProduct(b).sum();
}

SvdResult svd(const Matrix& m) {
    SvdResult out;
    if (std::min(m.rows(), m.cols()) <= 16) {
        Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success) throw std::runtime_error("svd: decomposition failed");
        out.singular_values = dec.singularValues();
        out.left_vectors = dec.matrixU();
        out.right_vectors = dec.matrixV();
    } else {
        Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success) throw std::runtime_error("svd: decomposition failed");
        out.singular_values = dec.singularValues();
        out.left_vectors = dec.matrixU();
        out.right_vectors = dec.matrixV();
    }
    return out;
}

bool in_bilr_set(const Matrix& x, int s, int r, double sv_cutoff) {
    int nonzero_rows = 0, nonzero_cols = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        if (x.row(i).cwiseAbs().maxCoeff() > 0.0) ++nonzero_rows;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        if (x.col(j).cwiseAbs().maxCoeff() > 0.0) ++nonzero_cols;
    if (nonzero_rows > s || nonzero_cols > s) return false;

    const Vector sv = svd(x).singular_values;
    if (sv.size() <= r) return true;
    const double top = sv(0);
    if (top == 0.0) return true;
    return sv(r) <= sv_cutoff * top;
}

}  // namespace bilr
