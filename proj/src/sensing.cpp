#include "bilr/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilr {

namespace {

constexpr long kChunk = 256;  // fixed accumulation chunk, independent of thread count

constexpr double kHalfPi = 1.5707963267948966;

}  // namespace

int hamming_distance(const SignVector& a, const SignVector& b) {
    if (a.bits.size() != b.bits.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    int d = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) d += (a.bits[i] != b.bits[i]);
    return d;
}

DenseEnsemble make_dense_ensemble(int n, int m, std::uint64_t seed, bool normalized) {
    if (n < 1 || m < 1) throw std::invalid_argument("make_dense_ensemble: n, m must be >= 1");
    DenseEnsemble e;
    e.n = n;
    e.m = m;
    e.normalized = normalized;
    e.scale = normalized ? std::sqrt(kHalfPi) / m : 1.0;
    e.seed = seed;
    e.mats.resize(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        GaussianStream g(seed_mix({seed, stream::dense_matrix, static_cast<std::uint64_t>(i)}));
        e.mats[static_cast<std::size_t>(i)] = gaussian_matrix(n, n, g) * e.scale;
    }
    return e;
}

FactorizedEnsemble make_factorized_ensemble(int n, int m, int p, std::uint64_t seed) {
    if (n < 1 || m < 1 || p < 1)
        throw std::invalid_argument("make_factorized_ensemble: n, m, p must be >= 1");
    FactorizedEnsemble e;
    e.n = n;
    e.m = m;
    e.p = p;
    e.inner_scale = std::sqrt(kHalfPi) / m;
    e.seed = seed;
    const double side_sigma = 1.0 / std::sqrt(static_cast<double>(p));
    GaussianStream gb(seed_mix({seed, stream::side_b}));
    GaussianStream gc(seed_mix({seed, stream::side_c}));
    e.side_b = gaussian_matrix(p, n, gb) * side_sigma;
    e.side_c = gaussian_matrix(p, n, gc) * side_sigma;
    return e;
}

Matrix FactorizedEnsemble::inner_matrix(int i) const {
    GaussianStream g(seed_mix({seed, stream::inner_matrix, static_cast<std::uint64_t>(i)}));
    return gaussian_matrix(p, p, g) * inner_scale;
}

Matrix FactorizedEnsemble::materialize_measurement(int i) const {
    return side_b.transpose() * inner_matrix(i) * side_c;
}

Vector sense_raw(const DenseEnsemble& e, const Matrix& x) {
    if (x.rows() != e.n || x.cols() != e.n)
        throw std::invalid_argument("sense_raw: signal shape mismatch");
    Vector raw(e.m);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < e.m; ++i) raw(i) = e.mats[static_cast<std::size_t>(i)].cwiseProduct(x).sum();
    return raw;
}

namespace {

// Row-major flattening of a p x p matrix; the inner matrices are streamed in
// row-major order, so the dot product below consumes the stream and the
// buffer in lockstep.
std::vector<double> row_major_buffer(const Matrix& w) {
    std::vector<double> buf(static_cast<std::size_t>(w.rows()) * w.cols());
    for (Eigen::Index k = 0; k < w.rows(); ++k)
        for (Eigen::Index l = 0; l < w.cols(); ++l)
            buf[static_cast<std::size_t>(k) * w.cols() + l] = w(k, l);
    return buf;
}

Vector sense_inner_impl(const FactorizedEnsemble& e, const Matrix& w) {
    const std::vector<double> buf = row_major_buffer(w);
    const std::size_t pp = buf.size();
    Vector raw(e.m);
#pragma omp parallel
    {
        std::vector<double> entries(pp);
#pragma omp for schedule(static)
        for (int i = 0; i < e.m; ++i) {
            GaussianStream g(
                seed_mix({e.seed, stream::inner_matrix, static_cast<std::uint64_t>(i)}));
            g.fill_gaussian(entries.data(), pp);
            double acc = 0.0;
            for (std::size_t j = 0; j < pp; ++j) acc += entries[j] * buf[j];
            raw(i) = acc * e.inner_scale;
        }
    }
    return raw;
}

}  // namespace

Vector sense_raw(const FactorizedEnsemble& e, const Matrix& x) {
    if (x.rows() != e.n || x.cols() != e.n)
        throw std::invalid_argument("sense_raw: signal shape mismatch");
    return sense_inner_impl(e, e.side_b * x * e.side_c.transpose());
}

Vector sense_inner_raw(const FactorizedEnsemble& e, const Matrix& w) {
    if (w.rows() != e.p || w.cols() != e.p)
        throw std::invalid_argument("sense_inner_raw: compressed signal shape mismatch");
    return sense_inner_impl(e, w);
}

SignVector quantize(const Vector& raw) {
    SignVector y;
    y.bits.resize(static_cast<std::size_t>(raw.size()));
    for (Eigen::Index i = 0; i < raw.size(); ++i) y.bits[static_cast<std::size_t>(i)] = raw(i) >= 0.0 ? 1 : -1;
    return y;
}

namespace {

// Chunked coefficient-weighted accumulation, sum_i v_i * mat_i. Chunk
// boundaries are fixed so the merge order, and hence the floating-point
// result, does not depend on the thread count.
Matrix accumulate_dense(const DenseEnsemble& e, const Vector& v) {
    const long m = e.m;
    const long chunks = (m + kChunk - 1) / kChunk;
    std::vector<Matrix> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (long c = 0; c < chunks; ++c) {
        Matrix acc = Matrix::Zero(e.n, e.n);
        const long hi = std::min(m, (c + 1) * kChunk);
        for (long i = c * kChunk; i < hi; ++i)
            acc += v(i) * e.mats[static_cast<std::size_t>(i)];
        partial[static_cast<std::size_t>(c)] = std::move(acc);
    }
    Matrix out = Matrix::Zero(e.n, e.n);
    for (long c = 0; c < chunks; ++c) out += partial[static_cast<std::size_t>(c)];
    return out;
}

Matrix accumulate_inner(const FactorizedEnsemble& e, const Vector& v) {
    const long m = e.m;
    const long chunks = (m + kChunk - 1) / kChunk;
    const std::size_t pp = static_cast<std::size_t>(e.p) * e.p;
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel
    {
        std::vector<double> entries(pp);
#pragma omp for schedule(static)
        for (long c = 0; c < chunks; ++c) {
            std::vector<double> acc(pp, 0.0);
            const long hi = std::min(m, (c + 1) * kChunk);
            for (long i = c * kChunk; i < hi; ++i) {
                GaussianStream g(
                    seed_mix({e.seed, stream::inner_matrix, static_cast<std::uint64_t>(i)}));
                g.fill_gaussian(entries.data(), pp);
                const double vi = v(i);
                for (std::size_t j = 0; j < pp; ++j) acc[j] += vi * entries[j];
            }
            partial[static_cast<std::size_t>(c)] = std::move(acc);
        }
    }
    std::vector<double> flat(pp, 0.0);
    for (long c = 0; c < chunks; ++c)
        for (std::size_t j = 0; j < pp; ++j) flat[j] += partial[static_cast<std::size_t>(c)][j];
    Matrix out(e.p, e.p);
    for (int k = 0; k < e.p; ++k)
        for (int l = 0; l < e.p; ++l)
            out(k, l) = flat[static_cast<std::size_t>(k) * e.p + l] * e.inner_scale;
    return out;
}

}  // namespace

Matrix adjoint(const DenseEnsemble& e, const Vector& v) {
    if (v.size() != e.m) throw std::invalid_argument("adjoint: coefficient length mismatch");
    return accumulate_dense(e, v);
}

Matrix adjoint(const FactorizedEnsemble& e, const Vector& v) {
    if (v.size() != e.m) throw std::invalid_argument("adjoint: coefficient length mismatch");
    return accumulate_inner(e, v);
}

SenseBackprojection sense_and_backproject(const FactorizedEnsemble& e, const Matrix& x) {
    if (x.rows() != e.n || x.cols() != e.n)
        throw std::invalid_argument("sense_and_backproject: signal shape mismatch");
    const std::vector<double> buf = row_major_buffer(e.side_b * x * e.side_c.transpose());
    const std::size_t pp = buf.size();
    const long m = e.m;
    const long chunks = (m + kChunk - 1) / kChunk;

    SenseBackprojection out;
    out.raw.resize(m);
    out.signs.bits.resize(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel
    {
        std::vector<double> entries(pp);
#pragma omp for schedule(static)
        for (long c = 0; c < chunks; ++c) {
            std::vector<double> acc(pp, 0.0);
            const long hi = std::min(m, (c + 1) * kChunk);
            for (long i = c * kChunk; i < hi; ++i) {
                GaussianStream g(
                    seed_mix({e.seed, stream::inner_matrix, static_cast<std::uint64_t>(i)}));
                g.fill_gaussian(entries.data(), pp);
                double dot = 0.0;
                for (std::size_t j = 0; j < pp; ++j) dot += entries[j] * buf[j];
                out.raw(i) = dot * e.inner_scale;
                const double sign = out.raw(i) >= 0.0 ? 1.0 : -1.0;
                out.signs.bits[static_cast<std::size_t>(i)] = out.raw(i) >= 0.0 ? 1 : -1;
                for (std::size_t j = 0; j < pp; ++j) acc[j] += sign * entries[j];
            }
            partial[static_cast<std::size_t>(c)] = std::move(acc);
        }
    }

    std::vector<double> flat(pp, 0.0);
    for (long c = 0; c < chunks; ++c)
        for (std::size_t j = 0; j < pp; ++j) flat[j] += partial[static_cast<std::size_t>(c)][j];
    out.back.resize(e.p, e.p);
    for (int k = 0; k < e.p; ++k)
        for (int l = 0; l < e.p; ++l)
            out.back(k, l) = flat[static_cast<std::size_t>(k) * e.p + l] * e.inner_scale;
    return out;
}

}  // namespace bilr
