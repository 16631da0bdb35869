#ifndef BILR_SENSING_HPP
#define BILR_SENSING_HPP

#include <cstdint>
#include <vector>

#include "bilr/matrix_core.hpp"

namespace bilr {

// One-bit measurement record, entries exactly +1 or -1.
struct SignVector {
    std::vector<std::int8_t> bits;

    int m() const { return static_cast<int>(bits.size()); }
    bool operator==(const SignVector&) const = default;
};

int hamming_distance(const SignVector& a, const SignVector& b);

// Dense Gaussian ensemble: m independent n x n matrices, materialized at
// construction. When normalized, entries carry the factor sqrt(pi/2)/m so
// that E ||A(Z)||_1 = ||Z||_F for any fixed Z.
struct DenseEnsemble {
    int n = 0;
    int m = 0;
    bool normalized = true;
    double scale = 1.0;  // sqrt(pi/2)/m if normalized, else 1
    std::uint64_t seed = 0;
    std::vector<Matrix> mats;  // scaled A_i

    const Matrix& matrix(int i) const { return mats[static_cast<std::size_t>(i)]; }
};

DenseEnsemble make_dense_ensemble(int n, int m, std::uint64_t seed, bool normalized = true);

// Factorized ensemble: measurement matrices A_i = B^T A'_i C with inner
// p x p Gaussians A'_i (scaled by sqrt(pi/2)/m) and side matrices B, C with
// iid N(0, 1/p) entries. The inner matrices are regenerated from per-index
// child seeds on every pass rather than stored (p^2 m doubles is prohibitive
// at large m), so the ensemble is fully described by seed and shape.
struct FactorizedEnsemble {
    int n = 0;
    int m = 0;
    int p = 0;
    double inner_scale = 1.0;  // sqrt(pi/2)/m, baked into inner_matrix()
    std::uint64_t seed = 0;
    Matrix side_b;  // p x n
    Matrix side_c;  // p x n

    Matrix inner_matrix(int i) const;  // scaled A'_i

    // B^T A'_i C, for tests and debugging only; never built in the hot path.
    Matrix materialize_measurement(int i) const;
};

FactorizedEnsemble make_factorized_ensemble(int n, int m, int p, std::uint64_t seed);

// Applies the sensing map: component i is <A_i, X>_F. The factorized
// overload evaluates <A'_i, B X C^T>_F, which is the same number.
Vector sense_raw(const DenseEnsemble& e, const Matrix& x);
Vector sense_raw(const FactorizedEnsemble& e, const Matrix& x);

// Applies the inner map alone: component i is <A'_i, W>_F for a p x p input.
Vector sense_inner_raw(const FactorizedEnsemble& e, const Matrix& w);

// Entrywise sign with the convention sgn(0) = +1.
SignVector quantize(const Vector& raw);

// Adjoint map: sum_i v_i A_i (n x n). The factorized overload is the adjoint
// of the inner map alone, sum_i v_i A'_i (p x p).
Matrix adjoint(const DenseEnsemble& e, const Vector& v);
Matrix adjoint(const FactorizedEnsemble& e, const Vector& v);

// Single generation pass over the factorized ensemble producing the raw
// measurements of x, their signs, and the back projection sum_i sgn_i A'_i.
// Bitwise identical to running sense_raw, quantize, adjoint separately; it
// exists because regenerating the inner matrices dominates the cost of a
// recovery trial at large m.
struct SenseBackprojection {
    Vector raw;
    SignVector signs;
    Matrix back;  // p x p
};
SenseBackprojection sense_and_backproject(const FactorizedEnsemble& e, const Matrix& x);

}  // namespace bilr

#endif  // BILR_SENSING_HPP
