#ifndef BILR_DIAGNOSTICS_HPP
#define BILR_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>

#include "bilr/sensing.hpp"

namespace bilr {

// Empirical distortion statistics from a randomized restricted-isometry
// audit. Ratios are measured norm over true norm; implied_delta is the
// largest observed deviation from 1 and therefore a lower bound on the true
// restricted isometry constant of the audited map.
struct RipReport {
    long samples = 0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double ratio_mean = 0.0;
    double implied_delta = 0.0;
    std::string property_kind;  // "l1-bilr" | "l1-rank" | "l2-sparse-vector"
};

// JSON text with field names exactly as in RipReport.
std::string to_json(const RipReport& report);

// l1 RIP of a normalized dense ensemble over random unit members of the
// bisparse low-rank set: ratio_t = ||A(Z_t)||_1 / ||Z_t||_F.
RipReport rip_audit_bilr(const DenseEnsemble& e, int s, int r, int trials, std::uint64_t seed);

// l1 RIP of the inner map of a factorized ensemble over random unit rank-r
// p x p matrices.
RipReport rip_audit_rank(const FactorizedEnsemble& e, int r, int trials, std::uint64_t seed);

// Standard l2 RIP of a p x n matrix over random unit 2s-sparse vectors:
// ratio_t = ||D z_t||_2^2 / ||z_t||_2^2.
RipReport rip_audit_sparse(const Matrix& d, int s, int trials, std::uint64_t seed);

// ||D z||_2^2 / ||z||_2^2 for one vector; the quantity the sparse audit samples.
double l2_ratio(const Matrix& d, const Vector& z);

// |<(I - D^T D) Z, Z'>_F| / (||Z||_F ||Z'||_F). Meaningful when the combined
// row support of Z and Z' has size at most 2s for the s the caller audited.
// Throws std::invalid_argument on zero input.
double polar_rip_check(const Matrix& d, const Matrix& z, const Matrix& zp);

struct InexactThresholdBound {
    double lhs = 0.0;  // ||Z - H_row_s(D^T (D Z + E))||_F
    double rhs = 0.0;  // 2 delta_hat ||Z||_F + 2 sqrt(2) ||E||_F
};

// Evaluates both sides of the row-thresholding error bound for an
// s-row-sparse Z seen through inexact measurements D Z + E, with delta_hat
// taken from a matched sparse audit of D.
InexactThresholdBound inexact_threshold_check(const Matrix& d, const Matrix& z, const Matrix& e,
                                              int s, double delta_hat);

struct LocalIsometryStat {
    double hamming_frac = 0.0;  // normalized Hamming distance of the sign vectors
    double angular = 0.0;       // arccos <X, X'>_F / pi
    double gap = 0.0;           // |hamming_frac - angular|
};

// Compares the one-bit Hamming distance of a unit pair against the angular
// distance it estimates under Gaussian sensing.
LocalIsometryStat local_isometry_stat(const Matrix& x, const Matrix& xp, const DenseEnsemble& e);

// Closed-form Kolmogorov entropy bound for the unit-sphere slice of the
// bisparse low-rank set: 2s ln(en/s) + r(2s+1) ln(9/eta).
// Requires 1 <= r <= s <= n and 0 < eta < 9.
double entropy_bound(int n, int s, int r, double eta);

// The farthest pair of set members with identical sign vectors found by
// randomized search; a lower bound witness for the consistency width of the
// given ensemble.
struct ConsistencyProbe {
    BilrMatrix first;
    BilrMatrix second;
    int hamming = 0;            // always 0 for the reported pair
    double frobenius_gap = 0.0;
    double angular_gap = 0.0;   // arccos <X, X'>_F / pi
};

// Randomized search: fresh random pairs interleaved with hill climbs that
// perturb one member, project back onto the set, renormalize, and accept
// only consistent moves that increase the gap. Step starts at 0.3, halves on
// rejection, and the climb stops at 1e-4. search_budget counts one-bit map
// evaluations. Deterministic given the seed; always returns a feasible pair
// (in the worst case a duplicated single member with gap zero).
ConsistencyProbe consistency_width_probe(int n, int s, int r, const DenseEnsemble& e,
                                         int search_budget, std::uint64_t seed);

}  // namespace bilr

#endif  // BILR_DIAGNOSTICS_HPP
