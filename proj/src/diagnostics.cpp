#include "bilr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bilr/operators.hpp"
#include "json.hpp"

namespace bilr {

namespace {

RipReport summarize(const std::vector<double>& ratios, const std::string& kind) {
    RipReport rep;
    rep.samples = static_cast<long>(ratios.size());
    rep.property_kind = kind;
    rep.ratio_min = ratios[0];
    rep.ratio_max = ratios[0];
    double sum = 0.0;
    for (double v : ratios) {
        rep.ratio_min = std::min(rep.ratio_min, v);
        rep.ratio_max = std::max(rep.ratio_max, v);
        sum += v;
    }
    rep.ratio_mean = sum / static_cast<double>(ratios.size());
    rep.implied_delta = std::max(1.0 - rep.ratio_min, rep.ratio_max - 1.0);
    return rep;
}

double angular_distance(const Matrix& x, const Matrix& xp) {
    const double inner = frobenius_inner(x, xp);
    return std::acos(std::clamp(inner, -1.0, 1.0)) / M_PI;
}

}  // namespace

std::string to_json(const RipReport& report) {
    nlohmann::json j;
    j["samples"] = report.samples;
    j["ratio_min"] = report.ratio_min;
    j["ratio_max"] = report.ratio_max;
    j["ratio_mean"] = report.ratio_mean;
    j["implied_delta"] = report.implied_delta;
    j["property_kind"] = report.property_kind;
    return j.dump(2);
}

RipReport rip_audit_bilr(const DenseEnsemble& e, int s, int r, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("rip_audit_bilr: trials must be >= 1");
    if (!e.normalized) throw std::invalid_argument("rip_audit_bilr: ensemble must be normalized");
    std::vector<double> ratios(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        const BilrMatrix z =
            generate_bilr(e.n, s, r, seed_mix({seed, stream::audit, static_cast<std::uint64_t>(t)}));
        const Matrix dense = z.dense();
        ratios[static_cast<std::size_t>(t)] =
            sense_raw(e, dense).lpNorm<1>() / frobenius_norm(dense);
    }
    return summarize(ratios, "l1-bilr");
}

RipReport rip_audit_rank(const FactorizedEnsemble& e, int r, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("rip_audit_rank: trials must be >= 1");
    if (r < 1 || r > e.p) throw std::invalid_argument("rip_audit_rank: requires 1 <= r <= p");
    std::vector<double> ratios(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        GaussianStream g(seed_mix({seed, stream::audit, static_cast<std::uint64_t>(t)}));
        const Matrix left = gaussian_matrix(e.p, r, g);
        const Matrix right = gaussian_matrix(e.p, r, g);
        Matrix z = left * right.transpose();
        z /= frobenius_norm(z);
        ratios[static_cast<std::size_t>(t)] =
            sense_inner_raw(e, z).lpNorm<1>() / frobenius_norm(z);
    }
    return summarize(ratios, "l1-rank");
}

double l2_ratio(const Matrix& d, const Vector& z) {
    const double denom = z.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("l2_ratio: zero vector");
    return (d * z).squaredNorm() / denom;
}

RipReport rip_audit_sparse(const Matrix& d, int s, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("rip_audit_sparse: trials must be >= 1");
    const int n = static_cast<int>(d.cols());
    const int k = std::min(2 * s, n);
    if (s < 1) throw std::invalid_argument("rip_audit_sparse: s must be >= 1");
    std::vector<double> ratios(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) {
        GaussianStream g(seed_mix({seed, stream::audit, static_cast<std::uint64_t>(t)}));
        const std::vector<int> support = sample_support(n, k, g);
        Vector z = Vector::Zero(n);
        for (int idx : support) z(idx) = g.gaussian();
        z /= z.norm();
        ratios[static_cast<std::size_t>(t)] = l2_ratio(d, z);
    }
    return summarize(ratios, "l2-sparse-vector");
}

double polar_rip_check(const Matrix& d, const Matrix& z, const Matrix& zp) {
    if (z.rows() != d.cols() || zp.rows() != d.cols() || z.cols() != zp.cols())
        throw std::invalid_argument("polar_rip_check: shape mismatch");
    const double nz = frobenius_norm(z);
    const double nzp = frobenius_norm(zp);
    if (nz == 0.0 || nzp == 0.0) throw std::invalid_argument("polar_rip_check: zero input");
    const Matrix residual = z - d.transpose() * (d * z);
    return std::abs(frobenius_inner(residual, zp)) / (nz * nzp);
}

InexactThresholdBound inexact_threshold_check(const Matrix& d, const Matrix& z, const Matrix& e,
                                              int s, double delta_hat) {
    if (z.rows() != d.cols()) throw std::invalid_argument("inexact_threshold_check: Z rows must match D cols");
    if (e.rows() != d.rows() || e.cols() != z.cols())
        throw std::invalid_argument("inexact_threshold_check: E must match D Z");
    const Matrix y = d * z + e;
    InexactThresholdBound out;
    out.lhs = frobenius_norm(z - hard_threshold_rows(d.transpose() * y, s));
    out.rhs = 2.0 * delta_hat * frobenius_norm(z) + 2.0 * std::sqrt(2.0) * frobenius_norm(e);
    return out;
}

LocalIsometryStat local_isometry_stat(const Matrix& x, const Matrix& xp, const DenseEnsemble& e) {
    if (std::abs(frobenius_norm(x) - 1.0) > 1e-8 || std::abs(frobenius_norm(xp) - 1.0) > 1e-8)
        throw std::invalid_argument("local_isometry_stat: inputs must have unit Frobenius norm");
    const SignVector ya = quantize(sense_raw(e, x));
    const SignVector yb = quantize(sense_raw(e, xp));
    LocalIsometryStat out;
    out.hamming_frac = static_cast<double>(hamming_distance(ya, yb)) / static_cast<double>(e.m);
    out.angular = angular_distance(x, xp);
    out.gap = std::abs(out.hamming_frac - out.angular);
    return out;
}

double entropy_bound(int n, int s, int r, double eta) {
    if (r < 1 || r > s || s > n) throw std::invalid_argument("entropy_bound: requires 1 <= r <= s <= n");
    if (!(eta > 0.0) || !(eta < 9.0)) throw std::invalid_argument("entropy_bound: requires 0 < eta < 9");
    const double support_term = 2.0 * s * (1.0 + std::log(static_cast<double>(n) / s));
    const double covering_term = r * (2.0 * s + 1.0) * std::log(9.0 / eta);
    return support_term + covering_term;
}

namespace {

struct ProbePair {
    BilrMatrix a;
    BilrMatrix b;
    SignVector ya;
    SignVector yb;
    double gap = 0.0;
};

}  // namespace

ConsistencyProbe consistency_width_probe(int n, int s, int r, const DenseEnsemble& e,
                                         int search_budget, std::uint64_t seed) {
    if (e.n != n) throw std::invalid_argument("consistency_width_probe: ensemble dimension mismatch");
    if (search_budget < 1) throw std::invalid_argument("consistency_width_probe: budget must be >= 1");
    if (n > 14 || s > 4)
        throw std::invalid_argument(
            "consistency_width_probe: dimension exceeds the exhaustive projection ceiling");

    GaussianStream perturb(seed_mix({seed, stream::probe}));
    std::uint64_t draw = 0;
    int evals = 0;
    const auto next_member = [&]() {
        return generate_bilr(n, s, r, seed_mix({seed, stream::probe, ++draw}));
    };
    const auto sign_of = [&](const Matrix& x) {
        ++evals;
        return quantize(sense_raw(e, x));
    };

    ProbePair best;
    best.a = next_member();
    best.b = best.a;
    best.ya = sign_of(best.a.dense());
    best.yb = best.ya;
    best.gap = 0.0;

    while (evals < search_budget) {
        // Fresh random pair.
        BilrMatrix xa = next_member();
        const SignVector ya = sign_of(xa.dense());
        if (evals >= search_budget) break;
        BilrMatrix xb = next_member();
        const SignVector yb = sign_of(xb.dense());
        if (ya == yb) {
            const double gap = frobenius_norm(xa.dense() - xb.dense());
            if (gap > best.gap) best = {std::move(xa), std::move(xb), ya, yb, gap};
        }

        // Hill climb from the incumbent, perturbing members alternately.
        double step = 0.3;
        int parity = 0;
        while (step >= 1e-4 && evals < search_budget) {
            const BilrMatrix& moving = parity == 0 ? best.b : best.a;
            const BilrMatrix& fixed = parity == 0 ? best.a : best.b;
            const SignVector& fixed_sign = parity == 0 ? best.ya : best.yb;

            Matrix cand_dense = moving.dense() + step * gaussian_matrix(n, n, perturb);
            BilrMatrix cand = project_bilr_exhaustive(cand_dense, s, r).projection;
            const double norm = frobenius_norm(cand.dense());
            if (norm == 0.0) {
                step *= 0.5;
                parity ^= 1;
                continue;
            }
            cand.left_factor /= norm;
            const SignVector ycand = sign_of(cand.dense());
            const double gap = frobenius_norm(cand.dense() - fixed.dense());
            if (ycand == fixed_sign && gap > best.gap) {
                if (parity == 0) {
                    best.b = std::move(cand);
                    best.yb = ycand;
                } else {
                    best.a = std::move(cand);
                    best.ya = ycand;
                }
                best.gap = gap;
            } else {
                step *= 0.5;
            }
            parity ^= 1;
        }
    }

    ConsistencyProbe out;
    out.first = best.a;
    out.second = best.b;
    out.hamming = hamming_distance(best.ya, best.yb);
    out.frobenius_gap = best.gap;
    out.angular_gap = angular_distance(out.first.dense(), out.second.dense());
    return out;
}

}  // namespace bilr
