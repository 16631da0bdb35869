#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "bilr/diagnostics.hpp"
#include "bilr/operators.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bilr;

namespace {

// Orthonormal-column p x n matrix from the QR of a Gaussian draw.
Matrix orthonormal_columns(int p, int n, std::uint64_t seed) {
    GaussianStream g(seed);
    const Matrix a = gaussian_matrix(p, n, g);
    return Eigen::HouseholderQR<Matrix>(a).householderQ() * Matrix::Identity(p, n);
}

Matrix row_sparse_gaussian(int n, int k, int s, GaussianStream& g) {
    Matrix z = Matrix::Zero(n, k);
    for (int idx : sample_support(n, s, g))
        for (int j = 0; j < k; ++j) z(idx, j) = g.gaussian();
    return z;
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("bilr audit ratios are positive and the report is self-consistent") {
    const DenseEnsemble e = make_dense_ensemble(8, 500, 71, true);
    const RipReport rep = rip_audit_bilr(e, 2, 1, 50, 72);
    CHECK(rep.samples == 50);
    CHECK(rep.property_kind == "l1-bilr");
    CHECK(rep.ratio_min > 0.0);
    CHECK(rep.ratio_min <= rep.ratio_mean);
    CHECK(rep.ratio_mean <= rep.ratio_max);
    CHECK(rep.implied_delta ==
          doctest::Approx(std::max(1.0 - rep.ratio_min, rep.ratio_max - 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rip_audit_bilr(make_dense_ensemble(8, 10, 1, false), 2, 1, 5, 1),
                    std::invalid_argument);
}

TEST_CASE("bilr audit concentrates at the scaling regime") {
    // Threshold frozen from the pilot recorded in tests/fixtures/calibration.md
    // (observed delta ~0.04 at m=4000).
    const DenseEnsemble e = make_dense_ensemble(12, 4000, 73, true);
    const RipReport rep = rip_audit_bilr(e, 3, 1, 500, 74);
    CHECK(rep.implied_delta < 0.5);
}

TEST_CASE("bilr audit distortion shrinks with m") {
    int improved = 0;
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
        const DenseEnsemble big = make_dense_ensemble(12, 4000, 80 + rep, true);
        const DenseEnsemble small = make_dense_ensemble(12, 100, 90 + rep, true);
        const double d_big = rip_audit_bilr(big, 3, 1, 200, 81 + rep).implied_delta;
        const double d_small = rip_audit_bilr(small, 3, 1, 200, 91 + rep).implied_delta;
        if (d_big < d_small) ++improved;
    }
    CHECK(improved == 3);
}

TEST_CASE("rank audit of the inner map") {
    const FactorizedEnsemble e = make_factorized_ensemble(8, 3000, 24, 75);
    const RipReport rep = rip_audit_rank(e, 2, 200, 76);
    CHECK(rep.property_kind == "l1-rank");
    CHECK(rep.implied_delta < 0.5);
}

TEST_CASE("l2 ratio on coordinate vectors is the column norm") {
    GaussianStream g(77);
    const Matrix d = gaussian_matrix(30, 10, g) / std::sqrt(30.0);
    for (int j = 0; j < 10; ++j) {
        Vector ej = Vector::Zero(10);
        ej(j) = 1.0;
        CHECK(l2_ratio(d, ej) == doctest::Approx(d.col(j).squaredNorm()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(l2_ratio(d, Vector::Zero(10)), std::invalid_argument);
}

TEST_CASE("sparse audit of an orthonormal-column matrix has ratio one") {
    const Matrix q = orthonormal_columns(40, 12, 78);
    const RipReport rep = rip_audit_sparse(q, 3, 100, 79);
    CHECK(rep.ratio_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.ratio_max == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.implied_delta <= 1e-10);
    CHECK(rep.property_kind == "l2-sparse-vector");
}

TEST_CASE("sparse audit concentrates for Gaussian matrices") {
    // Threshold frozen from the pilot in tests/fixtures/calibration.md
    // (observed delta ~0.22 at p=400).
    GaussianStream g(80);
    const Matrix d = gaussian_matrix(400, 64, g) / 20.0;  // variance 1/p with p = 400
    const RipReport rep = rip_audit_sparse(d, 3, 500, 81);
    CHECK(rep.implied_delta < 0.4);
}

TEST_CASE("report serialization uses the declared field names") {
    const DenseEnsemble e = make_dense_ensemble(8, 100, 82, true);
    const RipReport rep = rip_audit_bilr(e, 2, 1, 20, 83);
    const auto j = nlohmann::json::parse(to_json(rep));
    CHECK(j.at("samples").get<long>() == rep.samples);
    CHECK(j.at("ratio_min").get<double>() == rep.ratio_min);
    CHECK(j.at("ratio_max").get<double>() == rep.ratio_max);
    CHECK(j.at("ratio_mean").get<double>() == rep.ratio_mean);
    CHECK(j.at("implied_delta").get<double>() == rep.implied_delta);
    CHECK(j.at("property_kind").get<std::string>() == "l1-bilr");
}

TEST_CASE("polar check vanishes for orthonormal columns and links to the l2 ratio") {
    const Matrix q = orthonormal_columns(40, 12, 84);
    GaussianStream g(85);
    const Matrix z = row_sparse_gaussian(12, 5, 3, g);
    const Matrix zp = row_sparse_gaussian(12, 5, 3, g);
    CHECK(polar_rip_check(q, z, zp) <= 1e-10);

    // with Z = Z' the value is |1 - l2-type ratio| on matrices
    const Matrix d = gaussian_matrix(40, 12, g) / std::sqrt(40.0);
    const double val = polar_rip_check(d, z, z);
    const double expect =
        std::abs(z.squaredNorm() - (d * z).squaredNorm()) / z.squaredNorm();
    CHECK(val == doctest::Approx(expect).epsilon(1e-10));

    CHECK_THROWS_AS(polar_rip_check(d, Matrix::Zero(12, 5), zp), std::invalid_argument);
}

TEST_CASE("polar check is mostly dominated by the audited delta") {
    GaussianStream g(86);
    const Matrix d = gaussian_matrix(400, 64, g) / 20.0;
    const double delta = rip_audit_sparse(d, 3, 500, 87).implied_delta;
    int below = 0;
    const int draws = 200;
    for (int rep = 0; rep < draws; ++rep) {
        const Matrix z = row_sparse_gaussian(64, 4, 3, g);
        const Matrix zp = row_sparse_gaussian(64, 4, 3, g);
        if (polar_rip_check(d, z, zp) <= delta) ++below;
    }
    CHECK(below >= draws * 9 / 10);
}

TEST_CASE("inexact threshold bound: exact recovery under orthonormal measurements") {
    const Matrix q = orthonormal_columns(50, 16, 88);
    GaussianStream g(89);
    const Matrix z = row_sparse_gaussian(16, 6, 3, g);
    const auto [lhs, rhs] = inexact_threshold_check(q, z, Matrix::Zero(50, 6), 3, 0.0);
    CHECK(lhs <= 1e-10);
    CHECK(rhs == 0.0);
}

TEST_CASE("inexact threshold bound: zero signal case is non-expansive") {
    GaussianStream g(90);
    const Matrix d = gaussian_matrix(50, 16, g) / std::sqrt(50.0);
    const Matrix e = gaussian_matrix(50, 6, g);
    const Matrix z = Matrix::Zero(16, 6);
    const auto [lhs, rhs] = inexact_threshold_check(d, z, e, 3, 0.0);
    CHECK(lhs <= frobenius_norm(d.transpose() * e));
    CHECK(rhs == doctest::Approx(2.0 * std::sqrt(2.0) * frobenius_norm(e)));
}

TEST_CASE("inexact threshold bound holds on random instances") {
    GaussianStream g(91);
    const int p = 200, n = 32, s = 3;
    const Matrix d = gaussian_matrix(p, n, g) / std::sqrt(static_cast<double>(p));
    const double delta = rip_audit_sparse(d, s, 500, 92).implied_delta;
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix z = row_sparse_gaussian(n, 8, s, g);
        const double noise = (rep % 3 == 0) ? 0.0 : (rep % 3 == 1 ? 0.1 : 1.0);
        const Matrix e = noise * gaussian_matrix(p, 8, g);
        const auto [lhs, rhs] = inexact_threshold_check(d, z, e, s, delta);
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("local isometry statistic on identical and orthogonal pairs") {
    const DenseEnsemble e = make_dense_ensemble(8, 2000, 93, true);
    Matrix x = Matrix::Zero(8, 8);
    x(0, 0) = 1.0;
    const LocalIsometryStat same = local_isometry_stat(x, x, e);
    CHECK(same.hamming_frac == 0.0);
    CHECK(same.angular == 0.0);
    CHECK(same.gap == 0.0);

    Matrix xp = Matrix::Zero(8, 8);
    xp(1, 1) = 1.0;
    double mean = 0.0;
    const int reps = 200;
    const int m = 500;
    for (int rep = 0; rep < reps; ++rep) {
        const DenseEnsemble fresh = make_dense_ensemble(8, m, 1000 + rep, true);
        mean += local_isometry_stat(x, xp, fresh).hamming_frac;
    }
    mean /= reps;
    // orthant probability of independent signs: arccos(0)/pi = 1/2
    CHECK(std::abs(mean - 0.5) <= 5.0 / std::sqrt(static_cast<double>(m)));

    CHECK_THROWS_AS(local_isometry_stat(Matrix(2.0 * x), xp, e), std::invalid_argument);
}

TEST_CASE("local isometry statistic estimates the angle") {
    // pair at a known angle theta: hamming fraction concentrates at theta/pi
    const int n = 6, m = 1000, reps = 200;
    Matrix x = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
    x(0, 0) = 1.0;
    v(1, 1) = 1.0;
    const double theta = 1.1;
    const Matrix xp = std::cos(theta) * x + std::sin(theta) * v;
    double mean = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const DenseEnsemble fresh = make_dense_ensemble(n, m, 5000 + rep, true);
        mean += local_isometry_stat(x, xp, fresh).hamming_frac;
    }
    mean /= reps;
    const double q = theta / M_PI;
    const double se = std::sqrt(q * (1.0 - q) / (reps * m));
    CHECK(std::abs(mean - q) <= 3.0 * se);
}

TEST_CASE("entropy bound closed form against an independent evaluation") {
    // 2s ln(en/s) + r(2s+1) ln(9/eta) at (4, 2, 1, 0.9): 4 ln(2e) + 5 ln(10)
    const double independent = 4.0 * std::log(2.0 * std::exp(1.0)) + 5.0 * std::log(10.0);
    CHECK(std::abs(entropy_bound(4, 2, 1, 0.9) - independent) <= 1e-12);
    CHECK(entropy_bound(4, 2, 1, 0.9) == doctest::Approx(18.2855).epsilon(1e-4));
}

TEST_CASE("entropy bound limits and domain") {
    // eta -> 9 kills the covering term
    const double near9 = entropy_bound(8, 3, 2, 9.0 - 1e-12);
    CHECK(near9 == doctest::Approx(6.0 * (1.0 + std::log(8.0 / 3.0))).epsilon(1e-9));
    // s = n: first term is 2n
    const double full = entropy_bound(5, 5, 2, 1.0);
    CHECK(full == doctest::Approx(10.0 + 2.0 * 11.0 * std::log(9.0)).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_bound(4, 2, 3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(entropy_bound(4, 5, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(entropy_bound(4, 2, 1, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(entropy_bound(4, 2, 1, 0.0), std::invalid_argument);
}

TEST_CASE("entropy bound monotonicity on grids") {
    for (int n = 4; n <= 10; n += 2)
        for (int s = 2; s <= 4; ++s)
            for (int r = 1; r <= s; ++r) {
                CHECK(entropy_bound(n, s, r, 0.5) >= entropy_bound(n, s, r, 0.9));
                CHECK(entropy_bound(n + 1, s, r, 0.5) >= entropy_bound(n, s, r, 0.5));
                if (s + 1 <= n) CHECK(entropy_bound(n, s + 1, r, 0.5) >= entropy_bound(n, s, r, 0.5));
                if (r + 1 <= s) CHECK(entropy_bound(n, s, r + 1, 0.5) >= entropy_bound(n, s, r, 0.5));
            }
}

TEST_CASE("consistency probe returns a feasible pair") {
    const DenseEnsemble e = make_dense_ensemble(6, 300, 94, true);
    const ConsistencyProbe probe = consistency_width_probe(6, 2, 1, e, 120, 95);
    CHECK(probe.hamming == 0);
    CHECK(probe.frobenius_gap >= 0.0);
    CHECK(probe.angular_gap >= 0.0);
    CHECK(probe.angular_gap <= 1.0);
    CHECK(std::abs(frobenius_norm(probe.first.dense()) - 1.0) <= 1e-9);
    CHECK(std::abs(frobenius_norm(probe.second.dense()) - 1.0) <= 1e-9);
    CHECK(in_bilr_set(probe.first.dense(), 2, 1));
    CHECK(in_bilr_set(probe.second.dense(), 2, 1));
    // members really are consistent under this ensemble
    const SignVector ya = quantize(sense_raw(e, probe.first.dense()));
    const SignVector yb = quantize(sense_raw(e, probe.second.dense()));
    CHECK(hamming_distance(ya, yb) == 0);
}

TEST_CASE("consistency probe with a unit budget returns the trivial pair") {
    const DenseEnsemble e = make_dense_ensemble(6, 100, 101, true);
    const ConsistencyProbe probe = consistency_width_probe(6, 2, 1, e, 1, 102);
    CHECK(probe.hamming == 0);
    CHECK(probe.frobenius_gap == 0.0);
    CHECK(probe.angular_gap == 0.0);
}

TEST_CASE("consistency probe is deterministic and finds nontrivial pairs") {
    const DenseEnsemble e = make_dense_ensemble(6, 250, 96, true);
    const ConsistencyProbe a = consistency_width_probe(6, 2, 1, e, 300, 97);
    const ConsistencyProbe b = consistency_width_probe(6, 2, 1, e, 300, 97);
    CHECK(a.frobenius_gap == b.frobenius_gap);
    CHECK(a.frobenius_gap > 0.0);  // at m=250 the climb finds a consistent pair
}

TEST_CASE("minimax error and consistency width bracket each other on a finite sample") {
    // On any finite sample, the first-consistent-sample recovery map realizes
    // E <= G <= 2E between the worst recovery error E and the worst
    // consistent-pair gap G. Clustered samples guarantee collisions.
    const int n = 6, s = 2, r = 1, m = 150;
    const DenseEnsemble e = make_dense_ensemble(n, m, 98, true);
    std::vector<Matrix> samples;
    GaussianStream g(99);
    for (int base = 0; base < 12; ++base) {
        const BilrMatrix x = generate_bilr(n, s, r, 300 + base);
        samples.push_back(x.dense());
        for (int dup = 0; dup < 3; ++dup) {
            Matrix perturbed = x.dense() + 1e-3 * gaussian_matrix(n, n, g);
            BilrMatrix proj = project_bilr_exhaustive(perturbed, s, r).projection;
            Matrix dense = proj.dense();
            dense /= frobenius_norm(dense);
            samples.push_back(dense);
        }
    }
    std::vector<SignVector> signs;
    for (const Matrix& x : samples) signs.push_back(quantize(sense_raw(e, x)));

    // worst recovery error of the first-consistent-sample map
    double worst_error = 0.0;
    bool any_collision = false;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        std::size_t first = j;
        for (std::size_t l = 0; l < samples.size(); ++l)
            if (signs[l] == signs[j]) {
                first = l;
                break;
            }
        if (first != j) any_collision = true;
        worst_error = std::max(worst_error, frobenius_norm(samples[j] - samples[first]));
    }
    // worst consistent-pair gap
    double worst_gap = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j)
        for (std::size_t l = j + 1; l < samples.size(); ++l)
            if (signs[j] == signs[l])
                worst_gap = std::max(worst_gap, frobenius_norm(samples[j] - samples[l]));

    CHECK(any_collision);
    CHECK(worst_error <= worst_gap + 1e-12);
    CHECK(worst_gap <= 2.0 * worst_error + 1e-12);
}

TEST_SUITE_END();
