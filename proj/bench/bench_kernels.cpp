// Times the parallel kernels against their serial reference implementations
// and reports speedups plus the largest relative deviation between the two.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "bilr/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double rel_dev(const bilr::Matrix& a, const bilr::Matrix& b) {
    const double denom = bilr::frobenius_norm(a);
    return denom == 0.0 ? 0.0 : bilr::frobenius_norm(a - b) / denom;
}

double rel_dev(const bilr::Vector& a, const bilr::Vector& b) {
    const double denom = a.norm();
    return denom == 0.0 ? 0.0 : (a - b).norm() / denom;
}

void report(const char* name, double serial_ms, double parallel_ms, double dev) {
    std::printf("%-36s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   rel.dev %.2e\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, dev);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        const bilr::DenseEnsemble e = bilr::make_dense_ensemble(12, 4000, 7, true);
        const bilr::Matrix x = bilr::generate_bilr(12, 3, 1, 11).dense();
        bilr::Vector raw_par, raw_ser;
        const double ser_ms = time_ms([&] { raw_ser = bilr::ref::sense_raw(e, x); }, 20);
        const double par_ms = time_ms([&] { raw_par = bilr::sense_raw(e, x); }, 20);
        report("dense sense (n=12, m=4000)", ser_ms, par_ms, rel_dev(raw_ser, raw_par));

        const bilr::Vector v = raw_par;
        bilr::Matrix adj_par, adj_ser;
        const double aser_ms = time_ms([&] { adj_ser = bilr::ref::adjoint(e, v); }, 20);
        const double apar_ms = time_ms([&] { adj_par = bilr::adjoint(e, v); }, 20);
        report("dense adjoint (n=12, m=4000)", aser_ms, apar_ms, rel_dev(adj_ser, adj_par));
    }

    {
        const bilr::FactorizedEnsemble e = bilr::make_factorized_ensemble(32, 4000, 160, 7);
        const bilr::Matrix x = bilr::generate_bilr(32, 3, 1, 11).dense();
        bilr::Vector raw_par, raw_ser;
        const double ser_ms = time_ms([&] { raw_ser = bilr::ref::sense_raw(e, x); }, 3);
        const double par_ms = time_ms([&] { raw_par = bilr::sense_raw(e, x); }, 3);
        report("factorized sense (p=160, m=4000)", ser_ms, par_ms, rel_dev(raw_ser, raw_par));

        const bilr::Vector v = raw_par;
        bilr::Matrix adj_par, adj_ser;
        const double aser_ms = time_ms([&] { adj_ser = bilr::ref::adjoint(e, v); }, 3);
        const double apar_ms = time_ms([&] { adj_par = bilr::adjoint(e, v); }, 3);
        report("factorized adjoint (p=160, m=4000)", aser_ms, apar_ms, rel_dev(adj_ser, adj_par));

        bilr::SenseBackprojection fused;
        const double fused_ms = time_ms([&] { fused = bilr::sense_and_backproject(e, x); }, 3);
        std::printf("%-36s one pass %9.2f ms (vs %.2f ms for the two passes above)\n",
                    "fused sense+backproject", fused_ms, par_ms + apar_ms);
    }

    {
        bilr::GaussianStream g(3);
        const bilr::Matrix m = bilr::gaussian_matrix(10, 10, g);
        bilr::BilrProjection par, ser;
        const double ser_ms = time_ms([&] { ser = bilr::ref::project_bilr_exhaustive(m, 3, 2); }, 3);
        const double par_ms = time_ms([&] { par = bilr::project_bilr_exhaustive(m, 3, 2); }, 3);
        report("exhaustive projection (n=10, s=3)", ser_ms, par_ms,
               std::abs(ser.residual - par.residual) / ser.residual);
    }

    return 0;
}
