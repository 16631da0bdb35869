#ifndef BILR_REFERENCE_HPP
#define BILR_REFERENCE_HPP

#include "bilr/operators.hpp"
#include "bilr/sensing.hpp"

// Serial reference implementations of the parallel kernels, written as plain
// loops with no chunking. Tests compare the production kernels against these;
// the benchmark target reports the speedup over them. They are not used on
// any hot path.
namespace bilr::ref {

Vector sense_raw(const DenseEnsemble& e, const Matrix& x);
Vector sense_raw(const FactorizedEnsemble& e, const Matrix& x);

Matrix adjoint(const DenseEnsemble& e, const Vector& v);
Matrix adjoint(const FactorizedEnsemble& e, const Vector& v);

BilrProjection project_bilr_exhaustive(const Matrix& m, int s, int r);

}  // namespace bilr::ref

#endif  // BILR_REFERENCE_HPP
