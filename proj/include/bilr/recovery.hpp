#ifndef BILR_RECOVERY_HPP
#define BILR_RECOVERY_HPP

#include <string>

#include "bilr/operators.hpp"
#include "bilr/sensing.hpp"

namespace bilr {

struct RecoveryMetadata {
    std::string scheme;             // "pbp" | "multistep"
    int s = 0;
    int r = 0;
    std::string projection;         // pbp only: "exhaustive" | "heuristic"
    double back_norm = 0.0;         // Frobenius norm of the back projection
    double projection_residual = 0.0;  // pbp only
    double rank_stage_norm = 0.0;      // multistep: ||H_rank(A'* y)||_F
    double row_stage_norm = 0.0;       // multistep: row-thresholded stage norm
    double estimate_norm = 0.0;
    // Hamming distance between y and the re-quantized measurements of the
    // estimate, as a fraction of m. Logged, never enforced.
    double consistency_hamming_frac = 0.0;
};

struct RecoveryOutput {
    Matrix estimate;       // n x n, exactly the densified structured view
    BilrMatrix structured;
    RecoveryMetadata meta;
};

// Projected back projection: project the adjoint applied to the sign vector
// onto the signal set. Uses the exhaustive projection oracle when the
// dimension is inside its ceiling; with allow_heuristic the alternating
// heuristic is used beyond it (flagged in metadata).
RecoveryOutput recover_pbp(const SignVector& y, const DenseEnsemble& e, int s, int r,
                           bool allow_heuristic = false, int heuristic_sweeps = 8);

// Multistep factorized recovery: rank-truncate the inner back projection,
// lift through B, row-threshold, push through C, column-threshold. The output
// always has at most s nonzero rows and columns and rank at most r.
RecoveryOutput recover_multistep(const SignVector& y, const FactorizedEnsemble& e, int s, int r);

// Same recovery with the inner back projection sum_i y_i A'_i supplied by the
// caller, for pipelines that already produced it in the sensing pass (see
// sense_and_backproject). Must equal adjoint(e, y) or the result is
// meaningless.
RecoveryOutput recover_multistep(const SignVector& y, const Matrix& back,
                                 const FactorizedEnsemble& e, int s, int r);

// Copy of the output scaled to unit Frobenius norm. Throws
// std::runtime_error on a zero estimate.
RecoveryOutput rescale_to_unit(const RecoveryOutput& out);

}  // namespace bilr

#endif  // BILR_RECOVERY_HPP
