#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtz/qtensor.hpp"

namespace qtz {

/// max(||AB - I||_F, ||BA - I||_F) with the quaternion Frobenius norm.
double inv_err(const QMatrix& a, const QMatrix& b);

/// Structure-accelerated inverse of a z-block circulant matrix: fold the
/// payload back to its generator, invert every hat slice, rebuild. The input
/// payload is structure-validated first.
BCircZ bcircz_inv(const BCircZ& m, double tol_pivot = 1e-13, double tol_struct = 1e-12);

struct TikhonovProblem {
    BCircZ B;       // n x n with n = m*q
    QMatrix b;      // n x 1
    double lambda = 0.5;
};

/// Solves (B^H B + lambda^2 I) x = B^H b slice-wise in the hat domain; every
/// slice system is Hermitian positive definite for lambda > 0.
QMatrix tikhonov_structured(const TikhonovProblem& p);
/// Dense reference: x = (B^H B + lambda^2 I)^-1 B^H b on the payload.
QMatrix tikhonov_dense(const TikhonovProblem& p);

struct InvReport {
    int n = 0;             // payload side length m*q
    std::string method;    // structured | dense | tikhonov_structured | tikhonov_dense
    double seconds = 0.0;  // best over trials
    double mean_seconds = 0.0;
    double err = 0.0;
};

/// Times structured vs dense inversion and both Tikhonov paths on seeded
/// uniform-random generators, one warm-up excluded. Writes size,method,time_s,err
/// rows to csv_path when non-empty. compute_inv_err controls the (expensive)
/// err column of the two inversion methods.
std::vector<InvReport> bench(const std::vector<std::pair<int, int>>& sizes, int trials,
                             uint64_t seed, bool compute_inv_err, double lambda,
                             const std::string& csv_path);

/// Relative normal-equation residual ||(B^H B + l^2 I)x - B^H b|| / ||B^H b||.
double tikhonov_residual(const TikhonovProblem& p, const QMatrix& x);

}  // namespace qtz
