// Next-generation matrices and their Perron data: spectral radius, left and
// right eigenvectors, and the exact derivative of the effective reproduction
// number with respect to the vaccination strategy.
#pragma once

#include <vector>

#include "parepi/model.hpp"

namespace parepi {

struct NextGenMatrix {
    int n = 0;
    // m(i, j) = kernel(i, j) * eta_j * weights_j / gamma_j, row-major.
    std::vector<double> m;
    // Carried along for eigenvector normalization.
    std::vector<double> weights;

    double operator()(int i, int j) const { return m[std::size_t(i) * n + j]; }
};

struct EigenPair {
    double rho = 0.0;
    // Right vector normalized to sum_i weights_i right_i = 1 and left vector
    // to sum_i weights_i left_i right_i = 1 whenever those sums are positive;
    // both all-zero when no eigenvector is attainable (e.g. nilpotent m).
    std::vector<double> right;
    std::vector<double> left;
    bool converged = false;
    long iterations = 0;
    double residual = 0.0;
};

NextGenMatrix next_gen_matrix(const PopulationModel& model, const Strategy& eta);

// Perron root by power iteration from the all-ones vector (diagonally shifted
// so periodic irreducible matrices converge too), with a fallback for
// reducible matrices: the radius is then the maximum over strongly connected
// components of the support, each component being irreducible. A nilpotent
// matrix yields rho = 0 with zero vectors. Throws NoConvergence (carrying the
// best estimate) if the tolerance is not met within the budget.
EigenPair spectral_radius(const NextGenMatrix& m, double tol = 1e-12,
                          long max_iter = 100000);

// Spectral radius of a plain nonnegative row-major matrix; same algorithm,
// no eigenvectors. Used for classification and kernel-block radii.
double matrix_spectral_radius(const std::vector<double>& a, int n,
                              double tol = 1e-12, long max_iter = 100000);

// R_e(eta) = rho(next_gen_matrix(model, eta)).
double r_e(const PopulationModel& model, const Strategy& eta);

// d R_e / d eta_j = left^T (dM/d eta_j) right / (left^T right), evaluated with
// the Perron pair of the next-generation matrix. Throws DegenerateEigenvalue
// when left^T right is numerically zero (non-simple or unattained Perron
// root), in which case callers fall back to finite differences.
std::vector<double> r_e_gradient(const PopulationModel& model, const Strategy& eta);

}  // namespace parepi
