// Scalar reference implementations. These define the semantics; the SIMD
// variants are tested for equivalence against them.
#include "parepi/kernels.hpp"

#include <cmath>

namespace parepi::kernels {
namespace {

void matvec_scalar(const double* m, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void matvec_t_scalar(const double* m, const double* x, double* y, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m + i * n;
        const double xi = x[i];
        for (std::size_t j = 0; j < n; ++j) y[j] += row[j] * xi;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
    return acc;
}

void hadamard_scalar(const double* a, const double* b, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = a[i] * b[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_scalar(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

namespace detail {

const Ops scalar_ops = {
    matvec_scalar, matvec_t_scalar, dot_scalar,     dot3_scalar,
    hadamard_scalar, axpy_scalar,   max_abs_scalar, max_abs_diff_scalar,
};

}  // namespace detail
}  // namespace parepi::kernels
