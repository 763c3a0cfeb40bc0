// Data-parallel primitives under the numerical core: dense matvec, transposed
// matvec and reductions used by power iteration, the equilibrium fixed-point
// solve, RK4 stepping and the brute-force lattice scan. Every operation has a
// scalar reference implementation and an AVX2+FMA variant; the backend is
// picked once from CPU features and can be forced for equivalence tests.
#pragma once

#include <cstddef>

namespace parepi::kernels {

enum class Backend { Scalar, Avx2 };

// Currently active backend.
Backend active_backend();

// Forces a backend; returns false (and leaves the selection unchanged) when
// the requested backend is not available on this machine.
bool set_backend(Backend b);

bool backend_available(Backend b);

const char* backend_name(Backend b);

// y = M x with M row-major n-by-n.
void matvec(const double* m, const double* x, double* y, std::size_t n);

// y = M^T x with M row-major n-by-n.
void matvec_t(const double* m, const double* x, double* y, std::size_t n);

// sum_i a_i b_i
double dot(const double* a, const double* b, std::size_t n);

// sum_i a_i b_i c_i
double dot3(const double* a, const double* b, const double* c, std::size_t n);

// z_i = a_i b_i
void hadamard(const double* a, const double* b, double* z, std::size_t n);

// y_i += alpha x_i
void axpy(double alpha, const double* x, double* y, std::size_t n);

// max_i |a_i|
double max_abs(const double* a, std::size_t n);

// max_i |a_i - b_i|
double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace detail {

struct Ops {
    void (*matvec)(const double*, const double*, double*, std::size_t);
    void (*matvec_t)(const double*, const double*, double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    void (*hadamard)(const double*, const double*, double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
};

extern const Ops scalar_ops;
// Null function pointers when the build target cannot emit AVX2 code.
extern const Ops avx2_ops;

}  // namespace detail

}  // namespace parepi::kernels
