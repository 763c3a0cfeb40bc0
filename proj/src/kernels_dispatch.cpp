// Runtime backend selection: AVX2 when both the binary carries the variant
// and the CPU reports the feature, scalar otherwise.
#include "parepi/kernels.hpp"

#include <atomic>

namespace parepi::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool avx2_usable() { return detail::avx2_ops.matvec != nullptr && cpu_has_avx2(); }

const detail::Ops* initial_ops() {
    return avx2_usable() ? &detail::avx2_ops : &detail::scalar_ops;
}

std::atomic<const detail::Ops*> g_ops{initial_ops()};

}  // namespace

Backend active_backend() {
    return g_ops.load(std::memory_order_relaxed) == &detail::avx2_ops ? Backend::Avx2
                                                                      : Backend::Scalar;
}

bool backend_available(Backend b) {
    return b == Backend::Scalar || avx2_usable();
}

bool set_backend(Backend b) {
    if (!backend_available(b)) return false;
    g_ops.store(b == Backend::Avx2 ? &detail::avx2_ops : &detail::scalar_ops,
                std::memory_order_relaxed);
    return true;
}

const char* backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void matvec(const double* m, const double* x, double* y, std::size_t n) {
    g_ops.load(std::memory_order_relaxed)->matvec(m, x, y, n);
}

void matvec_t(const double* m, const double* x, double* y, std::size_t n) {
    g_ops.load(std::memory_order_relaxed)->matvec_t(m, x, y, n);
}

double dot(const double* a, const double* b, std::size_t n) {
    return g_ops.load(std::memory_order_relaxed)->dot(a, b, n);
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    return g_ops.load(std::memory_order_relaxed)->dot3(a, b, c, n);
}

void hadamard(const double* a, const double* b, double* z, std::size_t n) {
    g_ops.load(std::memory_order_relaxed)->hadamard(a, b, z, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    g_ops.load(std::memory_order_relaxed)->axpy(alpha, x, y, n);
}

double max_abs(const double* a, std::size_t n) {
    return g_ops.load(std::memory_order_relaxed)->max_abs(a, n);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return g_ops.load(std::memory_order_relaxed)->max_abs_diff(a, b, n);
}

}  // namespace parepi::kernels
