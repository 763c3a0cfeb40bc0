// Shared test fixtures and independent oracles: model builders used across
// the suite, a spectral radius computed by normalized repeated squaring, and
// plain finite differences. These deliberately avoid the library's own
// iterative algorithms so agreement is meaningful.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "parepi/model.hpp"
#include "parepi/rng.hpp"

namespace testsup {

inline parepi::PopulationModel homog() {
    parepi::PopulationModel m;
    m.n = 1;
    m.weights = {1.0};
    m.gamma = {1.0};
    m.kernel = {2.0};
    return m;
}

inline parepi::PopulationModel bipartite() {
    parepi::PopulationModel m;
    m.n = 2;
    m.weights = {0.5, 0.5};
    m.gamma = {1.0, 1.0};
    m.kernel = {0.0, 4.0, 4.0, 0.0};
    return m;
}

// Group 0 sustains itself and spills into group 1; group 1 infects nobody.
inline parepi::PopulationModel monatomic() {
    parepi::PopulationModel m;
    m.n = 2;
    m.weights = {0.5, 0.5};
    m.gamma = {1.0, 1.0};
    m.kernel = {2.0, 0.0, 1.0, 0.0};
    return m;
}

// Same atom but no spillover: the kernel vanishes outside the atom block.
inline parepi::PopulationModel quasi_irreducible() {
    parepi::PopulationModel m;
    m.n = 2;
    m.weights = {0.5, 0.5};
    m.gamma = {1.0, 1.0};
    m.kernel = {2.0, 0.0, 0.0, 0.0};
    return m;
}

// Two disconnected self-sustaining groups: no unique atom.
inline parepi::PopulationModel two_atoms() {
    parepi::PopulationModel m;
    m.n = 2;
    m.weights = {0.5, 0.5};
    m.gamma = {1.0, 1.0};
    m.kernel = {2.0, 0.0, 0.0, 3.0};
    return m;
}

// Supercritical group 0 feeding a dead group 1: equilibrium support test.
inline parepi::PopulationModel spillover() {
    parepi::PopulationModel m;
    m.n = 2;
    m.weights = {0.5, 0.5};
    m.gamma = {1.0, 1.0};
    m.kernel = {4.0, 0.0, 2.0, 0.0};
    return m;
}

// Six fully-connected groups with geometric weights; beta calibrated so the
// basic reproduction number is 2.
inline parepi::PopulationModel multipartite6() {
    parepi::PopulationModel m;
    m.n = 6;
    const double beta = 2.9017252041145634;
    m.weights.resize(6);
    m.gamma.assign(6, 1.0);
    m.kernel.assign(36, 0.0);
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
        m.weights[i] = std::pow(2.0, -(i + 1));
        s += m.weights[i];
    }
    for (int i = 0; i < 6; ++i) m.weights[i] /= s;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) m.kernel[i * 6 + j] = beta;
    return m;
}

inline parepi::PopulationModel affine_bipartite() {
    parepi::PopulationModel m = bipartite();
    m.cost_density = std::vector<double>{0.5, 1.5};
    return m;
}

inline parepi::PopulationModel random_model(parepi::Rng& rng, int n, double density,
                                            bool ensure_cycle) {
    parepi::PopulationModel m;
    m.n = n;
    m.weights.resize(n);
    m.gamma.resize(n);
    m.kernel.assign(std::size_t(n) * n, 0.0);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        m.weights[i] = 0.2 + rng.next_unit();
        sum += m.weights[i];
    }
    for (int i = 0; i < n; ++i) m.weights[i] /= sum;
    for (int i = 0; i < n; ++i) m.gamma[i] = 0.5 + 1.5 * rng.next_unit();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.next_unit() < density)
                m.kernel[std::size_t(i) * n + j] = 0.1 + 3.0 * rng.next_unit();
    if (ensure_cycle)
        for (int i = 0; i < n; ++i)
            m.kernel[std::size_t((i + 1) % n) * n + i] += 0.5 + rng.next_unit();
    return m;
}

// Spectral radius by Gelfand's formula: rho = lim ||A^m||^(1/m), evaluated by
// repeatedly squaring a normalized copy of the matrix. After k squarings the
// exponent is 2^k, so the estimate converges far below double precision.
inline double gelfand_rho(const std::vector<double>& a, int n) {
    std::vector<double> b = a, c(a.size());
    long double logscale = 0.0L;
    for (int squarings = 0; squarings < 60; ++squarings) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += std::fabs(b[std::size_t(i) * n + j]);
            norm = std::max(norm, row);
        }
        if (norm == 0.0) return 0.0;
        logscale = 2.0L * (logscale + std::log((long double)norm));
        for (double& x : b) x /= norm;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += b[std::size_t(i) * n + k] * b[std::size_t(k) * n + j];
                c[std::size_t(i) * n + j] = acc;
            }
        b.swap(c);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::fabs(b[std::size_t(i) * n + j]);
        norm = std::max(norm, row);
    }
    long double total = logscale + std::log((long double)std::max(norm, 1e-300));
    const long double exponent = std::pow(2.0L, 60);
    return double(std::exp(total / exponent));
}

// Central finite difference of a scalar function of a strategy, respecting
// the [0, 1] box.
template <typename F>
std::vector<double> fd_gradient(F&& f, const parepi::Strategy& s, double h = 1e-6) {
    std::vector<double> grad(s.eta.size(), 0.0);
    parepi::Strategy probe = s;
    for (std::size_t j = 0; j < s.eta.size(); ++j) {
        double hi = std::min(1.0, s.eta[j] + h);
        double lo = std::max(0.0, s.eta[j] - h);
        if (hi - lo < 1e-14) continue;
        probe.eta[j] = hi;
        double fh = f(probe);
        probe.eta[j] = lo;
        double fl = f(probe);
        probe.eta[j] = s.eta[j];
        grad[j] = (fh - fl) / (hi - lo);
    }
    return grad;
}

}  // namespace testsup
