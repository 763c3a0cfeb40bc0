// Vaccinated SIS dynamics: vector field, maximal equilibrium by monotone
// fixed-point iteration from the all-infected state, endemic infected
// fraction, and fixed-step RK4 integration.
#include "parepi/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "parepi/errors.hpp"
#include "parepi/kernels.hpp"

namespace parepi {

namespace {

// Per-column factor eta_j * weights_j of the unscaled infection operator
// T_i(g) = sum_j kernel(i,j) eta_j weights_j g_j.
std::vector<double> column_mass(const PopulationModel& model, const Strategy& eta) {
    if (eta.size() != model.n)
        throw ValidationError("strategy length disagrees with model");
    std::vector<double> cm(model.n);
    for (int j = 0; j < model.n; ++j) {
        double e = eta[j];
        if (e < -1e-12 || e > 1.0 + 1e-12)
            throw ValidationError("strategy entries must lie in [0,1]");
        cm[j] = std::min(1.0, std::max(0.0, e)) * model.weights[j];
    }
    return cm;
}

void infection_pressure(const PopulationModel& model, const std::vector<double>& cm,
                        const std::vector<double>& g, std::vector<double>& scratch,
                        std::vector<double>& t) {
    kernels::hadamard(cm.data(), g.data(), scratch.data(), std::size_t(model.n));
    kernels::matvec(model.kernel.data(), scratch.data(), t.data(), std::size_t(model.n));
}

}  // namespace

std::vector<double> vector_field(const PopulationModel& model, const Strategy& eta,
                                 const std::vector<double>& g) {
    model.validate();
    if (int(g.size()) != model.n)
        throw ValidationError("state length disagrees with model");
    std::vector<double> cm = column_mass(model, eta);
    std::vector<double> scratch(model.n), t(model.n), f(model.n);
    infection_pressure(model, cm, g, scratch, t);
    for (int i = 0; i < model.n; ++i)
        f[i] = (1.0 - g[i]) * t[i] - model.gamma[i] * g[i];
    return f;
}

EquilibriumResult maximal_equilibrium(const PopulationModel& model, const Strategy& eta,
                                      double tol, long max_iter) {
    model.validate();
    std::vector<double> cm = column_mass(model, eta);
    const int n = model.n;
    EquilibriumResult res;
    res.g.assign(n, 1.0);
    std::vector<double> scratch(n), t(n), next(n);
    for (long it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        infection_pressure(model, cm, res.g, scratch, t);
        for (int i = 0; i < n; ++i) {
            double v = t[i] / (model.gamma[i] + t[i]);
            // Monotone decrease holds exactly in real arithmetic; guard the
            // invariant against roundoff.
            next[i] = std::min(v, res.g[i]);
        }
        const double diff = kernels::max_abs_diff(next.data(), res.g.data(), std::size_t(n));
        res.g.swap(next);
        if (diff <= tol) {
            infection_pressure(model, cm, res.g, scratch, t);
            double fres = 0.0;
            for (int i = 0; i < n; ++i)
                fres = std::max(fres,
                                std::fabs((1.0 - res.g[i]) * t[i] - model.gamma[i] * res.g[i]));
            res.residual = fres;
            if (fres <= tol) {
                res.converged = true;
                return res;
            }
        }
    }
    throw NoConvergence("equilibrium iteration did not meet tolerance",
                        res.g.empty() ? 0.0 : res.g[0], res.residual, res.iterations);
}

double infected_fraction(const PopulationModel& model, const Strategy& eta, double tol) {
    EquilibriumResult res = maximal_equilibrium(model, eta, tol);
    double total = 0.0;
    for (int i = 0; i < model.n; ++i)
        total += model.weights[i] * res.g[i] * std::min(1.0, std::max(0.0, eta[i]));
    return total;
}

Trajectory integrate_sis(const PopulationModel& model, const Strategy& eta,
                         const std::vector<double>& u0, double t_max, double dt) {
    model.validate();
    const int n = model.n;
    if (int(u0.size()) != n) throw ValidationError("initial state length disagrees with model");
    for (double u : u0)
        if (u < 0.0 || u > 1.0) throw ValidationError("initial state must lie in [0,1]");
    if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");

    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = model.gamma[i];
        for (int j = 0; j < n; ++j) row += model.k(i, j) * model.weights[j];
        bound = std::max(bound, row);
    }
    const double dt_max = 0.1 / bound;
    if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12))
        throw StepSizeError("dt must lie in (0, 0.1/max_i(gamma_i + sum_j k_ij w_j)]");

    std::vector<double> cm = column_mass(model, eta);
    std::vector<double> scratch(n), t(n);
    auto field = [&](const std::vector<double>& u, std::vector<double>& out) {
        infection_pressure(model, cm, u, scratch, t);
        for (int i = 0; i < n; ++i)
            out[i] = (1.0 - u[i]) * t[i] - model.gamma[i] * u[i];
    };

    const long steps = long(std::ceil(t_max / dt - 1e-9));
    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    std::vector<double> u = u0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    traj.times.push_back(0.0);
    traj.states.push_back(u);
    for (long s = 1; s <= steps; ++s) {
        field(u, k1);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
        field(tmp, k2);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
        field(tmp, k3);
        for (int i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
        field(tmp, k4);
        for (int i = 0; i < n; ++i) {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            u[i] = std::min(1.0, std::max(0.0, u[i]));
        }
        traj.times.push_back(double(s) * dt);
        traj.states.push_back(u);
    }
    return traj;
}

std::vector<int> equilibrium_support(const PopulationModel& model, const Strategy& eta,
                                     double tol) {
    EquilibriumResult res = maximal_equilibrium(model, eta);
    std::vector<int> support;
    for (int i = 0; i < model.n; ++i)
        if (res.g[i] > tol) support.push_back(i);
    return support;
}

}  // namespace parepi
