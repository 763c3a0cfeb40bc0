// Vaccinated SIS dynamics on the finite metapopulation: the vector field, the
// maximal endemic equilibrium, the equilibrium infected fraction, and a
// fixed-step RK4 integrator used to cross-check the fixed point.
#pragma once

#include <vector>

#include "parepi/model.hpp"

namespace parepi {

struct EquilibriumResult {
    std::vector<double> g;   // maximal equilibrium, componentwise in [0,1]
    long iterations = 0;
    double residual = 0.0;   // sup norm of the vector field at g
    bool converged = false;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // one row per recorded time
};

// F_i(g) = (1 - g_i) sum_j kernel(i,j) eta_j weights_j g_j - gamma_i g_i.
std::vector<double> vector_field(const PopulationModel& model, const Strategy& eta,
                                 const std::vector<double>& g);

// Largest fixed point of F, reached as the limit of the monotone iteration
// g <- T(g) / (gamma + T(g)) started from the all-ones state; iterates are
// non-increasing. Stops when both the iterate difference and the vector-field
// residual fall below tol; throws NoConvergence past max_iter.
EquilibriumResult maximal_equilibrium(const PopulationModel& model, const Strategy& eta,
                                      double tol = 1e-10, long max_iter = 1000000);

// I(eta) = sum_i weights_i g_i eta_i at the maximal equilibrium: the endemic
// fraction of infected individuals among the unvaccinated.
double infected_fraction(const PopulationModel& model, const Strategy& eta,
                         double tol = 1e-10);

// Fixed-step RK4 integration of u' = F(u) from u0, recording every step.
// Requires dt <= 0.1 / max_i(gamma_i + sum_j kernel(i,j) weights_j); larger
// steps raise StepSizeError. States are clamped to [0,1] each step (a no-op
// up to roundoff under the step bound).
Trajectory integrate_sis(const PopulationModel& model, const Strategy& eta,
                         const std::vector<double>& u0, double t_max, double dt);

// Indices with g_i > tol at the maximal equilibrium.
std::vector<int> equilibrium_support(const PopulationModel& model, const Strategy& eta,
                                     double tol = 1e-8);

}  // namespace parepi
