// Bi-objective cost/loss analysis of vaccination strategies: the four value
// functions (best and worst loss at capped or floored cost), Pareto and
// anti-Pareto frontier extraction with the achieving strategies, feasible
// region sampling, and a brute-force lattice oracle for small models.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "parepi/model.hpp"

namespace parepi {

enum class LossKind { Re, I };
enum class SolveStatus { Converged, OracleVerified, BestEffort };
enum class Direction { Pareto, AntiPareto };

const char* to_string(SolveStatus s);

// A vaccination optimization problem. Construction validates the loss
// preconditions: loss Re requires R_0 > 0 and loss I requires R_0 > 1.
struct Problem {
    PopulationModel model;
    LossKind loss_kind = LossKind::Re;
    CostKind cost_kind = CostKind::Uniform;
    ConstraintSet constraints;

    Problem(PopulationModel model, LossKind loss, CostKind cost, ConstraintSet cs);

    double r0() const { return r0_; }

private:
    double r0_ = 0.0;
};

struct SolverOpts {
    double loss_tol = 1e-6;    // slack when inverting the monotone value functions
    double oracle_tol = 1e-4;  // agreement margin for oracle verification
    double fp_tol = 1e-10;     // equilibrium fixed-point tolerance (loss I)
    double cost_tol = 5e-8;    // bisection bracket width on costs
    int random_starts = 8;
    int max_iterations = 300;  // projected-descent iterations per start
    int oracle_steps = 50;     // lattice for n <= 3 verification; 0 disables
    int threads = 0;           // 0 = PAREPI_THREADS env var, then hardware
    std::uint64_t seed = 0;
    // Precomputed lattice reused across grid points; built on demand when
    // absent and verification is enabled.
    std::shared_ptr<const struct GridOracle> oracle;
};

struct FrontierPoint {
    double cost = 0.0;
    double loss = 0.0;
    Strategy eta;
    SolveStatus status = SolveStatus::Converged;
};

struct FrontierCurve {
    Direction direction = Direction::Pareto;
    std::vector<FrontierPoint> points;  // sorted by cost
    // For loss I anti-Pareto curves: estimated discontinuity cost; the curve
    // spans [C^*(loss_max), c0) plus the isolated point (c_max, 0).
    std::optional<double> c0;
};

struct Outcome {
    double cost = 0.0;
    double loss = 0.0;
};

// Exhaustive scan of the admissible strategies on the lattice {0, 1/steps,
// ..., 1}^n, with exact envelope queries by prefix scans over the sorted
// outcomes. Memory scales with the number of admissible cells.
struct GridOracle {
    int steps = 0;
    int n = 0;
    std::vector<Outcome> outcomes;        // sorted by (cost, loss)
    std::vector<std::uint64_t> cell_ids;  // lattice index of each outcome

    Strategy strategy(std::size_t idx) const;  // decodes cell_ids[idx]

    double lambda_star(double c) const;  // min loss over cells with cost <= c
    double lambda_sup(double c) const;   // max loss over cells with cost >= c
    double cost_star(double ell) const;  // min cost over cells with loss <= ell
    double cost_sup(double ell) const;   // max cost over cells with loss >= ell

    // Smallest achieved lattice cost >= c (largest cost when none).
    double nearest_cost_at_or_above(double c) const;
    // Largest achieved lattice cost <= c (smallest cost when none).
    double nearest_cost_at_or_below(double c) const;

    std::vector<double> prefix_min_loss;  // over outcomes sorted by cost
    std::vector<double> suffix_max_loss;
    std::vector<std::size_t> by_loss;     // outcome indices sorted by (loss, cost)
    std::vector<double> prefix_min_cost;  // over by_loss
    std::vector<double> suffix_max_cost;
};

// L(eta): R_e or the equilibrium infected fraction, per the problem.
double loss(const Problem& p, const Strategy& eta, double fp_tol = 1e-10);

// lambda_*(c): best achievable loss under cost cap c, by multi-start
// projected gradient descent (uniform-at-cost start, greedy-by-gradient
// vertex strategies, seeded random starts). Status OracleVerified when n <= 3
// and the lattice oracle agrees within opts.oracle_tol.
FrontierPoint min_loss_at_cost(const Problem& p, double c, const SolverOpts& opts = {});

// C_*(ell): least cost achieving loss <= ell, by bisection on the
// non-increasing map c -> lambda_*(c).
FrontierPoint min_cost_at_loss(const Problem& p, double ell, const SolverOpts& opts = {});

// lambda^*(c): worst loss under cost floor c (anti-Pareto side), seeded with
// the atom indicator strategy for monatomic kernels (loss Re) and with the
// equilibrium support indicator (loss I).
FrontierPoint max_loss_at_cost(const Problem& p, double c, const SolverOpts& opts = {});

// C^*(ell): largest cost keeping loss >= ell.
FrontierPoint max_cost_at_loss(const Problem& p, double ell, const SolverOpts& opts = {});

// Uniform cost grid on [0, C_*(0)]; losses are non-increasing along the grid
// (violations are flagged BestEffort).
FrontierCurve pareto_frontier(const Problem& p, int grid, const SolverOpts& opts = {});

// Worst-case frontier. Requires an irreducible, quasi-irreducible or
// monatomic kernel (NotMonatomic otherwise). For loss Re the curve spans
// [C^*(loss_max), c_max]; for loss I it spans [C^*(loss_max), c0) with the
// isolated point (c_max, 0) appended and c0 estimated by bisection.
FrontierCurve anti_pareto_frontier(const Problem& p, int grid, const SolverOpts& opts = {});

// Brute force over the admissible lattice; n <= 4 and (steps+1)^n <= 1e7
// (TooLarge otherwise).
GridOracle grid_oracle(const Problem& p, int steps);

// Deterministic seeded strategies mixed with segment samples t*eta and
// t*eta + (1-t)*1; every outcome lies between the envelopes lambda_* and
// lambda^* (up to tolerance), making the feasible region band-shaped.
std::vector<Outcome> feasible_region_sample(const Problem& p, int samples,
                                            std::uint64_t seed);

// (C_*(1) for loss Re, C_*(0) for loss I): both equal the critical
// vaccination cost; returns (0, 0) for subcritical models.
std::pair<double, double> critical_cost_consistency(const PopulationModel& model,
                                                    CostKind cost,
                                                    const SolverOpts& opts = {});

}  // namespace parepi
