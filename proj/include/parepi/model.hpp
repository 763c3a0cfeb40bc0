// Finite metapopulation description: group weights, recovery rates and the
// transmission kernel, together with vaccination strategies, admissible-set
// constraints, cost models and the projections the solvers rely on.
//
// Conventions: kernel(i, j) is the rate at which group j infects group i;
// eta_i is the fraction of group i left UNvaccinated (1 = do nothing,
// 0 = vaccinate everyone in the group).
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace parepi {

struct PopulationModel {
    int n = 0;
    std::vector<double> weights;  // positive, sums to 1
    std::vector<double> gamma;    // positive recovery rates
    std::vector<double> kernel;   // row-major n-by-n, nonnegative
    // Per-group cost density for affine cost; when present it is positive and
    // normalized so that sum_i weights_i * cost_density_i = 1 (hence the
    // maximal cost is 1 for both cost models).
    std::optional<std::vector<double>> cost_density;

    double k(int i, int j) const { return kernel[std::size_t(i) * n + j]; }

    // Throws ValidationError on any violated structural invariant.
    void validate() const;
};

struct Strategy {
    std::vector<double> eta;  // componentwise in [0,1]

    Strategy() = default;
    explicit Strategy(std::vector<double> e) : eta(std::move(e)) {}

    static Strategy ones(int n) { return Strategy(std::vector<double>(n, 1.0)); }
    static Strategy zeros(int n) { return Strategy(std::vector<double>(n, 0.0)); }

    int size() const { return int(eta.size()); }
    double operator[](int i) const { return eta[i]; }
    double& operator[](int i) { return eta[i]; }
};

// Admissible strategy sets. All three contain the constant strategies, in
// particular all-ones and all-zeros.
struct ConstraintSet {
    enum class Kind { Box, Oscillation, Ordered };

    Kind kind = Kind::Box;
    double delta = 1.0;       // Oscillation: max(eta) - min(eta) <= delta
    std::vector<int> order;   // Ordered: eta[order[0]] <= ... <= eta[order[n-1]]

    static ConstraintSet box();
    static ConstraintSet oscillation(double delta);       // delta in (0, 1]
    static ConstraintSet ordered(std::vector<int> order); // order a permutation

    bool admits(const Strategy& s, double tol = 1e-12) const;
};

enum class CostKind { Uniform, Affine };

// Reads a model from a JSON file with fields "weights", "gamma", "kernel"
// (row-major array of rows) and optional "cost_density". Weights (and the
// cost normalization) off by at most 1e-9 are silently renormalized; larger
// deviations raise ValidationError. Malformed JSON raises ParseError.
PopulationModel load_model(const std::string& path);
PopulationModel parse_model(const std::string& json_text);
void save_model(const PopulationModel& model, const std::string& path);

// Midpoint-rule discretization of a continuous model on [0,1]: n equal-weight
// groups at x_i = (i - 1/2)/n with gamma_i = gamma_fn(x_i) and
// kernel(i, j) = k_fn(x_i, x_j).
PopulationModel discretize_kernel(const std::function<double(double, double)>& k_fn,
                                  const std::function<double(double)>& gamma_fn,
                                  int n);

// C(eta) = sum_i weights_i (1 - eta_i) for Uniform, with the extra
// cost_density factor for Affine. Affine requires cost_density.
double cost(const PopulationModel& model, CostKind kind, const Strategy& s);

// Effective per-group density: all-ones for Uniform, cost_density for Affine.
std::vector<double> cost_density(const PopulationModel& model, CostKind kind);

// Nearest admissible strategy in the weights-weighted Euclidean metric.
// Box: componentwise clamp. Ordered: weighted isotonic regression (pool
// adjacent violators) followed by a clamp. Oscillation: clamp to the best
// window [m, m+delta], with the anchor m found by an exact one-dimensional
// convex search.
Strategy project(const PopulationModel& model, const std::vector<double>& eta_raw,
                 const ConstraintSet& cs);

// Rewrites an affine-cost model as a uniform-cost one with reweighted groups
// and rescaled kernel columns; (cost, R_e) pairs are preserved exactly.
// Requires cost_density with entries >= 1e-9.
PopulationModel to_uniform_cost_model(const PopulationModel& model);

}  // namespace parepi
