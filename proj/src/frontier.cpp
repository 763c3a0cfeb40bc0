// Cost-loss frontier solvers. Minimum loss at a budget is found by projected
// gradient descent from several deterministic and seeded starting points;
// maximum loss uses the same machinery with the budget inequality reversed.
// Cost-for-loss curves come from bisecting those solvers, and a lattice
// enumeration oracle cross-checks small instances.
#include "parepi/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "parepi/connectivity.hpp"
#include "parepi/equilibrium.hpp"
#include "parepi/errors.hpp"
#include "parepi/kernels.hpp"
#include "parepi/rng.hpp"
#include "parepi/spectral.hpp"
#include "parallel.hpp"

namespace parepi {

namespace {

using kernels::dot;
using kernels::max_abs;
using kernels::max_abs_diff;

struct Env {
    const Problem* p;
    const PopulationModel* model;
    int n;
    std::vector<double> dens;   // effective cost density for p->cost_kind
    double dsum;                // sum_i w_i dens_i, ~1 after normalization
    std::vector<double> mass;   // w_i * dens_i per group
};

Env make_env(const Problem& p) {
    Env env;
    env.p = &p;
    env.model = &p.model;
    env.n = p.model.n;
    env.dens = cost_density(p.model, p.cost_kind);
    env.mass.resize(env.n);
    env.dsum = 0.0;
    for (int i = 0; i < env.n; ++i) {
        env.mass[i] = p.model.weights[i] * env.dens[i];
        env.dsum += env.mass[i];
    }
    return env;
}

// Unvaccinated mass sum_i w_i d_i eta_i; cost is dsum minus this.
double budget_mass(const Env& env, const Strategy& s) {
    return dot(env.mass.data(), s.eta.data(), size_t(env.n));
}

double eval_loss(const Env& env, const Strategy& s, double fp_tol) {
    if (env.p->loss_kind == LossKind::Re) return r_e(*env.model, s);
    return infected_fraction(*env.model, s, fp_tol);
}

// Loss evaluations inside line searches use a relaxed fixed-point tolerance;
// reported losses are always recomputed at the caller's tolerance.
double search_tol(const Env& env, const SolverOpts& opts) {
    if (env.p->loss_kind == LossKind::Re) return opts.fp_tol;
    return std::max(opts.fp_tol, 1e-8);
}

std::vector<double> fd_gradient(const Env& env, const Strategy& s, double tol) {
    std::vector<double> grad(env.n, 0.0);
    const double h = 1e-6;
    Strategy probe = s;
    for (int j = 0; j < env.n; ++j) {
        double hi = std::min(1.0, s.eta[j] + h);
        double lo = std::max(0.0, s.eta[j] - h);
        if (hi - lo < 1e-14) continue;
        probe.eta[j] = hi;
        double fh = eval_loss(env, probe, tol);
        probe.eta[j] = lo;
        double fl = eval_loss(env, probe, tol);
        probe.eta[j] = s.eta[j];
        grad[j] = (fh - fl) / (hi - lo);
    }
    return grad;
}

std::vector<double> loss_gradient(const Env& env, const Strategy& s, double tol) {
    if (env.p->loss_kind == LossKind::Re) {
        try {
            return r_e_gradient(*env.model, s);
        } catch (const Error&) {
            // fall through to finite differences near degenerate spectra
        }
    }
    return fd_gradient(env, s, tol);
}

// Project onto the constraint set intersected with {cost <= c}: slide the raw
// point along the cost density until the constrained projection has enough
// unvaccinated mass. All three projections move componentwise monotonically
// with the shift, so bisection on the shift is sound.
Strategy project_budget_min(const Env& env, const std::vector<double>& y, double c) {
    const double target = std::min(env.dsum - c, env.dsum);
    auto shifted = [&](double t) {
        std::vector<double> z(y);
        for (int i = 0; i < env.n; ++i) z[i] += t * env.dens[i];
        return project(*env.model, z, env.p->constraints);
    };
    Strategy base = project(*env.model, std::vector<double>(y), env.p->constraints);
    if (budget_mass(env, base) >= target - 1e-14) return base;
    double lo = 0.0, hi = 1.0;
    while (budget_mass(env, shifted(hi)) < target && hi < 1e6) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (budget_mass(env, shifted(mid)) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return shifted(hi);
}

// Mirror image: constraint set intersected with {cost >= c}.
Strategy project_budget_max(const Env& env, const std::vector<double>& y, double c) {
    const double target = std::max(env.dsum - c, 0.0);
    auto shifted = [&](double t) {
        std::vector<double> z(y);
        for (int i = 0; i < env.n; ++i) z[i] -= t * env.dens[i];
        return project(*env.model, z, env.p->constraints);
    };
    Strategy base = project(*env.model, std::vector<double>(y), env.p->constraints);
    if (budget_mass(env, base) <= target + 1e-14) return base;
    double lo = 0.0, hi = 1.0;
    while (budget_mass(env, shifted(hi)) > target && hi < 1e6) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (budget_mass(env, shifted(mid)) <= target)
            hi = mid;
        else
            lo = mid;
    }
    return shifted(hi);
}

Strategy project_budget(const Env& env, const std::vector<double>& y, double c, bool maximize) {
    return maximize ? project_budget_max(env, y, c) : project_budget_min(env, y, c);
}

struct Candidate {
    Strategy eta;
    double cost = 0.0;
    double loss = 0.0;
    bool clean = false;
};

Candidate descend(const Env& env, Strategy eta, double c, bool maximize, const SolverOpts& opts) {
    const double tol = search_tol(env, opts);
    eta = project_budget(env, eta.eta, c, maximize);
    double loss = eval_loss(env, eta, tol);
    double step = 0.25;
    bool clean = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (!maximize && loss <= 1e-14) {
            clean = true;
            break;
        }
        std::vector<double> grad = loss_gradient(env, eta, tol);
        double gmax = max_abs(grad.data(), size_t(env.n));
        if (gmax <= 1e-15) {
            clean = true;
            break;
        }
        std::vector<double> dir(env.n);
        double sign = maximize ? 1.0 : -1.0;
        for (int j = 0; j < env.n; ++j) dir[j] = sign * grad[j] / gmax;
        bool accepted = false;
        double t = step;
        for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> raw(env.n);
            for (int j = 0; j < env.n; ++j) raw[j] = eta.eta[j] + t * dir[j];
            Strategy cand = project_budget(env, raw, c, maximize);
            double move = max_abs_diff(cand.eta.data(), eta.eta.data(), size_t(env.n));
            if (move <= 1e-13) {
                t *= 0.5;
                continue;
            }
            double cl;
            try {
                cl = eval_loss(env, cand, tol);
            } catch (const Error&) {
                t *= 0.5;
                continue;
            }
            bool better = maximize ? (cl > loss + 1e-14) : (cl < loss - 1e-14);
            if (better) {
                eta = std::move(cand);
                loss = cl;
                step = std::min(0.5, t * 1.6);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            clean = true;
            break;
        }
    }
    Candidate out;
    out.loss = eval_loss(env, eta, opts.fp_tol);
    out.cost = cost(*env.model, env.p->cost_kind, eta);
    out.eta = std::move(eta);
    out.clean = clean;
    return out;
}

// Order groups by descending key, index ascending on ties.
std::vector<int> order_by_key(const std::vector<double>& key, bool descending) {
    std::vector<int> idx(key.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return descending ? key[a] > key[b] : key[a] < key[b];
    });
    return idx;
}

// Vaccinate whole groups in the given order until the budget c is spent, with
// one fractional group at the end.
Strategy greedy_vertex(const Env& env, const std::vector<int>& order, double c) {
    Strategy s = Strategy::ones(env.n);
    double remaining = c;
    for (int j : order) {
        double unit = env.mass[j];
        if (unit <= 1e-300) continue;
        if (unit <= remaining + 1e-15) {
            s.eta[j] = 0.0;
            remaining -= unit;
        } else {
            s.eta[j] = 1.0 - remaining / unit;
            remaining = 0.0;
            break;
        }
    }
    return s;
}

void push_start(std::vector<Strategy>& starts, Strategy s) {
    for (const Strategy& seen : starts)
        if (max_abs_diff(seen.eta.data(), s.eta.data(), s.eta.size()) <= 1e-13) return;
    starts.push_back(std::move(s));
}

Strategy uniform_at_cost(const Env& env, double c) {
    double u = 1.0 - c / env.dsum;
    u = std::min(1.0, std::max(0.0, u));
    Strategy s = Strategy::ones(env.n);
    for (int j = 0; j < env.n; ++j) s.eta[j] = u;
    return s;
}

std::vector<Strategy> min_starts(const Env& env, double c, const SolverOpts& opts) {
    std::vector<Strategy> starts;
    push_start(starts, project_budget_min(env, uniform_at_cost(env, c).eta, c));
    try {
        std::vector<double> g0 = loss_gradient(env, Strategy::ones(env.n), search_tol(env, opts));
        std::vector<double> per_mass(env.n);
        for (int j = 0; j < env.n; ++j)
            per_mass[j] = env.mass[j] > 1e-300 ? g0[j] / env.mass[j] : 0.0;
        for (const std::vector<int>& ord :
             {order_by_key(per_mass, true), order_by_key(g0, true)}) {
            Strategy v = greedy_vertex(env, ord, c);
            push_start(starts, project_budget_min(env, v.eta, c));
        }
    } catch (const Error&) {
        // skip gradient-guided vertices if the base gradient is unavailable
    }
    Rng rng(Rng::mix(opts.seed, 0x5eedULL));
    for (int r = 0; r < opts.random_starts; ++r) {
        std::vector<double> y(env.n);
        for (int j = 0; j < env.n; ++j) y[j] = rng.next_unit();
        push_start(starts, project_budget_min(env, y, c));
    }
    return starts;
}

std::vector<Strategy> max_starts(const Env& env, double c, const SolverOpts& opts) {
    std::vector<Strategy> starts;
    push_start(starts, project_budget_max(env, uniform_at_cost(env, c).eta, c));
    // Concentrating the surviving budget on the self-sustaining part keeps the
    // loss high; seed with that indicator scaled down to cost c.
    try {
        Strategy seed;
        if (env.p->loss_kind == LossKind::Re) {
            seed = atom_indicator_strategy(*env.model);
        } else {
            std::vector<int> sup = equilibrium_support(*env.model, Strategy::ones(env.n));
            seed = Strategy::zeros(env.n);
            for (int idx : sup) seed.eta[idx] = 1.0;
        }
        double sc = budget_mass(env, seed);
        double want = env.dsum - c;
        if (sc > want + 1e-15 && sc > 0.0) {
            double t = want / sc;
            for (int j = 0; j < env.n; ++j) seed.eta[j] *= t;
        }
        push_start(starts, project_budget_max(env, seed.eta, c));
    } catch (const Error&) {
        // no usable indicator for this kernel class; other starts remain
    }
    try {
        std::vector<double> g0 = loss_gradient(env, Strategy::ones(env.n), search_tol(env, opts));
        std::vector<double> per_mass(env.n);
        for (int j = 0; j < env.n; ++j)
            per_mass[j] = env.mass[j] > 1e-300 ? g0[j] / env.mass[j] : 0.0;
        for (const std::vector<int>& ord :
             {order_by_key(per_mass, false), order_by_key(g0, false)}) {
            Strategy v = greedy_vertex(env, ord, c);
            push_start(starts, project_budget_max(env, v.eta, c));
        }
    } catch (const Error&) {
        // skip gradient-guided vertices if the base gradient is unavailable
    }
    Rng rng(Rng::mix(opts.seed, 0xa17eULL));
    for (int r = 0; r < opts.random_starts; ++r) {
        std::vector<double> y(env.n);
        for (int j = 0; j < env.n; ++j) y[j] = rng.next_unit();
        push_start(starts, project_budget_max(env, y, c));
    }
    return starts;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

FrontierPoint pick_best(std::vector<Candidate>& cands, bool maximize) {
    int best = -1;
    for (int i = 0; i < int(cands.size()); ++i) {
        if (best < 0) {
            best = i;
            continue;
        }
        const Candidate& a = cands[i];
        const Candidate& b = cands[best];
        double d = a.loss - b.loss;
        bool better;
        if (maximize ? d > 1e-15 : d < -1e-15)
            better = true;
        else if (std::fabs(d) <= 1e-15)
            better = a.cost < b.cost - 1e-15 ||
                     (std::fabs(a.cost - b.cost) <= 1e-15 && lex_less(a.eta.eta, b.eta.eta));
        else
            better = false;
        if (better) best = i;
    }
    FrontierPoint pt;
    pt.cost = cands[best].cost;
    pt.loss = cands[best].loss;
    pt.eta = std::move(cands[best].eta);
    pt.status = cands[best].clean ? SolveStatus::Converged : SolveStatus::BestEffort;
    return pt;
}

void verify_min(FrontierPoint& pt, double c, const GridOracle* oracle, const SolverOpts& opts) {
    if (!oracle) return;
    double up = oracle->lambda_star(c);
    double floor_cost = oracle->nearest_cost_at_or_above(c);
    double floor_loss = oracle->lambda_star(floor_cost);
    if (pt.loss > up + opts.oracle_tol)
        pt.status = SolveStatus::BestEffort;
    else if (pt.loss >= floor_loss - opts.oracle_tol)
        pt.status = SolveStatus::OracleVerified;
}

void verify_max(FrontierPoint& pt, double c, const GridOracle* oracle, const SolverOpts& opts) {
    if (!oracle) return;
    double lo = oracle->lambda_sup(c);
    double ceil_cost = oracle->nearest_cost_at_or_below(c);
    double ceil_loss = oracle->lambda_sup(ceil_cost);
    if (pt.loss < lo - opts.oracle_tol)
        pt.status = SolveStatus::BestEffort;
    else if (pt.loss <= ceil_loss + opts.oracle_tol)
        pt.status = SolveStatus::OracleVerified;
}

void check_cost_range(double c) {
    if (!(c >= -1e-12) || !(c <= 1.0 + 1e-12))
        throw InfeasibleCost("budget " + std::to_string(c) + " outside [0, 1]");
}

FrontierPoint min_loss_impl(const Env& env, double c, const SolverOpts& opts,
                            const GridOracle* oracle) {
    check_cost_range(c);
    c = std::min(1.0, std::max(0.0, c));
    if (env.n == 1) {
        // One group: loss is nondecreasing in eta, so spend the whole budget.
        Strategy s = uniform_at_cost(env, c);
        FrontierPoint pt;
        pt.loss = eval_loss(env, s, opts.fp_tol);
        pt.cost = cost(*env.model, env.p->cost_kind, s);
        pt.eta = std::move(s);
        pt.status = SolveStatus::Converged;
        verify_min(pt, c, oracle, opts);
        return pt;
    }
    std::vector<Strategy> starts = min_starts(env, c, opts);
    std::vector<Candidate> cands;
    cands.reserve(starts.size());
    for (Strategy& s : starts) {
        try {
            cands.push_back(descend(env, std::move(s), c, false, opts));
        } catch (const Error&) {
            // drop starts whose evaluations fail to converge
        }
    }
    if (cands.empty())
        throw NoConvergence("all descent starts failed at budget " + std::to_string(c), 0.0, 0.0,
                            0);
    FrontierPoint pt = pick_best(cands, false);
    verify_min(pt, c, oracle, opts);
    return pt;
}

FrontierPoint max_loss_impl(const Env& env, double c, const SolverOpts& opts,
                            const GridOracle* oracle) {
    check_cost_range(c);
    c = std::min(1.0, std::max(0.0, c));
    if (env.n == 1) {
        Strategy s = uniform_at_cost(env, c);
        FrontierPoint pt;
        pt.loss = eval_loss(env, s, opts.fp_tol);
        pt.cost = cost(*env.model, env.p->cost_kind, s);
        pt.eta = std::move(s);
        pt.status = SolveStatus::Converged;
        verify_max(pt, c, oracle, opts);
        return pt;
    }
    std::vector<Strategy> starts = max_starts(env, c, opts);
    std::vector<Candidate> cands;
    cands.reserve(starts.size());
    for (Strategy& s : starts) {
        try {
            cands.push_back(descend(env, std::move(s), c, true, opts));
        } catch (const Error&) {
            // drop starts whose evaluations fail to converge
        }
    }
    if (cands.empty())
        throw NoConvergence("all ascent starts failed at budget " + std::to_string(c), 0.0, 0.0,
                            0);
    FrontierPoint pt = pick_best(cands, true);
    verify_max(pt, c, oracle, opts);
    return pt;
}

SolverOpts inner_opts(const SolverOpts& opts) {
    SolverOpts o = opts;
    o.oracle.reset();
    o.oracle_steps = 0;
    return o;
}

// Build the default verification oracle when the instance is small enough.
// Equilibrium losses are costly per lattice cell, so their automatic oracle
// is limited to two groups; pass SolverOpts::oracle to override.
std::shared_ptr<const GridOracle> resolve_oracle(const Problem& p, const SolverOpts& opts) {
    if (opts.oracle) return opts.oracle;
    if (opts.oracle_steps <= 0) return nullptr;
    int limit = p.loss_kind == LossKind::Re ? 3 : 2;
    if (p.model.n > limit) return nullptr;
    return std::make_shared<GridOracle>(grid_oracle(p, opts.oracle_steps));
}

double cached_lmax(const Env& env, const SolverOpts& opts) {
    return eval_loss(env, Strategy::ones(env.n), opts.fp_tol);
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::OracleVerified: return "OracleVerified";
        case SolveStatus::BestEffort: return "BestEffort";
    }
    return "Unknown";
}

Problem::Problem(PopulationModel model_, LossKind loss_, CostKind cost_, ConstraintSet cs)
    : model(std::move(model_)), loss_kind(loss_), cost_kind(cost_), constraints(std::move(cs)) {
    model.validate();
    if (constraints.kind == ConstraintSet::Kind::Ordered &&
        int(constraints.order.size()) != model.n)
        throw ValidationError("constraint order length does not match group count");
    cost_density(model, cost_kind);  // validates the density
    r0_ = r_e(model, Strategy::ones(model.n));
    if (loss_kind == LossKind::Re) {
        if (!(r0_ > 0.0))
            throw ValidationError("reproduction-number loss needs a nonzero base kernel");
    } else {
        if (!(r0_ > 1.0))
            throw ValidationError(
                "infected-fraction loss needs a supercritical base model, r0 = " +
                std::to_string(r0_));
    }
}

double loss(const Problem& p, const Strategy& eta, double fp_tol) {
    Env env = make_env(p);
    return eval_loss(env, eta, fp_tol);
}

FrontierPoint min_loss_at_cost(const Problem& p, double c, const SolverOpts& opts) {
    Env env = make_env(p);
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    return min_loss_impl(env, c, opts, oracle.get());
}

FrontierPoint max_loss_at_cost(const Problem& p, double c, const SolverOpts& opts) {
    Env env = make_env(p);
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    return max_loss_impl(env, c, opts, oracle.get());
}

FrontierPoint min_cost_at_loss(const Problem& p, double ell, const SolverOpts& opts) {
    Env env = make_env(p);
    double lmax = cached_lmax(env, opts);
    if (!(ell >= -1e-9) || !(ell <= lmax + std::max(1e-9, opts.loss_tol)))
        throw InfeasibleLoss("loss target " + std::to_string(ell) + " outside [0, " +
                             std::to_string(lmax) + "]");
    ell = std::min(lmax, std::max(0.0, ell));
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    if (ell >= lmax - 1e-15) {
        FrontierPoint pt;
        pt.eta = Strategy::ones(env.n);
        pt.cost = cost(*env.model, env.p->cost_kind, pt.eta);
        pt.loss = lmax;
        pt.status = SolveStatus::Converged;
        verify_min(pt, pt.cost, oracle.get(), opts);
        return pt;
    }
    SolverOpts inner = inner_opts(opts);
    FrontierPoint best = min_loss_impl(env, 1.0, inner, nullptr);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > opts.cost_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        FrontierPoint pt = min_loss_impl(env, mid, inner, nullptr);
        if (pt.loss <= ell + opts.loss_tol) {
            hi = mid;
            best = std::move(pt);
        } else {
            lo = mid;
        }
    }
    verify_min(best, hi, oracle.get(), opts);
    return best;
}

FrontierPoint max_cost_at_loss(const Problem& p, double ell, const SolverOpts& opts) {
    Env env = make_env(p);
    double lmax = cached_lmax(env, opts);
    if (!(ell >= -1e-9) || !(ell <= lmax + std::max(1e-9, opts.loss_tol)))
        throw InfeasibleLoss("loss target " + std::to_string(ell) + " outside [0, " +
                             std::to_string(lmax) + "]");
    ell = std::min(lmax, std::max(0.0, ell));
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    if (ell <= 1e-15) {
        // Any loss level is reached at full abstention.
        FrontierPoint pt;
        pt.eta = Strategy::zeros(env.n);
        pt.cost = cost(*env.model, env.p->cost_kind, pt.eta);
        pt.loss = eval_loss(env, pt.eta, opts.fp_tol);
        pt.status = SolveStatus::Converged;
        verify_max(pt, pt.cost, oracle.get(), opts);
        return pt;
    }
    SolverOpts inner = inner_opts(opts);
    FrontierPoint best = max_loss_impl(env, 0.0, inner, nullptr);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > opts.cost_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        FrontierPoint pt = max_loss_impl(env, mid, inner, nullptr);
        if (pt.loss >= ell - opts.loss_tol) {
            lo = mid;
            best = std::move(pt);
        } else {
            hi = mid;
        }
    }
    verify_max(best, lo, oracle.get(), opts);
    return best;
}

FrontierCurve pareto_frontier(const Problem& p, int grid, const SolverOpts& opts) {
    if (grid < 2) throw ValidationError("frontier grid needs at least two points");
    Env env = make_env(p);
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    SolverOpts shared = opts;
    shared.oracle = oracle;
    FrontierPoint end = min_cost_at_loss(p, 0.0, shared);
    double cmax = end.cost;
    FrontierCurve curve;
    curve.direction = Direction::Pareto;
    curve.points.resize(grid);
    int threads = detail::resolve_threads(opts.threads);
    detail::parallel_for(grid, threads, [&](int k) {
        double ck = cmax * double(k) / double(grid - 1);
        SolverOpts o2 = opts;
        o2.seed = Rng::mix(opts.seed, 1000 + uint64_t(k));
        curve.points[k] = min_loss_impl(env, ck, o2, oracle.get());
    });
    for (int k = 1; k < grid; ++k)
        if (curve.points[k].loss > curve.points[k - 1].loss + 1e-9)
            curve.points[k].status = SolveStatus::BestEffort;
    return curve;
}

FrontierCurve anti_pareto_frontier(const Problem& p, int grid, const SolverOpts& opts) {
    if (grid < 2) throw ValidationError("frontier grid needs at least two points");
    ConnectivityReport rep = classify(p.model);
    if (rep.classification == KernelClass::General ||
        rep.classification == KernelClass::Degenerate)
        throw NotMonatomic(
            std::string("anti-frontier needs a single self-sustaining component, kernel is ") +
            to_string(rep.classification));
    Env env = make_env(p);
    double lmax = cached_lmax(env, opts);
    std::shared_ptr<const GridOracle> oracle = resolve_oracle(p, opts);
    SolverOpts shared = opts;
    shared.oracle = oracle;
    FrontierPoint left = max_cost_at_loss(p, lmax, shared);
    SolverOpts inner = inner_opts(opts);
    int threads = detail::resolve_threads(opts.threads);
    FrontierCurve curve;
    curve.direction = Direction::AntiPareto;
    if (p.loss_kind == LossKind::Re) {
        curve.points.resize(grid);
        detail::parallel_for(grid, threads, [&](int k) {
            double ck = left.cost + (1.0 - left.cost) * double(k) / double(grid - 1);
            SolverOpts o2 = opts;
            o2.seed = Rng::mix(opts.seed, 2000 + uint64_t(k));
            curve.points[k] = max_loss_impl(env, ck, o2, oracle.get());
        });
    } else {
        // The worst-case infected fraction drops to zero at a budget c0 < 1;
        // bracket c0, then sample the connected piece up to the bracket edge
        // and close the curve with the isolated full-abstention point.
        double lo = left.cost, hi = 1.0;
        auto positive = [&](double c) {
            FrontierPoint pt = max_loss_impl(env, c, inner, nullptr);
            return pt.loss > opts.loss_tol;
        };
        if (!positive(lo)) {
            hi = lo;
        } else {
            for (int it = 0; it < 60 && hi - lo > opts.cost_tol; ++it) {
                double mid = 0.5 * (lo + hi);
                if (positive(mid))
                    lo = mid;
                else
                    hi = mid;
            }
        }
        curve.c0 = 0.5 * (lo + hi);
        curve.points.resize(grid);
        double right = lo;
        detail::parallel_for(grid, threads, [&](int k) {
            double ck = left.cost + (right - left.cost) * double(k) / double(grid - 1);
            SolverOpts o2 = opts;
            o2.seed = Rng::mix(opts.seed, 2000 + uint64_t(k));
            curve.points[k] = max_loss_impl(env, ck, o2, oracle.get());
        });
        FrontierPoint tail;
        tail.eta = Strategy::zeros(env.n);
        tail.cost = cost(*env.model, env.p->cost_kind, tail.eta);
        tail.loss = 0.0;
        tail.status = SolveStatus::Converged;
        curve.points.push_back(std::move(tail));
    }
    for (size_t k = 1; k < curve.points.size(); ++k)
        if (curve.points[k].loss > curve.points[k - 1].loss + 1e-9)
            curve.points[k].status = SolveStatus::BestEffort;
    return curve;
}

GridOracle grid_oracle(const Problem& p, int steps) {
    if (steps < 1) throw ValidationError("lattice needs at least one step");
    if (p.model.n > 4)
        throw TooLarge("lattice oracle supports at most 4 groups, got " +
                       std::to_string(p.model.n));
    double cells = std::pow(double(steps) + 1.0, p.model.n);
    if (cells > 1.2e7)
        throw TooLarge("lattice oracle would enumerate " + std::to_string(size_t(cells)) +
                       " cells");
    Env env = make_env(p);
    const int n = env.n;
    GridOracle oracle;
    oracle.steps = steps;
    oracle.n = n;
    std::vector<int> digits(n, 0);
    Strategy s = Strategy::zeros(n);
    const double inv = 1.0 / double(steps);
    const ConstraintSet& cs = p.constraints;
    size_t total = size_t(std::llround(cells));
    oracle.outcomes.reserve(total);
    oracle.cell_ids.reserve(total);
    for (size_t cell = 0;; ++cell) {
        bool admissible = true;
        if (cs.kind == ConstraintSet::Kind::Oscillation) {
            int mn = steps, mx = 0;
            for (int j = 0; j < n; ++j) {
                mn = std::min(mn, digits[j]);
                mx = std::max(mx, digits[j]);
            }
            admissible = double(mx - mn) * inv <= cs.delta + 1e-12;
        } else if (cs.kind == ConstraintSet::Kind::Ordered) {
            for (int k = 1; k < n && admissible; ++k)
                if (digits[cs.order[size_t(k)]] < digits[cs.order[size_t(k - 1)]])
                    admissible = false;
        }
        if (admissible) {
            for (int j = 0; j < n; ++j) s.eta[j] = double(digits[j]) * inv;
            Outcome o;
            o.cost = cost(*env.model, p.cost_kind, s);
            o.loss = eval_loss(env, s, 1e-10);
            oracle.outcomes.push_back(o);
            oracle.cell_ids.push_back(cell);
        }
        int j = 0;
        while (j < n && digits[j] == steps) {
            digits[j] = 0;
            ++j;
        }
        if (j == n) break;
        ++digits[j];
    }
    std::vector<size_t> perm(oracle.outcomes.size());
    std::iota(perm.begin(), perm.end(), size_t(0));
    std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
        const Outcome& oa = oracle.outcomes[a];
        const Outcome& ob = oracle.outcomes[b];
        if (oa.cost != ob.cost) return oa.cost < ob.cost;
        if (oa.loss != ob.loss) return oa.loss < ob.loss;
        return oracle.cell_ids[a] < oracle.cell_ids[b];
    });
    std::vector<Outcome> so(perm.size());
    std::vector<std::uint64_t> sc(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        so[i] = oracle.outcomes[perm[i]];
        sc[i] = oracle.cell_ids[perm[i]];
    }
    oracle.outcomes = std::move(so);
    oracle.cell_ids = std::move(sc);
    size_t m = oracle.outcomes.size();
    oracle.prefix_min_loss.resize(m);
    oracle.suffix_max_loss.resize(m);
    for (size_t i = 0; i < m; ++i) {
        double l = oracle.outcomes[i].loss;
        oracle.prefix_min_loss[i] = i ? std::min(oracle.prefix_min_loss[i - 1], l) : l;
    }
    for (size_t i = m; i-- > 0;) {
        double l = oracle.outcomes[i].loss;
        oracle.suffix_max_loss[i] = i + 1 < m ? std::max(oracle.suffix_max_loss[i + 1], l) : l;
    }
    oracle.by_loss.resize(m);
    std::iota(oracle.by_loss.begin(), oracle.by_loss.end(), size_t(0));
    std::sort(oracle.by_loss.begin(), oracle.by_loss.end(), [&](size_t a, size_t b) {
        const Outcome& oa = oracle.outcomes[a];
        const Outcome& ob = oracle.outcomes[b];
        if (oa.loss != ob.loss) return oa.loss < ob.loss;
        if (oa.cost != ob.cost) return oa.cost < ob.cost;
        return oracle.cell_ids[a] < oracle.cell_ids[b];
    });
    oracle.prefix_min_cost.resize(m);
    oracle.suffix_max_cost.resize(m);
    for (size_t i = 0; i < m; ++i) {
        double c = oracle.outcomes[oracle.by_loss[i]].cost;
        oracle.prefix_min_cost[i] = i ? std::min(oracle.prefix_min_cost[i - 1], c) : c;
    }
    for (size_t i = m; i-- > 0;) {
        double c = oracle.outcomes[oracle.by_loss[i]].cost;
        oracle.suffix_max_cost[i] = i + 1 < m ? std::max(oracle.suffix_max_cost[i + 1], c) : c;
    }
    return oracle;
}

Strategy GridOracle::strategy(size_t index) const {
    std::uint64_t cell = cell_ids.at(index);
    Strategy s = Strategy::zeros(n);
    size_t base = size_t(steps) + 1;
    for (int j = 0; j < n; ++j) {
        s.eta[j] = double(cell % base) / double(steps);
        cell /= base;
    }
    return s;
}

double GridOracle::lambda_star(double c) const {
    // rightmost outcome with cost <= c
    size_t lo = 0, hi = outcomes.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[mid].cost <= c + 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) return std::numeric_limits<double>::infinity();
    return prefix_min_loss[lo - 1];
}

double GridOracle::lambda_sup(double c) const {
    // leftmost outcome with cost >= c
    size_t lo = 0, hi = outcomes.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[mid].cost < c - 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == outcomes.size()) {
        if (outcomes.empty()) return -std::numeric_limits<double>::infinity();
        return outcomes.back().loss;
    }
    return suffix_max_loss[lo];
}

double GridOracle::cost_star(double ell) const {
    // rightmost by-loss entry with loss <= ell
    size_t lo = 0, hi = by_loss.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[by_loss[mid]].loss <= ell + 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) return std::numeric_limits<double>::infinity();
    return prefix_min_cost[lo - 1];
}

double GridOracle::cost_sup(double ell) const {
    // leftmost by-loss entry with loss >= ell
    size_t lo = 0, hi = by_loss.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[by_loss[mid]].loss < ell - 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == by_loss.size()) return -std::numeric_limits<double>::infinity();
    return suffix_max_cost[lo];
}

double GridOracle::nearest_cost_at_or_above(double c) const {
    size_t lo = 0, hi = outcomes.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[mid].cost < c - 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == outcomes.size()) return outcomes.empty() ? c : outcomes.back().cost;
    return outcomes[lo].cost;
}

double GridOracle::nearest_cost_at_or_below(double c) const {
    size_t lo = 0, hi = outcomes.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (outcomes[mid].cost <= c + 1e-15)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) return outcomes.empty() ? c : outcomes.front().cost;
    return outcomes[lo - 1].cost;
}

std::vector<Outcome> feasible_region_sample(const Problem& p, int samples, uint64_t seed) {
    if (samples < 1) throw ValidationError("need at least one sample");
    Env env = make_env(p);
    Rng rng(Rng::mix(seed, 0xfea51b1eULL));
    std::vector<Outcome> out;
    out.reserve(size_t(samples));
    Strategy base = Strategy::ones(env.n);
    for (int i = 0; i < samples; ++i) {
        std::vector<double> y(env.n);
        int mode = i % 3;
        if (mode == 0) {
            for (int j = 0; j < env.n; ++j) y[j] = rng.next_unit();
        } else if (mode == 1) {
            double t = rng.next_unit();
            for (int j = 0; j < env.n; ++j) y[j] = t * base.eta[j];
        } else {
            double t = rng.next_unit();
            for (int j = 0; j < env.n; ++j) y[j] = t * base.eta[j] + (1.0 - t);
        }
        Strategy s = project(*env.model, std::move(y), p.constraints);
        if (mode == 0) base = s;
        Outcome o;
        o.cost = cost(*env.model, p.cost_kind, s);
        o.loss = eval_loss(env, s, 1e-10);
        out.push_back(o);
    }
    return out;
}

std::pair<double, double> critical_cost_consistency(const PopulationModel& model, CostKind cost,
                                                    const SolverOpts& opts) {
    double r0 = r_e(model, Strategy::ones(model.n));
    if (r0 <= 1.0 + 1e-12) return {0.0, 0.0};
    Problem pr(model, LossKind::Re, cost, ConstraintSet::box());
    Problem pi(model, LossKind::I, cost, ConstraintSet::box());
    FrontierPoint a = min_cost_at_loss(pr, 1.0, opts);
    FrontierPoint b = min_cost_at_loss(pi, 0.0, opts);
    return {a.cost, b.cost};
}

}  // namespace parepi
