// Perron root computation for nonnegative matrices and the strategy
// derivative of the effective reproduction number.
#include "parepi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parepi/errors.hpp"
#include "parepi/kernels.hpp"
#include "scc.hpp"

namespace parepi {

namespace {

double inf_norm(const std::vector<double>& a, int n) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += a[std::size_t(i) * n + j];
        best = std::max(best, row);
    }
    return best;
}

struct PowerResult {
    double rho = 0.0;
    std::vector<double> x;
    bool converged = false;
    long iterations = 0;
    double residual = 0.0;
};

// Shifted power iteration x <- (A + sigma I) x from the all-ones vector.
// The shift makes irreducible periodic matrices aperiodic without moving the
// eigenvectors; rho and the residual are evaluated on the unshifted matrix.
PowerResult power_iterate(const std::vector<double>& a, int n, bool transposed,
                          double tol, long max_iter) {
    PowerResult r;
    r.x.assign(n, 1.0);
    std::vector<double> z(n);
    const double sigma = 0.5 * std::max(inf_norm(a, n), 1e-300);
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<double> best_x = r.x;
    double best_rho = 0.0;
    for (long it = 1; it <= max_iter; ++it) {
        r.iterations = it;
        if (transposed) kernels::matvec_t(a.data(), r.x.data(), z.data(), std::size_t(n));
        else kernels::matvec(a.data(), r.x.data(), z.data(), std::size_t(n));
        const double xx = kernels::dot(r.x.data(), r.x.data(), std::size_t(n));
        const double rho = kernels::dot(r.x.data(), z.data(), std::size_t(n)) / xx;
        double res = 0.0;
        for (int i = 0; i < n; ++i) res = std::max(res, std::fabs(z[i] - rho * r.x[i]));
        if (res < best_res) {
            best_res = res;
            best_x = r.x;
            best_rho = rho;
        }
        if (res <= tol * std::max(rho, 1.0)) {
            r.rho = std::max(0.0, rho);
            r.residual = res;
            r.converged = true;
            return r;
        }
        // Next iterate, normalized in sup norm.
        kernels::axpy(sigma, r.x.data(), z.data(), std::size_t(n));
        const double norm = kernels::max_abs(z.data(), std::size_t(n));
        if (norm <= 0.0) break;  // cannot happen for sigma > 0 and x != 0
        for (int i = 0; i < n; ++i) r.x[i] = z[i] / norm;
    }
    r.rho = std::max(0.0, best_rho);
    r.x = best_x;
    r.residual = best_res;
    r.converged = false;
    return r;
}

std::vector<double> submatrix(const std::vector<double>& a, int n,
                              const std::vector<int>& rows) {
    const int m = int(rows.size());
    std::vector<double> out(std::size_t(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out[std::size_t(i) * m + j] = a[std::size_t(rows[i]) * n + rows[j]];
    return out;
}

struct RadiusResult {
    double rho = 0.0;
    bool converged = true;
    long iterations = 0;
    double residual = 0.0;
};

// Spectral radius via per-component power iteration: each strongly connected
// component of the support is irreducible, where the shifted iteration
// converges geometrically; the radius of the whole matrix is the component
// maximum. Singleton components contribute their diagonal entry exactly.
RadiusResult radius_by_components(const std::vector<double>& a, int n,
                                  const std::vector<std::vector<int>>& sccs,
                                  double tol, long max_iter) {
    RadiusResult out;
    for (const std::vector<int>& comp : sccs) {
        if (comp.size() == 1) {
            const int v = comp[0];
            out.rho = std::max(out.rho, a[std::size_t(v) * n + v]);
            continue;
        }
        std::vector<double> block = submatrix(a, n, comp);
        PowerResult pr = power_iterate(block, int(comp.size()), false, tol, max_iter);
        out.iterations += pr.iterations;
        out.residual = std::max(out.residual, pr.residual);
        out.converged = out.converged && pr.converged;
        out.rho = std::max(out.rho, pr.rho);
    }
    return out;
}

RadiusResult raw_spectral_radius(const std::vector<double>& a, int n, double tol,
                                 long max_iter) {
    std::vector<std::vector<int>> sccs = detail::scc_components(a.data(), n, 0.0);
    if (int(sccs.size()) == 1) {
        PowerResult pr = power_iterate(a, n, false, tol, max_iter);
        return RadiusResult{pr.rho, pr.converged, pr.iterations, pr.residual};
    }
    return radius_by_components(a, n, sccs, tol, max_iter);
}

}  // namespace

NextGenMatrix next_gen_matrix(const PopulationModel& model, const Strategy& eta) {
    model.validate();
    if (eta.size() != model.n)
        throw ValidationError("strategy length disagrees with model");
    NextGenMatrix g;
    g.n = model.n;
    g.weights = model.weights;
    g.m.resize(std::size_t(model.n) * model.n);
    std::vector<double> colscale(model.n);
    for (int j = 0; j < model.n; ++j) {
        double e = eta[j];
        if (e < -1e-12 || e > 1.0 + 1e-12)
            throw ValidationError("strategy entries must lie in [0,1]");
        e = std::min(1.0, std::max(0.0, e));
        colscale[j] = e * model.weights[j] / model.gamma[j];
    }
    for (int i = 0; i < model.n; ++i)
        for (int j = 0; j < model.n; ++j)
            g.m[std::size_t(i) * model.n + j] = model.k(i, j) * colscale[j];
    return g;
}

EigenPair spectral_radius(const NextGenMatrix& m, double tol, long max_iter) {
    const int n = m.n;
    EigenPair ep;
    ep.right.assign(n, 0.0);
    ep.left.assign(n, 0.0);
    if (inf_norm(m.m, n) == 0.0) {
        ep.converged = true;
        return ep;
    }

    std::vector<std::vector<int>> sccs = detail::scc_components(m.m.data(), n, 0.0);
    const bool irreducible = int(sccs.size()) == 1;

    double rho;
    long used = 0;
    double block_residual = 0.0;
    if (irreducible) {
        PowerResult pr = power_iterate(m.m, n, false, tol, max_iter);
        used += pr.iterations;
        if (!pr.converged)
            throw NoConvergence("power iteration did not meet tolerance", pr.rho,
                                pr.residual, pr.iterations);
        rho = pr.rho;
        ep.right = pr.x;
        ep.residual = pr.residual;
    } else {
        RadiusResult rr = radius_by_components(m.m, n, sccs, tol, max_iter);
        used += rr.iterations;
        if (!rr.converged)
            throw NoConvergence("component power iteration did not meet tolerance",
                                rr.rho, rr.residual, rr.iterations);
        rho = rr.rho;
        block_residual = rr.residual;
        // A full-matrix eigenvector might not be reachable by iteration when
        // the matrix is reducible; attempt briefly and keep zeros otherwise.
        PowerResult pr = power_iterate(m.m, n, false, tol, std::min<long>(max_iter, 5000));
        used += pr.iterations;
        if (pr.converged && std::fabs(pr.rho - rho) <= 1e-8 * std::max(1.0, rho)) {
            ep.right = pr.x;
            ep.residual = std::max(pr.residual, block_residual);
        } else {
            ep.residual = block_residual;
        }
    }
    ep.rho = rho;

    const bool have_right = kernels::max_abs(ep.right.data(), std::size_t(n)) > 0.0;
    if (have_right) {
        PowerResult pl = power_iterate(m.m, n, true, tol,
                                       irreducible ? max_iter : std::min<long>(max_iter, 5000));
        used += pl.iterations;
        if (pl.converged && std::fabs(pl.rho - rho) <= 1e-8 * std::max(1.0, rho)) {
            ep.left = pl.x;
        } else if (irreducible) {
            throw NoConvergence("left power iteration did not meet tolerance", pl.rho,
                                pl.residual, used);
        }
    }

    ep.iterations = used;
    ep.converged = true;

    if (ep.rho > 0.0 && have_right) {
        const double wr = kernels::dot(m.weights.data(), ep.right.data(), std::size_t(n));
        if (wr > 0.0)
            for (double& v : ep.right) v /= wr;
        const double wlr = kernels::dot3(m.weights.data(), ep.left.data(),
                                         ep.right.data(), std::size_t(n));
        if (wlr > 0.0)
            for (double& v : ep.left) v /= wlr;
    } else {
        ep.right.assign(n, 0.0);
        ep.left.assign(n, 0.0);
    }
    return ep;
}

double matrix_spectral_radius(const std::vector<double>& a, int n, double tol,
                              long max_iter) {
    if (a.size() != std::size_t(n) * n)
        throw ValidationError("matrix size disagrees with n");
    if (inf_norm(a, n) == 0.0) return 0.0;
    RadiusResult rr = raw_spectral_radius(a, n, tol, max_iter);
    if (!rr.converged)
        throw NoConvergence("power iteration did not meet tolerance", rr.rho,
                            rr.residual, rr.iterations);
    return rr.rho;
}

double r_e(const PopulationModel& model, const Strategy& eta) {
    return spectral_radius(next_gen_matrix(model, eta)).rho;
}

std::vector<double> r_e_gradient(const PopulationModel& model, const Strategy& eta) {
    NextGenMatrix g = next_gen_matrix(model, eta);
    EigenPair ep = spectral_radius(g);
    const int n = model.n;
    const double denom = kernels::dot(ep.left.data(), ep.right.data(), std::size_t(n));
    const double nl = std::sqrt(kernels::dot(ep.left.data(), ep.left.data(), std::size_t(n)));
    const double nr = std::sqrt(kernels::dot(ep.right.data(), ep.right.data(), std::size_t(n)));
    if (ep.rho <= 0.0 || denom < 1e-10 * nl * nr || nl == 0.0 || nr == 0.0)
        throw DegenerateEigenvalue("left/right Perron pairing is numerically singular");
    // d rho / d eta_j = left^T (dM/d eta_j) right / (left^T right) where the
    // perturbation only touches column j of the next-generation matrix.
    std::vector<double> colsum(n);
    kernels::matvec_t(model.kernel.data(), ep.left.data(), colsum.data(), std::size_t(n));
    std::vector<double> grad(n);
    for (int j = 0; j < n; ++j)
        grad[j] = colsum[j] * model.weights[j] / model.gamma[j] * ep.right[j] / denom;
    return grad;
}

}  // namespace parepi
