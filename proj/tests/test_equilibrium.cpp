// Endemic equilibrium and dynamics: closed forms for the homogeneous model,
// fixed-point and monotonicity properties, RK4 against the logistic solution,
// long-horizon integration versus the fixed point, and the threshold
// equivalence between the infected fraction and the reproduction number.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "parepi/equilibrium.hpp"
#include "parepi/errors.hpp"
#include "parepi/model.hpp"
#include "parepi/rng.hpp"
#include "parepi/spectral.hpp"
#include "support.hpp"

using namespace parepi;

TEST_CASE("homogeneous equilibrium closed form") {
    PopulationModel m = testsup::homog();
    EquilibriumResult eq = maximal_equilibrium(m, Strategy::ones(1));
    CHECK(eq.converged);
    CHECK(eq.g[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(infected_fraction(m, Strategy::ones(1)) == doctest::Approx(0.5).epsilon(1e-9));
    Strategy s(std::vector<double>{0.75});
    CHECK(infected_fraction(m, s) == doctest::Approx(0.25).epsilon(1e-9));
    // R_e = 2 eta: g = 1 - 1/(2 eta) above threshold, I = g eta
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        double eta = 0.55 + 0.45 * rng.next_unit();
        Strategy e(std::vector<double>{eta});
        double g = 1.0 - 1.0 / (2.0 * eta);
        CHECK(infected_fraction(m, e) == doctest::Approx(g * eta).epsilon(1e-8));
    }
    Strategy sub(std::vector<double>{0.4});
    CHECK(infected_fraction(m, sub) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("equilibrium is a fixed point with vanishing vector field") {
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + int(rng.next_u64() % 6);
        PopulationModel m = testsup::random_model(rng, n, 0.5, true);
        // scale up so several models are supercritical
        for (double& k : m.kernel) k *= 2.0;
        m.validate();
        Strategy s{std::vector<double>(n)};
        for (int i = 0; i < n; ++i) s.eta[i] = 0.3 + 0.7 * rng.next_unit();
        EquilibriumResult eq = maximal_equilibrium(m, s);
        CHECK(eq.converged);
        std::vector<double> f = vector_field(m, s, eq.g);
        for (double fi : f) CHECK(std::fabs(fi) <= 1e-8);
        for (double gi : eq.g) {
            CHECK(gi >= 0.0);
            CHECK(gi <= 1.0);
        }
    }
}

TEST_CASE("equilibrium grows componentwise with eta") {
    Rng rng(29);
    PopulationModel m = testsup::random_model(rng, 4, 0.7, true);
    for (double& k : m.kernel) k *= 2.0;
    m.validate();
    Strategy lo(std::vector<double>{0.5, 0.6, 0.4, 0.7});
    Strategy hi = lo;
    for (double& x : hi.eta) x = std::min(1.0, x + 0.25);
    EquilibriumResult a = maximal_equilibrium(m, lo);
    EquilibriumResult b = maximal_equilibrium(m, hi);
    for (int i = 0; i < 4; ++i) CHECK(b.g[i] >= a.g[i] - 1e-9);
}

TEST_CASE("spillover model: dead group is infected by the atom") {
    PopulationModel m = testsup::spillover();
    EquilibriumResult eq = maximal_equilibrium(m, Strategy::ones(2));
    CHECK(eq.g[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(eq.g[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    std::vector<int> sup = equilibrium_support(m, Strategy::ones(2));
    REQUIRE(sup.size() == 2);
    CHECK(sup[0] == 0);
    CHECK(sup[1] == 1);
    // vaccinating the atom kills both groups
    std::vector<int> none = equilibrium_support(m, Strategy(std::vector<double>{0.0, 1.0}));
    CHECK(none.empty());
}

TEST_CASE("RK4 reproduces the logistic solution") {
    PopulationModel m = testsup::homog();
    double u0 = 0.1;
    Trajectory tr = integrate_sis(m, Strategy::ones(1), {u0}, 2.0, 0.01);
    REQUIRE(tr.times.size() == tr.states.size());
    REQUIRE(tr.times.size() == 201);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-12));
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        double t = tr.times[k];
        double want = 0.5 / (1.0 + (0.5 / u0 - 1.0) * std::exp(-t));
        CHECK(tr.states[k][0] == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("long integration lands on the maximal equilibrium") {
    Rng rng(37);
    PopulationModel m = testsup::random_model(rng, 3, 0.8, true);
    for (double& k : m.kernel) k *= 2.0;
    m.validate();
    Strategy s(std::vector<double>{0.9, 0.8, 1.0});
    EquilibriumResult eq = maximal_equilibrium(m, s);
    double cap = 0.0;
    for (int i = 0; i < 3; ++i) {
        double row = m.gamma[i];
        for (int j = 0; j < 3; ++j) row += m.k(i, j) * m.weights[j];
        cap = std::max(cap, row);
    }
    double dt = 0.09 / cap;
    Trajectory tr = integrate_sis(m, s, {1.0, 1.0, 1.0}, 200.0, dt);
    for (int i = 0; i < 3; ++i)
        CHECK(tr.states.back()[i] == doctest::Approx(eq.g[i]).epsilon(1e-6));
}

TEST_CASE("integration from the all-ones state decreases toward equilibrium") {
    PopulationModel m = testsup::homog();
    Trajectory tr = integrate_sis(m, Strategy::ones(1), {1.0}, 10.0, 0.01);
    for (std::size_t k = 1; k < tr.states.size(); ++k)
        CHECK(tr.states[k][0] <= tr.states[k - 1][0] + 1e-12);
    CHECK(tr.states.back()[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("step size above the stability bound is rejected") {
    PopulationModel m = testsup::homog();
    // bound = 0.1 / (gamma + k w) = 0.1 / 3
    CHECK_THROWS_AS(integrate_sis(m, Strategy::ones(1), {0.5}, 1.0, 0.05), StepSizeError);
    Trajectory ok = integrate_sis(m, Strategy::ones(1), {0.5}, 1.0, 0.1 / 3.0);
    CHECK(ok.states.size() > 1);
}

TEST_CASE("integration input validation") {
    PopulationModel m = testsup::homog();
    CHECK_THROWS_AS(integrate_sis(m, Strategy::ones(1), {1.5}, 1.0, 0.01), ValidationError);
    CHECK_THROWS_AS(integrate_sis(m, Strategy::ones(1), {-0.1}, 1.0, 0.01), ValidationError);
    CHECK_THROWS_AS(integrate_sis(m, Strategy::ones(1), {0.5}, 0.0, 0.01), ValidationError);
    CHECK_THROWS_AS(integrate_sis(m, Strategy::ones(1), {0.5, 0.5}, 1.0, 0.01),
                    ValidationError);
}

TEST_CASE("infected fraction is positive exactly above threshold") {
    Rng rng(53);
    int checked = 0;
    for (int t = 0; t < 60 && checked < 25; ++t) {
        int n = 2 + int(rng.next_u64() % 5);
        PopulationModel m = testsup::random_model(rng, n, 0.5, false);
        m.validate();
        Strategy s{std::vector<double>(n)};
        for (int i = 0; i < n; ++i) s.eta[i] = rng.next_unit();
        double rho = r_e(m, s);
        if (std::fabs(rho - 1.0) < 0.05) continue;  // stay away from the threshold
        ++checked;
        double infected = infected_fraction(m, s);
        if (rho > 1.0)
            CHECK(infected > 1e-8);
        else
            CHECK(infected <= 1e-8);
    }
    CHECK(checked >= 25);
}

TEST_CASE("equilibrium iterates are monotone from above") {
    PopulationModel m = testsup::bipartite();
    Strategy s(std::vector<double>{0.9, 0.7});
    EquilibriumResult eq = maximal_equilibrium(m, s);
    // restarting from the equilibrium itself stays put
    std::vector<double> f = vector_field(m, s, eq.g);
    for (double fi : f) CHECK(std::fabs(fi) <= 1e-8);
    // the equilibrium dominates the long-run state of any start below one
    Trajectory tr = integrate_sis(m, s, {0.3, 0.2}, 100.0, 0.01);
    for (int i = 0; i < 2; ++i)
        CHECK(tr.states.back()[i] <= eq.g[i] + 1e-6);
}
