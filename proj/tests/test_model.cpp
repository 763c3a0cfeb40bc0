// Model parsing, validation, cost models, constraint sets and the weighted
// projections. Projection correctness is checked against exact independent
// oracles: block-partition enumeration for isotonic regression and a dense
// anchor sweep for the oscillation window.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "parepi/errors.hpp"
#include "parepi/model.hpp"
#include "parepi/rng.hpp"
#include "support.hpp"

using namespace parepi;

TEST_CASE("parse accepts a well-formed model and normalizes weights") {
    PopulationModel m = parse_model(R"({
        "weights": [0.5000000001, 0.5],
        "gamma": [1.0, 2.0],
        "kernel": [[0.0, 4.0], [4.0, 0.0]]
    })");
    CHECK(m.n == 2);
    CHECK(m.weights[0] + m.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.gamma[1] == 2.0);
    CHECK(m.k(0, 1) == 4.0);
    CHECK(m.k(1, 0) == 4.0);
    CHECK_FALSE(m.cost_density.has_value());
}

TEST_CASE("parse rejects malformed input with ParseError") {
    CHECK_THROWS_AS(parse_model("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_model("[1,2,3]"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"gamma": [1], "kernel": [[1]]})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1], "kernel": [[1]]})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1], "gamma": [1]})"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"weights": ["x"], "gamma": [1], "kernel": [[1]]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1], "gamma": [1], "kernel": [1]})"), ParseError);
}

TEST_CASE("parse rejects bad values with ValidationError") {
    CHECK_THROWS_AS(parse_model(R"({"weights": [0.6, 0.5], "gamma": [1, 1],
                                    "kernel": [[0, 1], [1, 0]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1.0], "gamma": [0.0], "kernel": [[1]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1.0], "gamma": [1.0], "kernel": [[-1]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [1.0], "gamma": [1.0, 2.0], "kernel": [[1]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"weights": [0.5, 0.5], "gamma": [1, 1],
                                    "kernel": [[0, 1], [1, 0]],
                                    "cost_density": [1.0, 2.0]})"),
                    ValidationError);
}

TEST_CASE("save and load round-trip preserves the model") {
    PopulationModel m = testsup::affine_bipartite();
    m.validate();
    std::string path = "roundtrip_model.json";
    save_model(m, path);
    PopulationModel back = load_model(path);
    std::remove(path.c_str());
    CHECK(back.n == m.n);
    for (int i = 0; i < m.n; ++i) {
        CHECK(back.weights[i] == doctest::Approx(m.weights[i]).epsilon(1e-15));
        CHECK(back.gamma[i] == m.gamma[i]);
        for (int j = 0; j < m.n; ++j) CHECK(back.k(i, j) == m.k(i, j));
    }
    REQUIRE(back.cost_density.has_value());
    CHECK((*back.cost_density)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK((*back.cost_density)[1] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("load of a missing file raises IoError") {
    CHECK_THROWS_AS(load_model("definitely_not_here_1234.json"), IoError);
}

TEST_CASE("midpoint discretization lays out groups on (i-1/2)/n") {
    auto kfn = [](double x, double y) { return 4.0 * x * y; };
    auto gfn = [](double x) { return 1.0 + x; };
    PopulationModel m = discretize_kernel(kfn, gfn, 4);
    CHECK(m.n == 4);
    for (int i = 0; i < 4; ++i) {
        double xi = (i + 0.5) / 4.0;
        CHECK(m.weights[i] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(m.gamma[i] == doctest::Approx(1.0 + xi).epsilon(1e-15));
        for (int j = 0; j < 4; ++j) {
            double xj = (j + 0.5) / 4.0;
            CHECK(m.k(i, j) == doctest::Approx(4.0 * xi * xj).epsilon(1e-15));
        }
    }
}

TEST_CASE("uniform and affine cost") {
    PopulationModel m = testsup::affine_bipartite();
    Strategy s(std::vector<double>{1.0, 0.0});
    CHECK(cost(m, CostKind::Uniform, s) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cost(m, CostKind::Affine, s) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cost(m, CostKind::Affine, Strategy::ones(2)) == 0.0);
    CHECK(cost(m, CostKind::Affine, Strategy::zeros(2)) == doctest::Approx(1.0).epsilon(1e-15));
    PopulationModel plain = testsup::bipartite();
    CHECK_THROWS_AS(cost(plain, CostKind::Affine, s), ValidationError);
}

TEST_CASE("constraint factories validate their inputs") {
    CHECK_THROWS_AS(ConstraintSet::oscillation(0.0), ValidationError);
    CHECK_THROWS_AS(ConstraintSet::oscillation(1.5), ValidationError);
    CHECK_THROWS_AS(ConstraintSet::ordered({0, 0}), ValidationError);
    CHECK_THROWS_AS(ConstraintSet::ordered({0, 2}), ValidationError);
    ConstraintSet cs = ConstraintSet::oscillation(0.25);
    CHECK(cs.delta == 0.25);
}

TEST_CASE("admits matches the set definitions") {
    Strategy flat(std::vector<double>{0.4, 0.4, 0.4});
    Strategy spread(std::vector<double>{0.1, 0.5, 0.9});
    CHECK(ConstraintSet::box().admits(flat));
    CHECK(ConstraintSet::box().admits(spread));
    CHECK_FALSE(ConstraintSet::box().admits(Strategy(std::vector<double>{1.2})));
    ConstraintSet osc = ConstraintSet::oscillation(0.5);
    CHECK(osc.admits(flat));
    CHECK_FALSE(osc.admits(spread));
    ConstraintSet ord = ConstraintSet::ordered({0, 1, 2});
    CHECK(ord.admits(spread));
    CHECK_FALSE(ord.admits(Strategy(std::vector<double>{0.9, 0.5, 0.1})));
    ConstraintSet rev = ConstraintSet::ordered({2, 1, 0});
    CHECK(rev.admits(Strategy(std::vector<double>{0.9, 0.5, 0.1})));
    // constant strategies belong to every admissible set
    for (double u : {0.0, 0.37, 1.0}) {
        Strategy c(std::vector<double>{u, u, u});
        CHECK(ConstraintSet::box().admits(c));
        CHECK(osc.admits(c));
        CHECK(ord.admits(c));
    }
}

TEST_CASE("box projection clamps componentwise") {
    PopulationModel m = testsup::multipartite6();
    std::vector<double> y = {-0.5, 0.2, 1.7, 0.0, 1.0, 0.5};
    Strategy s = project(m, y, ConstraintSet::box());
    std::vector<double> want = {0.0, 0.2, 1.0, 0.0, 1.0, 0.5};
    for (int i = 0; i < 6; ++i) CHECK(s[i] == want[i]);
}

namespace {

double sq_dist(const std::vector<double>& w, const std::vector<double>& z,
               const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) d += w[i] * (z[i] - y[i]) * (z[i] - y[i]);
    return d;
}

// Exact isotonic regression by enumerating block partitions: the optimum
// assigns each consecutive block its weighted mean, and the best monotone
// partition wins. Feasible for small n.
std::vector<double> isotonic_oracle(const std::vector<double>& w, const std::vector<double>& y) {
    int n = int(y.size());
    std::vector<double> best;
    double best_obj = 0.0;
    for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
        std::vector<double> z(n);
        int start = 0;
        for (int i = 0; i < n; ++i) {
            bool cut = i == n - 1 || (mask >> i) & 1;
            if (!cut) continue;
            double num = 0.0, den = 0.0;
            for (int k = start; k <= i; ++k) {
                num += w[k] * y[k];
                den += w[k];
            }
            for (int k = start; k <= i; ++k) z[k] = num / den;
            start = i + 1;
        }
        bool monotone = true;
        for (int i = 1; i < n; ++i)
            if (z[i] < z[i - 1] - 1e-13) monotone = false;
        if (!monotone) continue;
        double obj = sq_dist(w, z, y);
        if (best.empty() || obj < best_obj - 1e-15) {
            best = z;
            best_obj = obj;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("ordered projection equals exact isotonic regression") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + int(rng.next_u64() % 5);
        PopulationModel m;
        m.n = n;
        m.gamma.assign(n, 1.0);
        m.kernel.assign(std::size_t(n) * n, 1.0);
        m.weights.resize(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            m.weights[i] = 0.2 + rng.next_unit();
            sum += m.weights[i];
        }
        for (int i = 0; i < n; ++i) m.weights[i] /= sum;
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = 0.05 + 0.9 * rng.next_unit();

        Strategy got = project(m, y, ConstraintSet::ordered([&] {
            std::vector<int> id(n);
            for (int i = 0; i < n; ++i) id[i] = i;
            return id;
        }()));
        std::vector<double> want = isotonic_oracle(m.weights, y);
        for (int i = 0; i < n; ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}

TEST_CASE("ordered projection respects an arbitrary permutation") {
    PopulationModel m;
    m.n = 3;
    m.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    m.gamma.assign(3, 1.0);
    m.kernel.assign(9, 1.0);
    // require eta[2] <= eta[0] <= eta[1]
    ConstraintSet cs = ConstraintSet::ordered({2, 0, 1});
    std::vector<double> y = {0.2, 0.1, 0.9};
    Strategy s = project(m, y, cs);
    CHECK(cs.admits(s));
    // chain values (0.9, 0.2, 0.1) pool to the overall mean 0.4
    for (int i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("oscillation projection picks the best window") {
    PopulationModel m = testsup::bipartite();
    Strategy s = project(m, {0.0, 1.0}, ConstraintSet::oscillation(0.4));
    CHECK(s[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("oscillation projection matches a dense anchor sweep") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + int(rng.next_u64() % 4);
        PopulationModel m;
        m.n = n;
        m.gamma.assign(n, 1.0);
        m.kernel.assign(std::size_t(n) * n, 1.0);
        m.weights.resize(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            m.weights[i] = 0.2 + rng.next_unit();
            sum += m.weights[i];
        }
        for (int i = 0; i < n; ++i) m.weights[i] /= sum;
        double delta = 0.1 + 0.8 * rng.next_unit();
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.next_unit();
        ConstraintSet cs = ConstraintSet::oscillation(delta);
        Strategy got = project(m, y, cs);
        CHECK(cs.admits(got, 1e-9));
        double got_obj = sq_dist(m.weights, got.eta, y);
        double best = got_obj;
        for (int k = 0; k <= 20000; ++k) {
            double a = -0.1 + 1.2 * k / 20000.0;
            double lo = std::max(0.0, a), hi = std::min(1.0, a + delta);
            if (lo > hi) continue;
            std::vector<double> z(n);
            for (int i = 0; i < n; ++i) z[i] = std::min(hi, std::max(lo, y[i]));
            best = std::min(best, sq_dist(m.weights, z, y));
        }
        CHECK(got_obj <= best + 1e-7);
    }
}

TEST_CASE("projection of an admissible point is the identity") {
    PopulationModel m = testsup::multipartite6();
    Rng rng(5);
    std::vector<double> y(6);
    for (double& x : y) x = 0.4 + 0.1 * rng.next_unit();
    for (const ConstraintSet& cs :
         {ConstraintSet::box(), ConstraintSet::oscillation(0.2),
          ConstraintSet::ordered({5, 4, 3, 2, 1, 0})}) {
        std::vector<double> sorted = y;
        std::sort(sorted.rbegin(), sorted.rend());
        const std::vector<double>& input = cs.kind == ConstraintSet::Kind::Ordered ? sorted : y;
        Strategy s = project(m, input, cs);
        for (int i = 0; i < 6; ++i) CHECK(s[i] == doctest::Approx(input[i]).epsilon(1e-12));
    }
}

TEST_CASE("affine model rewrites to a uniform-cost equivalent") {
    PopulationModel m = testsup::affine_bipartite();
    PopulationModel u = to_uniform_cost_model(m);
    u.validate();
    CHECK_FALSE(u.cost_density.has_value());
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Strategy s(std::vector<double>{rng.next_unit(), rng.next_unit()});
        CHECK(cost(m, CostKind::Affine, s) ==
              doctest::Approx(cost(u, CostKind::Uniform, s)).epsilon(1e-12));
    }
}
