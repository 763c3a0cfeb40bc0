// Model construction, validation, JSON round-trip, cost models and the
// weighted projections onto the admissible strategy sets.
#include "parepi/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "parepi/errors.hpp"

namespace parepi {

namespace {

using nlohmann::json;

bool finite_all(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> read_vector(const json& j, const char* field, int expect = -1) {
    if (!j.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
    const json& a = j.at(field);
    if (!a.is_array()) throw ParseError(std::string("field \"") + field + "\" must be an array");
    std::vector<double> out;
    out.reserve(a.size());
    for (const json& x : a) {
        if (!x.is_number()) throw ParseError(std::string("field \"") + field + "\" must be numeric");
        out.push_back(x.get<double>());
    }
    if (expect >= 0 && int(out.size()) != expect)
        throw ValidationError(std::string("field \"") + field + "\" has wrong length");
    return out;
}

}  // namespace

void PopulationModel::validate() const {
    if (n <= 0) throw ValidationError("model must have at least one group");
    if (int(weights.size()) != n || int(gamma.size()) != n ||
        kernel.size() != std::size_t(n) * n)
        throw ValidationError("weights/gamma/kernel sizes disagree with n");
    if (!finite_all(weights) || !finite_all(gamma) || !finite_all(kernel))
        throw ValidationError("model entries must be finite");
    for (double w : weights)
        if (w <= 0.0) throw ValidationError("weights must be positive");
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-12)
        throw ValidationError("weights must sum to 1");
    for (double g : gamma)
        if (g <= 0.0) throw ValidationError("gamma must be positive");
    for (double k : kernel)
        if (k < 0.0) throw ValidationError("kernel must be nonnegative");
    if (cost_density) {
        if (int(cost_density->size()) != n)
            throw ValidationError("cost_density has wrong length");
        if (!finite_all(*cost_density))
            throw ValidationError("cost_density entries must be finite");
        for (double d : *cost_density)
            if (d <= 0.0) throw ValidationError("cost_density must be positive");
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += weights[i] * (*cost_density)[i];
        if (std::fabs(norm - 1.0) > 1e-12)
            throw ValidationError("cost_density must satisfy sum w_i c_i = 1");
    }
}

PopulationModel parse_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("model file must contain a JSON object");

    PopulationModel m;
    m.weights = read_vector(j, "weights");
    m.n = int(m.weights.size());
    if (m.n == 0) throw ValidationError("model must have at least one group");
    m.gamma = read_vector(j, "gamma", m.n);

    if (!j.contains("kernel")) throw ParseError("missing field \"kernel\"");
    const json& rows = j.at("kernel");
    if (!rows.is_array() || int(rows.size()) != m.n)
        throw ParseError("field \"kernel\" must be an array of n rows");
    m.kernel.reserve(std::size_t(m.n) * m.n);
    for (const json& row : rows) {
        if (!row.is_array() || int(row.size()) != m.n)
            throw ParseError("kernel rows must have n numeric entries");
        for (const json& x : row) {
            if (!x.is_number()) throw ParseError("kernel rows must have n numeric entries");
            m.kernel.push_back(x.get<double>());
        }
    }
    if (j.contains("cost_density")) m.cost_density = read_vector(j, "cost_density", m.n);

    if (!finite_all(m.weights)) throw ValidationError("weights must be finite");
    double sum = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    if (!std::isfinite(sum) || std::fabs(sum - 1.0) > 1e-9)
        throw ValidationError("weights must sum to 1 (up to 1e-9)");
    for (double& w : m.weights) w /= sum;

    if (m.cost_density) {
        double norm = 0.0;
        for (int i = 0; i < m.n; ++i) norm += m.weights[i] * (*m.cost_density)[i];
        if (!std::isfinite(norm) || std::fabs(norm - 1.0) > 1e-9)
            throw ValidationError("cost_density must satisfy sum w_i c_i = 1 (up to 1e-9)");
        for (double& d : *m.cost_density) d /= norm;
    }

    m.validate();
    return m;
}

PopulationModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

void save_model(const PopulationModel& model, const std::string& path) {
    model.validate();
    json j;
    j["weights"] = model.weights;
    j["gamma"] = model.gamma;
    json rows = json::array();
    for (int i = 0; i < model.n; ++i) {
        json row = json::array();
        for (int col = 0; col < model.n; ++col) row.push_back(model.k(i, col));
        rows.push_back(row);
    }
    j["kernel"] = rows;
    if (model.cost_density) j["cost_density"] = *model.cost_density;

    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    out << j.dump(2) << "\n";
}

PopulationModel discretize_kernel(const std::function<double(double, double)>& k_fn,
                                  const std::function<double(double)>& gamma_fn,
                                  int n) {
    if (n <= 0) throw ValidationError("discretization needs at least one group");
    PopulationModel m;
    m.n = n;
    m.weights.assign(n, 1.0 / n);
    m.gamma.resize(n);
    m.kernel.resize(std::size_t(n) * n);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (i + 0.5) / n;
    for (int i = 0; i < n; ++i) {
        double g = gamma_fn(x[i]);
        if (!(g > 0.0) || !std::isfinite(g))
            throw ValidationError("gamma function must be positive on (0,1)");
        m.gamma[i] = g;
    }
    for (int i = 0; i < n; ++i)
        for (int col = 0; col < n; ++col) {
            double k = k_fn(x[i], x[col]);
            if (k < 0.0 || !std::isfinite(k))
                throw ValidationError("kernel function must be nonnegative on (0,1)^2");
            m.kernel[std::size_t(i) * n + col] = k;
        }
    // Equal weights sum to 1 exactly only up to roundoff; fix the last one.
    double sum = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    for (double& w : m.weights) w /= sum;
    m.validate();
    return m;
}

ConstraintSet ConstraintSet::box() { return ConstraintSet{}; }

ConstraintSet ConstraintSet::oscillation(double delta) {
    if (!(delta > 0.0) || delta > 1.0 || !std::isfinite(delta))
        throw ValidationError("oscillation width must lie in (0, 1]");
    ConstraintSet cs;
    cs.kind = Kind::Oscillation;
    cs.delta = delta;
    return cs;
}

ConstraintSet ConstraintSet::ordered(std::vector<int> order) {
    const int n = int(order.size());
    std::vector<char> seen(n, 0);
    for (int idx : order) {
        if (idx < 0 || idx >= n || seen[idx])
            throw ValidationError("ordering must be a permutation of 0..n-1");
        seen[idx] = 1;
    }
    ConstraintSet cs;
    cs.kind = Kind::Ordered;
    cs.order = std::move(order);
    return cs;
}

bool ConstraintSet::admits(const Strategy& s, double tol) const {
    for (double e : s.eta)
        if (e < -tol || e > 1.0 + tol) return false;
    switch (kind) {
        case Kind::Box:
            return true;
        case Kind::Oscillation: {
            auto [lo, hi] = std::minmax_element(s.eta.begin(), s.eta.end());
            return *hi - *lo <= delta + tol;
        }
        case Kind::Ordered: {
            if (order.size() != s.eta.size()) return false;
            for (std::size_t k = 0; k + 1 < order.size(); ++k)
                if (s.eta[order[k]] > s.eta[order[k + 1]] + tol) return false;
            return true;
        }
    }
    return false;
}

double cost(const PopulationModel& model, CostKind kind, const Strategy& s) {
    if (int(s.eta.size()) != model.n)
        throw ValidationError("strategy length disagrees with model");
    if (kind == CostKind::Affine && !model.cost_density)
        throw ValidationError("affine cost requires cost_density");
    double c = 0.0;
    for (int i = 0; i < model.n; ++i) {
        double d = kind == CostKind::Affine ? (*model.cost_density)[i] : 1.0;
        c += model.weights[i] * d * (1.0 - s.eta[i]);
    }
    return c;
}

std::vector<double> cost_density(const PopulationModel& model, CostKind kind) {
    if (kind == CostKind::Uniform) return std::vector<double>(model.n, 1.0);
    if (!model.cost_density) throw ValidationError("affine cost requires cost_density");
    return *model.cost_density;
}

namespace {

std::vector<double> clamp01(std::vector<double> v) {
    for (double& x : v) x = std::min(1.0, std::max(0.0, x));
    return v;
}

// Weighted isotonic regression (pool adjacent violators) for a nondecreasing
// fit of y against index order, with weights w.
std::vector<double> pava(const std::vector<double>& y, const std::vector<double>& w) {
    const int n = int(y.size());
    std::vector<double> value(n), weight(n);
    std::vector<int> count(n);
    int top = 0;
    for (int i = 0; i < n; ++i) {
        value[top] = y[i];
        weight[top] = w[i];
        count[top] = 1;
        ++top;
        while (top > 1 && value[top - 2] > value[top - 1]) {
            double wsum = weight[top - 2] + weight[top - 1];
            value[top - 2] = (weight[top - 2] * value[top - 2] +
                              weight[top - 1] * value[top - 1]) / wsum;
            weight[top - 2] = wsum;
            count[top - 2] += count[top - 1];
            --top;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (int b = 0; b < top; ++b) out.insert(out.end(), count[b], value[b]);
    return out;
}

// Exact minimizer over m in [0, 1-delta] of
// phi(m) = sum_i w_i dist(y_i, [m, m+delta])^2, which is convex piecewise
// quadratic with breakpoints at y_i and y_i - delta.
double best_window_anchor(const std::vector<double>& y, const std::vector<double>& w,
                          double delta) {
    const double lo = 0.0, hi = std::max(0.0, 1.0 - delta);
    auto phi = [&](double m) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double d = 0.0;
            if (y[i] < m) d = m - y[i];
            else if (y[i] > m + delta) d = y[i] - m - delta;
            s += w[i] * d * d;
        }
        return s;
    };
    auto dphi = [&](double m) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] < m) s += 2.0 * w[i] * (m - y[i]);
            else if (y[i] > m + delta) s -= 2.0 * w[i] * (y[i] - m - delta);
        }
        return s;
    };

    std::vector<double> pts{lo, hi};
    for (double yi : y) {
        if (yi > lo && yi < hi) pts.push_back(yi);
        double shifted = yi - delta;
        if (shifted > lo && shifted < hi) pts.push_back(shifted);
    }
    std::sort(pts.begin(), pts.end());

    if (dphi(lo) >= 0.0) return lo;
    if (dphi(hi) <= 0.0) return hi;
    double best = lo, best_phi = phi(lo);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        double a = pts[s], b = pts[s + 1];
        if (b - a < 1e-300) continue;
        double da = dphi(a), db = dphi(b);
        double cand;
        if (da >= 0.0) cand = a;
        else if (db <= 0.0) cand = b;
        else cand = a + (b - a) * (-da) / (db - da);  // dphi is linear inside
        double v = phi(cand);
        if (v < best_phi) { best_phi = v; best = cand; }
    }
    return best;
}

}  // namespace

Strategy project(const PopulationModel& model, const std::vector<double>& eta_raw,
                 const ConstraintSet& cs) {
    if (int(eta_raw.size()) != model.n)
        throw ValidationError("strategy length disagrees with model");
    switch (cs.kind) {
        case ConstraintSet::Kind::Box:
            return Strategy(clamp01(eta_raw));
        case ConstraintSet::Kind::Ordered: {
            if (int(cs.order.size()) != model.n)
                throw ValidationError("ordering length disagrees with model");
            std::vector<double> y(model.n), w(model.n);
            for (int k = 0; k < model.n; ++k) {
                y[k] = eta_raw[cs.order[k]];
                w[k] = model.weights[cs.order[k]];
            }
            std::vector<double> fit = pava(y, w);
            std::vector<double> out(model.n);
            for (int k = 0; k < model.n; ++k) out[cs.order[k]] = fit[k];
            return Strategy(clamp01(std::move(out)));
        }
        case ConstraintSet::Kind::Oscillation: {
            double m = best_window_anchor(eta_raw, model.weights, cs.delta);
            double hi = std::min(1.0, m + cs.delta);
            std::vector<double> out(model.n);
            for (int i = 0; i < model.n; ++i)
                out[i] = std::min(hi, std::max(m, eta_raw[i]));
            return Strategy(std::move(out));
        }
    }
    throw ValidationError("unknown constraint kind");
}

PopulationModel to_uniform_cost_model(const PopulationModel& model) {
    model.validate();
    if (!model.cost_density)
        throw ValidationError("to_uniform_cost_model requires cost_density");
    for (double d : *model.cost_density)
        if (d < 1e-9)
            throw ValidationError("cost_density entries must be at least 1e-9");
    PopulationModel out;
    out.n = model.n;
    out.gamma = model.gamma;
    out.weights.resize(model.n);
    out.kernel.resize(model.kernel.size());
    const std::vector<double>& d = *model.cost_density;
    for (int i = 0; i < model.n; ++i) out.weights[i] = model.weights[i] * d[i];
    // sum_i w_i d_i = 1 by the density normalization, so no reweighting needed.
    for (int i = 0; i < model.n; ++i)
        for (int j = 0; j < model.n; ++j)
            out.kernel[std::size_t(i) * model.n + j] = model.k(i, j) / d[j];
    out.validate();
    return out;
}

}  // namespace parepi
