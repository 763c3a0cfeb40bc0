// Command-line front end: kernel analysis, SIS simulation, frontier tracing,
// lattice oracle dumps and SVG plots of cost-loss curves. Errors print a
// single "error: <Code>: <message>" line on stderr and map to stable exit
// codes so scripts can dispatch on failure kinds.
#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parepi/connectivity.hpp"
#include "parepi/equilibrium.hpp"
#include "parepi/errors.hpp"
#include "parepi/frontier.hpp"
#include "parepi/model.hpp"
#include "parepi/spectral.hpp"

using namespace parepi;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Writes to stdout for "-", otherwise to the named file.
void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot open \"" + path + "\" for writing");
    f << text;
    if (!f.good()) throw IoError("failed writing \"" + path + "\"");
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace((unsigned char)item[used])) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("invalid number \"" + item + "\" in list");
        }
    }
    if (out.empty()) throw ParseError("empty number list");
    return out;
}

// --eta accepts an inline comma list or @file.json holding {"eta": [...]}.
Strategy parse_eta(const std::string& spec, int n) {
    std::vector<double> values;
    if (!spec.empty() && spec[0] == '@') {
        std::string path = spec.substr(1);
        std::ifstream f(path);
        if (!f) throw IoError("cannot open eta file \"" + path + "\"");
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid eta JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("eta") || !j.at("eta").is_array())
            throw ParseError("eta file must hold an object with an \"eta\" array");
        for (const nlohmann::json& x : j.at("eta")) {
            if (!x.is_number()) throw ParseError("eta entries must be numeric");
            values.push_back(x.get<double>());
        }
    } else {
        values = parse_number_list(spec);
    }
    if (int(values.size()) != n)
        throw ValidationError("eta has " + std::to_string(values.size()) + " entries, model has " +
                              std::to_string(n) + " groups");
    for (double v : values)
        if (v < 0.0 || v > 1.0) throw ValidationError("eta entries must lie in [0, 1]");
    return Strategy(std::move(values));
}

LossKind parse_loss(const std::string& s) {
    if (s == "re") return LossKind::Re;
    if (s == "i") return LossKind::I;
    throw ParseError("loss must be \"re\" or \"i\", got \"" + s + "\"");
}

CostKind parse_cost(const std::string& s) {
    if (s == "uniform") return CostKind::Uniform;
    if (s == "affine") return CostKind::Affine;
    throw ParseError("cost must be \"uniform\" or \"affine\", got \"" + s + "\"");
}

// box | osc:DELTA | ord | ord:p0,p1,...
ConstraintSet parse_constraint(const std::string& s, int n) {
    if (s == "box") return ConstraintSet::box();
    if (s.rfind("osc:", 0) == 0) {
        try {
            return ConstraintSet::oscillation(std::stod(s.substr(4)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("invalid oscillation bound in \"" + s + "\"");
        }
    }
    if (s == "ord") {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        return ConstraintSet::ordered(std::move(order));
    }
    if (s.rfind("ord:", 0) == 0) {
        std::vector<double> raw = parse_number_list(s.substr(4));
        std::vector<int> order;
        for (double x : raw) {
            int v = int(x);
            if (double(v) != x) throw ParseError("order entries must be integers");
            order.push_back(v);
        }
        return ConstraintSet::ordered(std::move(order));
    }
    throw ParseError("constraint must be box, osc:DELTA, ord or ord:LIST, got \"" + s + "\"");
}

std::string frontier_csv(const FrontierCurve& curve, int n) {
    std::string out = "c,ell,status";
    for (int i = 0; i < n; ++i) out += ",eta_" + std::to_string(i + 1);
    out += "\n";
    for (const FrontierPoint& pt : curve.points) {
        out += fmt(pt.cost) + "," + fmt(pt.loss) + "," + to_string(pt.status);
        for (int i = 0; i < n; ++i) out += "," + fmt(pt.eta[i]);
        out += "\n";
    }
    if (curve.c0) out += "# c0," + fmt(*curve.c0) + "\n";
    return out;
}

int run_analyze(const std::string& model_path, const std::string& out_path) {
    PopulationModel m = load_model(model_path);
    ConnectivityReport rep = classify(m);
    double r0 = r_e(m, Strategy::ones(m.n));
    double i0 = infected_fraction(m, Strategy::ones(m.n));
    nlohmann::json j;
    j["classification"] = to_string(rep.classification);
    j["sccs"] = rep.sccs;
    j["nonzero_atoms"] = rep.nonzero_atoms;
    if (rep.omega_a)
        j["omega_a"] = *rep.omega_a;
    else
        j["omega_a"] = nullptr;
    j["r0"] = r0;
    j["i0"] = i0;
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int run_simulate(const std::string& model_path, const std::string& eta_spec, double t_max,
                 double dt, const std::string& out_path) {
    PopulationModel m = load_model(model_path);
    Strategy eta = eta_spec.empty() ? Strategy::ones(m.n) : parse_eta(eta_spec, m.n);
    if (dt <= 0.0) {
        double cap = 0.0;
        for (int i = 0; i < m.n; ++i) {
            double row = m.gamma[i];
            for (int j = 0; j < m.n; ++j) row += m.k(i, j) * m.weights[j];
            cap = std::max(cap, row);
        }
        dt = 0.1 / cap;
    }
    Trajectory tr = integrate_sis(m, eta, std::vector<double>(m.n, 1.0), t_max, dt);
    std::string out = "t";
    for (int i = 0; i < m.n; ++i) out += ",g" + std::to_string(i + 1);
    out += "\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out += fmt(tr.times[k]);
        for (int i = 0; i < m.n; ++i) out += "," + fmt(tr.states[k][i]);
        out += "\n";
    }
    write_output(out_path, out);
    return 0;
}

int run_frontier(const std::string& model_path, const std::string& loss_s,
                 const std::string& cost_s, const std::string& cs_s, bool anti, int grid,
                 std::uint64_t seed, double loss_tol, double oracle_tol,
                 const std::string& out_path) {
    PopulationModel m = load_model(model_path);
    Problem p(m, parse_loss(loss_s), parse_cost(cost_s), parse_constraint(cs_s, m.n));
    SolverOpts opts;
    opts.seed = seed;
    opts.loss_tol = loss_tol;
    opts.oracle_tol = oracle_tol;
    FrontierCurve curve = anti ? anti_pareto_frontier(p, grid, opts)
                               : pareto_frontier(p, grid, opts);
    int rough = 0;
    for (const FrontierPoint& pt : curve.points)
        if (pt.status == SolveStatus::BestEffort) ++rough;
    if (rough > 0)
        std::fprintf(stderr, "warning: %d of %zu frontier points are best-effort only\n", rough,
                     curve.points.size());
    write_output(out_path, frontier_csv(curve, m.n));
    return 0;
}

int run_oracle(const std::string& model_path, const std::string& loss_s,
               const std::string& cost_s, const std::string& cs_s, int steps,
               const std::string& out_path) {
    PopulationModel m = load_model(model_path);
    Problem p(m, parse_loss(loss_s), parse_cost(cost_s), parse_constraint(cs_s, m.n));
    GridOracle g = grid_oracle(p, steps);
    std::string out = "c,ell\n";
    for (const Outcome& o : g.outcomes) out += fmt(o.cost) + "," + fmt(o.loss) + "\n";
    write_output(out_path, out);
    return 0;
}

std::vector<std::pair<double, double>> read_curve_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open \"" + path + "\"");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;  // header
            continue;
        }
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw ParseError("malformed CSV row \"" + line + "\" in " + path);
        try {
            pts.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            throw ParseError("non-numeric CSV row \"" + line + "\" in " + path);
        }
    }
    return pts;
}

std::string svg_polyline(const std::vector<std::pair<double, double>>& pts, double ymax,
                         const char* style) {
    auto px = [](double c) { return 60.0 + c * 540.0; };
    auto py = [&](double l) { return 420.0 - (ymax > 0 ? l / ymax : 0.0) * 380.0; };
    std::string s = "  <polyline fill=\"none\" " + std::string(style) + " points=\"";
    for (const auto& [c, l] : pts) s += fmt(px(c)) + "," + fmt(py(l)) + " ";
    s += "\"/>\n";
    return s;
}

int run_plot(const std::string& pareto_path, const std::string& anti_path,
             const std::string& samples_path, const std::string& out_path) {
    std::vector<std::pair<double, double>> pareto, anti, samples;
    if (!pareto_path.empty()) pareto = read_curve_csv(pareto_path);
    if (!anti_path.empty()) anti = read_curve_csv(anti_path);
    if (!samples_path.empty()) samples = read_curve_csv(samples_path);
    if (pareto.empty() && anti.empty() && samples.empty())
        throw ValidationError("nothing to plot: pass --pareto, --anti or --samples");
    double ymax = 0.0;
    for (const auto* set : {&pareto, &anti, &samples})
        for (const auto& [c, l] : *set) ymax = std::max(ymax, l);
    ymax = ymax > 0 ? ymax * 1.05 : 1.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\">\n";
    svg += "  <rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "  <line x1=\"60\" y1=\"420\" x2=\"600\" y2=\"420\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
    svg += "  <text x=\"330\" y=\"460\" text-anchor=\"middle\" font-size=\"14\">cost</text>\n";
    svg += "  <text x=\"20\" y=\"230\" text-anchor=\"middle\" font-size=\"14\" "
           "transform=\"rotate(-90 20 230)\">loss</text>\n";
    svg += "  <text x=\"60\" y=\"438\" text-anchor=\"middle\" font-size=\"11\">0</text>\n";
    svg += "  <text x=\"600\" y=\"438\" text-anchor=\"middle\" font-size=\"11\">1</text>\n";
    svg += "  <text x=\"52\" y=\"424\" text-anchor=\"end\" font-size=\"11\">0</text>\n";
    svg += "  <text x=\"52\" y=\"48\" text-anchor=\"end\" font-size=\"11\">" + fmt(ymax) +
           "</text>\n";
    auto px = [](double c) { return 60.0 + c * 540.0; };
    auto py = [&](double l) { return 420.0 - l / ymax * 380.0; };
    for (const auto& [c, l] : samples)
        svg += "  <circle cx=\"" + fmt(px(c)) + "\" cy=\"" + fmt(py(l)) +
               "\" r=\"2\" fill=\"#999999\"/>\n";
    if (!pareto.empty())
        svg += svg_polyline(pareto, ymax, "stroke=\"#1f6fd0\" stroke-width=\"2\"");
    if (!anti.empty())
        svg += svg_polyline(anti, ymax,
                            "stroke=\"#d03a2f\" stroke-width=\"2\" stroke-dasharray=\"6 4\"");
    svg += "</svg>\n";
    write_output(out_path, svg);
    return 0;
}

int error_exit_code(const Error& e) {
    const std::string& c = e.code();
    if (c == "ParseError") return 3;
    if (c == "ValidationError") return 4;
    if (c == "NoConvergence") return 5;
    if (c == "DegenerateEigenvalue") return 6;
    if (c == "NotMonatomic") return 7;
    if (c == "InfeasibleCost") return 8;
    if (c == "InfeasibleLoss") return 9;
    if (c == "TooLarge") return 10;
    if (c == "StepSizeError") return 11;
    if (c == "IoError") return 12;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metapopulation vaccination analysis"};
    app.require_subcommand(1);

    std::string model_path, out_path = "-";
    std::string loss_s = "re", cost_s = "uniform", cs_s = "box";
    std::string eta_spec, pareto_path, anti_path, samples_path;
    double t_max = 50.0, dt = 0.0, loss_tol = 1e-6, oracle_tol = 1e-4;
    int grid = 21, steps = 50;
    std::uint64_t seed = 0;
    bool anti = false;

    CLI::App* an = app.add_subcommand("analyze", "Kernel connectivity, r0 and endemic fraction");
    an->add_option("--model", model_path, "model JSON file")->required();
    an->add_option("--out", out_path, "output path or - for stdout");

    CLI::App* sim = app.add_subcommand("simulate", "Integrate the SIS dynamics from all-infected");
    sim->add_option("--model", model_path, "model JSON file")->required();
    sim->add_option("--eta", eta_spec, "strategy: comma list or @file.json");
    sim->add_option("--t-max", t_max, "integration horizon");
    sim->add_option("--dt", dt, "step size; 0 picks the largest stable step");
    sim->add_option("--out", out_path, "output path or - for stdout");

    CLI::App* fr = app.add_subcommand("frontier", "Trace the cost-loss frontier");
    fr->add_option("--model", model_path, "model JSON file")->required();
    fr->add_option("--loss", loss_s, "re or i");
    fr->add_option("--cost", cost_s, "uniform or affine");
    fr->add_option("--constraint", cs_s, "box, osc:DELTA, ord or ord:LIST");
    fr->add_flag("--anti", anti, "trace the worst-case frontier instead");
    fr->add_option("--grid", grid, "number of grid points");
    fr->add_option("--seed", seed, "solver seed");
    fr->add_option("--loss-tol", loss_tol, "loss tolerance for inversions");
    fr->add_option("--oracle-tol", oracle_tol, "agreement margin for oracle verification");
    fr->add_option("--out", out_path, "output path or - for stdout");

    CLI::App* orc = app.add_subcommand("oracle", "Brute-force lattice scan of (cost, loss)");
    orc->add_option("--model", model_path, "model JSON file")->required();
    orc->add_option("--loss", loss_s, "re or i");
    orc->add_option("--cost", cost_s, "uniform or affine");
    orc->add_option("--constraint", cs_s, "box, osc:DELTA, ord or ord:LIST");
    orc->add_option("--steps", steps, "lattice steps per group");
    orc->add_option("--out", out_path, "output path or - for stdout");

    CLI::App* pl = app.add_subcommand("plot", "Render frontier CSVs as an SVG");
    pl->add_option("--pareto", pareto_path, "frontier CSV");
    pl->add_option("--anti", anti_path, "worst-case frontier CSV");
    pl->add_option("--samples", samples_path, "scatter CSV with c,ell rows");
    pl->add_option("--out", out_path, "output path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: Usage: %s\n", e.what());
        return 2;
    }

    try {
        if (an->parsed()) return run_analyze(model_path, out_path);
        if (sim->parsed()) return run_simulate(model_path, eta_spec, t_max, dt, out_path);
        if (fr->parsed())
            return run_frontier(model_path, loss_s, cost_s, cs_s, anti, grid, seed, loss_tol,
                                oracle_tol, out_path);
        if (orc->parsed()) return run_oracle(model_path, loss_s, cost_s, cs_s, steps, out_path);
        if (pl->parsed()) return run_plot(pareto_path, anti_path, samples_path, out_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: Internal: %s\n", e.what());
        return 1;
    }
    return 2;
}
