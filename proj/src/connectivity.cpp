// Kernel connectivity: invariant sets, condensation, classification and the
// atom indicator strategy.
#include "parepi/connectivity.hpp"

#include <algorithm>

#include "parepi/errors.hpp"
#include "parepi/spectral.hpp"
#include "scc.hpp"

namespace parepi {

const char* to_string(KernelClass c) {
    switch (c) {
        case KernelClass::Degenerate: return "Degenerate";
        case KernelClass::Irreducible: return "Irreducible";
        case KernelClass::QuasiIrreducible: return "QuasiIrreducible";
        case KernelClass::Monatomic: return "Monatomic";
        case KernelClass::General: return "General";
    }
    return "Unknown";
}

bool is_invariant(const PopulationModel& model, const std::vector<int>& a) {
    model.validate();
    std::vector<char> in_a(model.n, 0);
    for (int idx : a) {
        if (idx < 0 || idx >= model.n) throw ValidationError("group index out of range");
        in_a[idx] = 1;
    }
    for (int i = 0; i < model.n; ++i) {
        if (in_a[i]) continue;
        for (int j = 0; j < model.n; ++j)
            if (in_a[j] && model.k(i, j) > 0.0) return false;
    }
    return true;
}

std::vector<std::vector<int>> condensation(const PopulationModel& model, double tol) {
    model.validate();
    return detail::scc_components(model.kernel.data(), model.n, tol);
}

namespace {

// A component has a non-zero induced kernel iff it contains a cycle: any
// component with two or more members is a cycle by strong connectivity, and a
// singleton needs a positive diagonal entry.
bool positive_block(const PopulationModel& model, const std::vector<int>& comp) {
    if (comp.size() >= 2) return true;
    return model.k(comp[0], comp[0]) > 0.0;
}

}  // namespace

ConnectivityReport classify(const PopulationModel& model) {
    ConnectivityReport rep;
    rep.sccs = condensation(model, 0.0);
    for (std::size_t s = 0; s < rep.sccs.size(); ++s)
        if (positive_block(model, rep.sccs[s])) rep.nonzero_atoms.push_back(int(s));

    const bool zero_kernel =
        std::all_of(model.kernel.begin(), model.kernel.end(), [](double k) { return k == 0.0; });
    if (zero_kernel) {
        rep.classification = KernelClass::Degenerate;
        return rep;
    }
    if (rep.sccs.size() == 1 && !rep.nonzero_atoms.empty()) {
        rep.classification = KernelClass::Irreducible;
        rep.omega_a = rep.sccs[0];
        return rep;
    }
    if (rep.nonzero_atoms.size() == 1) {
        const std::vector<int>& atom = rep.sccs[rep.nonzero_atoms[0]];
        std::vector<char> in_atom(model.n, 0);
        for (int idx : atom) in_atom[idx] = 1;
        bool vanishes_outside = true;
        for (int i = 0; i < model.n && vanishes_outside; ++i)
            for (int j = 0; j < model.n; ++j)
                if (model.k(i, j) > 0.0 && !(in_atom[i] && in_atom[j])) {
                    vanishes_outside = false;
                    break;
                }
        rep.classification =
            vanishes_outside ? KernelClass::QuasiIrreducible : KernelClass::Monatomic;
        rep.omega_a = atom;
        return rep;
    }
    rep.classification = KernelClass::General;
    return rep;
}

Strategy atom_indicator_strategy(const PopulationModel& model) {
    ConnectivityReport rep = classify(model);
    if (!rep.omega_a)
        throw NotMonatomic("kernel has no unique non-zero atom (classification " +
                           std::string(to_string(rep.classification)) + ")");
    Strategy s = Strategy::zeros(model.n);
    for (int idx : *rep.omega_a) s[idx] = 1.0;
    return s;
}

}  // namespace parepi
