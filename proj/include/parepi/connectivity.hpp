// Connectivity structure of the transmission kernel: invariant sets, the
// condensation into strongly connected components, classification of the
// kernel (irreducible / monatomic / ...), and the indicator strategy of the
// unique non-zero atom used to seed worst-case searches.
#pragma once

#include <optional>
#include <vector>

#include "parepi/model.hpp"

namespace parepi {

enum class KernelClass { Degenerate, Irreducible, QuasiIrreducible, Monatomic, General };

const char* to_string(KernelClass c);

struct ConnectivityReport {
    // Strongly connected components of the support digraph (edge j -> i iff
    // kernel(i, j) > 0), members sorted ascending, components ordered so that
    // infecting components precede the components they infect.
    std::vector<std::vector<int>> sccs;
    // Indices into sccs of components whose induced kernel submatrix has
    // positive spectral radius (the non-zero atoms).
    std::vector<int> nonzero_atoms;
    KernelClass classification = KernelClass::Degenerate;
    // Group indices of the unique non-zero atom; set for Irreducible,
    // QuasiIrreducible and Monatomic kernels.
    std::optional<std::vector<int>> omega_a;
};

// True iff the groups in a do not infect their complement:
// kernel(i, j) = 0 for every j in a, i not in a.
bool is_invariant(const PopulationModel& model, const std::vector<int>& a);

// Strongly connected components of the kernel support (entries > tol count
// as edges), in the order described on ConnectivityReport::sccs.
std::vector<std::vector<int>> condensation(const PopulationModel& model, double tol = 0.0);

// Degenerate iff the kernel is identically zero; Irreducible iff the support
// is a single strongly connected component with positive radius; Monatomic
// iff exactly one component has positive induced spectral radius, upgraded to
// QuasiIrreducible when the kernel vanishes outside the atom's block; General
// otherwise.
ConnectivityReport classify(const PopulationModel& model);

// eta = 1 on the unique non-zero atom, 0 elsewhere. Throws NotMonatomic when
// the classification admits no unique atom.
Strategy atom_indicator_strategy(const PopulationModel& model);

}  // namespace parepi
