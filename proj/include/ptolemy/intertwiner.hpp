#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ptolemy/heisenberg.hpp"
#include "ptolemy/opcalc.hpp"
#include "ptolemy/qdilog.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy::itw {

// One factor of a compiled intertwiner, in application order. Monomial and
// Perm factors carry their exact linear action; Auto factors (the
// functional-calculus unitaries F(x_k, y_k)) contribute the identity to the
// linear part and are evaluated numerically only on <= 2 local variables.
struct MonomialFactor {
    heis::LinearSymplecticMap map;
    int arc = 0;
    int tropical_sign = +1;  // +1 selects the conjugation-table map
};
struct AutoFactor {
    qd::QDParams params;
    int arc = 0;
    std::vector<std::vector<int>> eps;  // exchange matrix at application time
};
struct PermFactor {
    heis::LinearSymplecticMap map;
    std::vector<int> sigma;
};
using Factor = std::variant<MonomialFactor, AutoFactor, PermFactor>;

struct IntertwinerWord {
    tri::LabeledTriangulation source;  // Hilbert-space domain (= word end)
    tri::LabeledTriangulation target;  // codomain (= word start)
    qd::QDParams params;
    std::vector<Factor> factors;  // applied first-to-last
    bool phase_undetermined = true;

    heis::LinearSymplecticMap linear_part() const;
};

// Compile a groupoid word into its intertwiner descriptor. Per flip mu_k the
// word contributes the monomial part then the automorphism part, with the
// overall factor order reversed (the intertwiner composes contravariantly).
// Tropical signs are tracked along the word so that the flip relations hold
// as exact identities of linear parts; a fresh flip (all-positive tracking
// column) uses the table map itself.
IntertwinerWord compile(const tri::GroupoidWord& w, const qd::QDParams& params);

// Eager cancellation of adjacent inverse pairs (mu_k mu_k, P_sigma P_gamma
// merges); rewrites stay within the flip/permutation relations.
tri::GroupoidWord simplify(const tri::GroupoidWord& w);

struct RepresentationElement {
    tri::MappingClassLoop loop;
    IntertwinerWord word;
    qd::QDParams params;
};

RepresentationElement rho(const tri::MappingClassLoop& loop, const qd::QDParams& params);

// Composition by word concatenation (the group law on representation
// elements mirrors K_{D,h1.D} o K_{h1.D,(h1 h2).D} = K_{D,(h1 h2).D}).
RepresentationElement rho_product(const RepresentationElement& a,
                                  const RepresentationElement& b,
                                  const qd::QDParams& params);

struct RelationEntry {
    std::string relation;
    std::string detail;
    bool triangulation_ok = false;
    bool linear_ok = false;
    double pentagon_residual = -1.0;  // < 0 when not applicable
    bool ok = false;
};

struct RelationReport {
    std::vector<RelationEntry> entries;
    bool all_ok = true;
    double max_pentagon_residual = -1.0;
};

struct RelationOptions {
    int grid_N = 512;
    double grid_L = 12.0;
    int pentagon_states = 2;
    double pentagon_tol = 1e-3;
    std::uint64_t seed = 7;
    bool run_numeric = true;
    bool corrupt_control = false;  // corrupt one Auto factor as a negative control
    int workers = 1;
};

// Enumerate the flip/permutation relation instances on T: exact closure of
// the triangulation word, exact identity of linear parts, and (for the
// pentagon, which fits in two local variables) the numerical operator
// residual.
RelationReport verify_relation_suite(const tri::LabeledTriangulation& T,
                                     const qd::QDParams& params,
                                     const RelationOptions& opt = {});

}  // namespace ptolemy::itw
