#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ptolemy/errors.hpp"

namespace ptolemy::tri {

struct SurfaceSignature {
    int genus = 0;
    int punctures = 0;

    int arc_count() const { return 6 * genus - 6 + 3 * punctures; }
    int triangle_count() const { return 4 * genus - 4 + 2 * punctures; }
    int euler() const { return 2 - 2 * genus - punctures; }

    friend bool operator==(const SurfaceSignature&, const SurfaceSignature&) = default;
};

// One side-slot of one triangle.
struct SideRef {
    int tri = 0;
    int side = 0;  // 0,1,2 in counterclockwise order

    friend bool operator==(const SideRef&, const SideRef&) = default;
    friend auto operator<=>(const SideRef&, const SideRef&) = default;
};

using Gluing = std::vector<std::pair<SideRef, SideRef>>;

// Combinatorial ideal triangulation with arcs labeled 0..A-1 (rendered 1..A
// at the JSON/CLI boundary). Each triangle is an oriented (counterclockwise)
// triple of arc ids; every arc id occurs in exactly two side-slots, and those
// two slots are glued to each other. Instances are kept in canonical form:
// each triple rotated to its lexicographically least rotation, triples sorted.
// Equality of canonical forms is equality of labeled triangulations, which is
// what makes the flip/permutation relations decidable by comparison.
class LabeledTriangulation {
  public:
    using Triple = std::array<int, 3>;

    static LabeledTriangulation build(const SurfaceSignature& sig, int n_triangles,
                                      const Gluing& gluing,
                                      const std::vector<std::pair<SideRef, int>>& arc_labels);

    // Convenience: build directly from canonical triples (labels 0-based).
    static LabeledTriangulation from_triples(const SurfaceSignature& sig,
                                             std::vector<Triple> triples);

    const SurfaceSignature& signature() const { return sig_; }
    const std::vector<Triple>& triangles() const { return tri_; }
    int arc_count() const { return sig_.arc_count(); }

    // The two side-slots lying on an arc.
    std::pair<SideRef, SideRef> arc_slots(int arc) const;
    int arc_at(const SideRef& s) const { return tri_[s.tri][s.side]; }

    // Corner cycles around punctures. Corner c of triangle t sits between
    // side c (counterclockwise-previous) and side (c+1)%3 (ccw-next). Cycles
    // are ordered by their lexicographically minimal (triangle, side) member,
    // which fixes the puncture indexing.
    const std::vector<std::vector<SideRef>>& corner_cycles() const { return cycles_; }

    // Valence counts v[arc][puncture] in {0,1,2}; an arc with both endpoints
    // at p contributes 2.
    const std::vector<std::vector<int>>& valences() const { return valences_; }

    bool flip_is_legal(int arc) const;
    LabeledTriangulation flipped(int arc) const;
    LabeledTriangulation permuted(const std::vector<int>& sigma) const;

    friend bool operator==(const LabeledTriangulation& a, const LabeledTriangulation& b) {
        return a.sig_ == b.sig_ && a.tri_ == b.tri_;
    }
    friend bool operator!=(const LabeledTriangulation& a, const LabeledTriangulation& b) {
        return !(a == b);
    }
    friend bool operator<(const LabeledTriangulation& a, const LabeledTriangulation& b) {
        return a.tri_ < b.tri_;
    }

    std::string key() const;  // compact string form of the canonical encoding

    // Empty placeholder; every real instance comes from build/from_triples.
    LabeledTriangulation() = default;

  private:
    void canonicalize();
    void index_arcs();
    void compute_cycles();
    void validate();

    SurfaceSignature sig_;
    std::vector<Triple> tri_;
    std::vector<std::array<SideRef, 2>> slots_;  // per arc
    std::vector<std::vector<SideRef>> cycles_;
    std::vector<std::vector<int>> valences_;
};

// Integer exchange matrix with its valence columns.
struct ExchangeMatrix {
    std::vector<std::vector<int>> eps;       // A x A, skew-symmetric
    std::vector<std::vector<int>> valences;  // A x n

    int size() const { return int(eps.size()); }
};

// eps_ij = a_ij - a_ji, where a_ij counts corners whose ccw-previous side
// lies on arc i and ccw-next side on arc j. The global sign of eps depends
// on this left/right choice; only internal consistency is meaningful.
ExchangeMatrix exchange_matrix(const LabeledTriangulation& T);

// Standard matrix mutation at k: eps'_ij = -eps_ij if k in {i,j}, else
// eps_ij + [eps_ik]_+ [eps_kj]_+ - [-eps_ik]_+ [-eps_kj]_+.
std::vector<std::vector<int>> mutate_exchange(const std::vector<std::vector<int>>& eps, int k);

struct Flip {
    int arc;
    friend bool operator==(const Flip&, const Flip&) = default;
};
struct Permute {
    std::vector<int> sigma;  // sigma[i] = new label of arc previously labeled i
    friend bool operator==(const Permute&, const Permute&) = default;
};
using Move = std::variant<Flip, Permute>;

struct GroupoidWord {
    LabeledTriangulation start;
    std::vector<Move> moves;

    LabeledTriangulation end() const;
    GroupoidWord then(const GroupoidWord& next) const;  // concatenation (same ambient surface)
};

LabeledTriangulation apply_move(const LabeledTriangulation& T, const Move& m);

// A groupoid word whose endpoint is label-preservingly isomorphic to its
// start; with canonical encodings that isomorphism is the identity, so the
// word represents a mapping class.
struct MappingClassLoop {
    GroupoidWord word;
};

bool verify_loop(const MappingClassLoop& loop);

struct PathResult {
    std::optional<GroupoidWord> word;
    int searched_radius = 0;
};

// Breadth-first search over flips with one final label-matching permutation.
// The flip graph is infinite; no completeness beyond max_depth is claimed.
PathResult find_path(const LabeledTriangulation& A, const LabeledTriangulation& B,
                     int max_depth);

// Label bijection sigma with permuted(T, sigma) == B, if one exists.
std::optional<std::vector<int>> find_label_matching(const LabeledTriangulation& T,
                                                    const LabeledTriangulation& B);

// Composition helpers for permutations given as sigma[i] = image of i.
std::vector<int> perm_identity(int n);
std::vector<int> perm_compose(const std::vector<int>& outer, const std::vector<int>& inner);
std::vector<int> perm_inverse(const std::vector<int>& s);

}  // namespace ptolemy::tri
