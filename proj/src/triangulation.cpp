#include "ptolemy/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace ptolemy::tri {

namespace {

int positive_part(int a) { return a > 0 ? a : 0; }

}  // namespace

LabeledTriangulation LabeledTriangulation::build(
    const SurfaceSignature& sig, int n_triangles, const Gluing& gluing,
    const std::vector<std::pair<SideRef, int>>& arc_labels) {
    if (sig.euler() >= 0)
        throw EulerMismatch("surface (" + std::to_string(sig.genus) + "," +
                            std::to_string(sig.punctures) + ") has non-negative Euler characteristic");
    if (n_triangles != sig.triangle_count())
        throw WrongArcCount("expected " + std::to_string(sig.triangle_count()) +
                            " triangles, got " + std::to_string(n_triangles));

    const int slots = 3 * n_triangles;
    auto slot_id = [&](const SideRef& s) { return 3 * s.tri + s.side; };
    auto slot_ok = [&](const SideRef& s) {
        return s.tri >= 0 && s.tri < n_triangles && s.side >= 0 && s.side < 3;
    };

    // Involution check.
    std::vector<int> partner(slots, -1);
    for (const auto& [a, b] : gluing) {
        if (!slot_ok(a) || !slot_ok(b)) throw BadGluing("side reference out of range");
        if (slot_id(a) == slot_id(b)) throw BadGluing("gluing has a fixed point");
        if (partner[slot_id(a)] != -1 || partner[slot_id(b)] != -1)
            throw BadGluing("side glued more than once");
        partner[slot_id(a)] = slot_id(b);
        partner[slot_id(b)] = slot_id(a);
    }
    for (int s = 0; s < slots; ++s)
        if (partner[s] == -1) throw BadGluing("unglued side slot " + std::to_string(s));

    const int n_arcs = slots / 2;
    if (n_arcs != sig.arc_count())
        throw WrongArcCount("expected " + std::to_string(sig.arc_count()) + " arcs, got " +
                            std::to_string(n_arcs));

    // Orbits -> arc ids via the provided labels (1-based in the interface).
    std::vector<int> arc_of_slot(slots, -1);
    std::vector<bool> label_used(n_arcs, false);
    for (const auto& [rep, label] : arc_labels) {
        if (!slot_ok(rep)) throw BadGluing("label representative out of range");
        if (label < 1 || label > n_arcs)
            throw WrongArcCount("arc label " + std::to_string(label) + " outside 1.." +
                                std::to_string(n_arcs));
        int id = label - 1;
        if (label_used[id]) throw BadGluing("duplicate arc label " + std::to_string(label));
        label_used[id] = true;
        int s = slot_id(rep);
        if (arc_of_slot[s] != -1) throw BadGluing("two labels on one gluing orbit");
        arc_of_slot[s] = id;
        arc_of_slot[partner[s]] = id;
    }
    for (int s = 0; s < slots; ++s)
        if (arc_of_slot[s] == -1) throw BadGluing("gluing orbit without an arc label");

    LabeledTriangulation T;
    T.sig_ = sig;
    T.tri_.resize(n_triangles);
    for (int t = 0; t < n_triangles; ++t)
        for (int s = 0; s < 3; ++s) T.tri_[t][s] = arc_of_slot[3 * t + s];
    T.canonicalize();
    T.index_arcs();
    T.validate();
    T.compute_cycles();
    return T;
}

LabeledTriangulation LabeledTriangulation::from_triples(const SurfaceSignature& sig,
                                                        std::vector<Triple> triples) {
    if (sig.euler() >= 0) throw EulerMismatch("non-negative Euler characteristic");
    LabeledTriangulation T;
    T.sig_ = sig;
    T.tri_ = std::move(triples);
    if (int(T.tri_.size()) != sig.triangle_count())
        throw WrongArcCount("triangle count mismatch");
    T.canonicalize();
    T.index_arcs();
    T.validate();
    T.compute_cycles();
    return T;
}

void LabeledTriangulation::canonicalize() {
    for (auto& t : tri_) {
        Triple best = t;
        for (int r = 1; r < 3; ++r) {
            Triple rot = {t[r], t[(r + 1) % 3], t[(r + 2) % 3]};
            if (rot < best) best = rot;
        }
        t = best;
    }
    std::sort(tri_.begin(), tri_.end());
}

void LabeledTriangulation::index_arcs() {
    const int A = sig_.arc_count();
    slots_.assign(A, {SideRef{-1, -1}, SideRef{-1, -1}});
    std::vector<int> seen(A, 0);
    for (int t = 0; t < int(tri_.size()); ++t)
        for (int s = 0; s < 3; ++s) {
            int a = tri_[t][s];
            if (a < 0 || a >= A) throw WrongArcCount("arc id out of range");
            if (seen[a] >= 2)
                throw BadGluing("arc " + std::to_string(a + 1) + " occurs on more than two sides");
            slots_[a][seen[a]++] = SideRef{t, s};
        }
    for (int a = 0; a < A; ++a)
        if (seen[a] != 2) throw BadGluing("arc " + std::to_string(a + 1) + " occurs only once");
}

void LabeledTriangulation::validate() {
    for (const auto& t : tri_)
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw SelfFoldedTriangle("triangle with repeated arc " + key());
}

void LabeledTriangulation::compute_cycles() {
    // Walk corners around each puncture: from corner (t,c), cross the
    // ccw-next side (t,c+1) to its partner slot (t',s'); the corner reached
    // is (t',s').
    const int n_tri = int(tri_.size());
    std::vector<bool> visited(3 * n_tri, false);
    cycles_.clear();
    for (int t = 0; t < n_tri; ++t)
        for (int c = 0; c < 3; ++c) {
            if (visited[3 * t + c]) continue;
            std::vector<SideRef> cycle;
            SideRef cur{t, c};
            while (!visited[3 * cur.tri + cur.side]) {
                visited[3 * cur.tri + cur.side] = true;
                cycle.push_back(cur);
                SideRef next_side{cur.tri, (cur.side + 1) % 3};
                auto [u, v] = arc_slots(arc_at(next_side));
                SideRef landed = (u == next_side) ? v : u;
                cur = landed;
            }
            cycles_.push_back(std::move(cycle));
        }
    // Deterministic puncture order: cycles listed by minimal member, and the
    // walk above already starts each at its minimal member because slots are
    // scanned in order.
    std::sort(cycles_.begin(), cycles_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    if (int(cycles_.size()) != sig_.punctures)
        throw EulerMismatch("corner cycles " + std::to_string(cycles_.size()) +
                            " != punctures " + std::to_string(sig_.punctures));
    int A = sig_.arc_count();
    if (int(tri_.size()) - A + sig_.punctures != 2 - 2 * sig_.genus)
        throw EulerMismatch("triangles - arcs + punctures != 2 - 2g");

    valences_.assign(A, std::vector<int>(sig_.punctures, 0));
    for (int p = 0; p < int(cycles_.size()); ++p)
        for (const auto& corner : cycles_[p]) {
            SideRef crossed{corner.tri, (corner.side + 1) % 3};
            valences_[arc_at(crossed)][p] += 1;
        }
}

std::pair<SideRef, SideRef> LabeledTriangulation::arc_slots(int arc) const {
    return {slots_[arc][0], slots_[arc][1]};
}

bool LabeledTriangulation::flip_is_legal(int arc) const {
    if (arc < 0 || arc >= arc_count()) return false;
    auto [s1, s2] = arc_slots(arc);
    if (s1.tri == s2.tri) return false;
    int B = arc_at({s1.tri, (s1.side + 2) % 3});
    int C = arc_at({s2.tri, (s2.side + 1) % 3});
    int D = arc_at({s2.tri, (s2.side + 2) % 3});
    int A = arc_at({s1.tri, (s1.side + 1) % 3});
    return B != C && D != A;
}

LabeledTriangulation LabeledTriangulation::flipped(int arc) const {
    if (arc < 0 || arc >= arc_count()) throw IllegalFlip("arc out of range");
    auto [s1, s2] = arc_slots(arc);
    if (s1.tri == s2.tri) throw IllegalFlip("arc borders one triangle twice");
    // Quadrilateral boundary in ccw order: a,b on the first triangle after
    // the diagonal, then c,d on the second.
    int a = arc_at({s1.tri, (s1.side + 1) % 3});
    int b = arc_at({s1.tri, (s1.side + 2) % 3});
    int c = arc_at({s2.tri, (s2.side + 1) % 3});
    int d = arc_at({s2.tri, (s2.side + 2) % 3});
    if (b == c || d == a)
        throw IllegalFlip("flip at arc " + std::to_string(arc + 1) +
                          " would create a self-folded triangle");
    LabeledTriangulation out;
    out.sig_ = sig_;
    out.tri_ = tri_;
    out.tri_[s1.tri] = {arc, b, c};
    out.tri_[s2.tri] = {arc, d, a};
    out.canonicalize();
    out.index_arcs();
    out.validate();
    out.compute_cycles();
    return out;
}

LabeledTriangulation LabeledTriangulation::permuted(const std::vector<int>& sigma) const {
    if (int(sigma.size()) != arc_count()) throw InputError("permutation size mismatch");
    std::vector<bool> hit(sigma.size(), false);
    for (int v : sigma) {
        if (v < 0 || v >= int(sigma.size()) || hit[v]) throw InputError("not a permutation");
        hit[v] = true;
    }
    LabeledTriangulation out;
    out.sig_ = sig_;
    out.tri_ = tri_;
    for (auto& t : out.tri_)
        for (int& a : t) a = sigma[a];
    out.canonicalize();
    out.index_arcs();
    out.validate();
    out.compute_cycles();
    return out;
}

std::string LabeledTriangulation::key() const {
    std::ostringstream os;
    os << sig_.genus << ';' << sig_.punctures << ';';
    for (const auto& t : tri_) os << t[0] << ',' << t[1] << ',' << t[2] << '|';
    return os.str();
}

ExchangeMatrix exchange_matrix(const LabeledTriangulation& T) {
    const int A = T.arc_count();
    std::vector<std::vector<int>> a(A, std::vector<int>(A, 0));
    for (int t = 0; t < int(T.triangles().size()); ++t)
        for (int c = 0; c < 3; ++c) {
            int prev = T.triangles()[t][c];
            int next = T.triangles()[t][(c + 1) % 3];
            a[prev][next] += 1;
        }
    ExchangeMatrix out;
    out.eps.assign(A, std::vector<int>(A, 0));
    for (int i = 0; i < A; ++i)
        for (int j = 0; j < A; ++j) out.eps[i][j] = a[i][j] - a[j][i];
    out.valences = T.valences();
    return out;
}

std::vector<std::vector<int>> mutate_exchange(const std::vector<std::vector<int>>& eps, int k) {
    const int A = int(eps.size());
    if (k < 0 || k >= A) throw InputError("mutation index out of range");
    std::vector<std::vector<int>> out(A, std::vector<int>(A, 0));
    for (int i = 0; i < A; ++i)
        for (int j = 0; j < A; ++j) {
            if (i == k || j == k)
                out[i][j] = -eps[i][j];
            else
                out[i][j] = eps[i][j] + positive_part(eps[i][k]) * positive_part(eps[k][j]) -
                            positive_part(-eps[i][k]) * positive_part(-eps[k][j]);
        }
    return out;
}

LabeledTriangulation apply_move(const LabeledTriangulation& T, const Move& m) {
    if (std::holds_alternative<Flip>(m)) return T.flipped(std::get<Flip>(m).arc);
    return T.permuted(std::get<Permute>(m).sigma);
}

LabeledTriangulation GroupoidWord::end() const {
    LabeledTriangulation cur = start;
    for (const auto& m : moves) cur = apply_move(cur, m);
    return cur;
}

GroupoidWord GroupoidWord::then(const GroupoidWord& next) const {
    GroupoidWord out{start, moves};
    out.moves.insert(out.moves.end(), next.moves.begin(), next.moves.end());
    return out;
}

bool verify_loop(const MappingClassLoop& loop) {
    try {
        return loop.word.end() == loop.word.start;
    } catch (const IllegalFlip&) {
        return false;
    }
}

std::vector<int> perm_identity(int n) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = i;
    return s;
}

std::vector<int> perm_compose(const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> s(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) s[i] = outer[inner[i]];
    return s;
}

std::vector<int> perm_inverse(const std::vector<int>& s) {
    std::vector<int> inv(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) inv[s[i]] = int(i);
    return inv;
}

std::optional<std::vector<int>> find_label_matching(const LabeledTriangulation& T,
                                                    const LabeledTriangulation& B) {
    if (!(T.signature() == B.signature())) return std::nullopt;
    const int A = T.arc_count();
    const int n = int(T.triangles().size());
    std::vector<int> sigma(A, -1), inv(A, -1);
    std::vector<bool> used(n, false);

    // Map triangles of T to triangles of B (in some rotation), propagating a
    // consistent arc-label bijection. Sizes here are tiny, so plain
    // backtracking is fine.
    auto assign = [&](int from, int to) -> bool {
        if (sigma[from] == -1 && inv[to] == -1) {
            sigma[from] = to;
            inv[to] = from;
            return true;
        }
        return sigma[from] == to;
    };

    std::function<bool(int)> rec = [&](int t) -> bool {
        if (t == n) return true;
        const auto& src = T.triangles()[t];
        for (int bt = 0; bt < n; ++bt) {
            if (used[bt]) continue;
            const auto& dst = B.triangles()[bt];
            for (int r = 0; r < 3; ++r) {
                auto saved_sigma = sigma;
                auto saved_inv = inv;
                bool ok = true;
                for (int s = 0; s < 3 && ok; ++s) ok = assign(src[s], dst[(s + r) % 3]);
                if (ok) {
                    used[bt] = true;
                    if (rec(t + 1)) return true;
                    used[bt] = false;
                }
                sigma = std::move(saved_sigma);
                inv = std::move(saved_inv);
            }
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    // T and B are canonical, so the relabeled T equals B whenever the
    // triangle matching is consistent; re-check anyway.
    if (T.permuted(sigma) != B) return std::nullopt;
    return sigma;
}

PathResult find_path(const LabeledTriangulation& A, const LabeledTriangulation& B,
                     int max_depth) {
    if (!(A.signature() == B.signature()))
        throw InputError("find_path endpoints on different surfaces");

    struct Node {
        LabeledTriangulation T;
        std::vector<Move> moves;
    };
    std::vector<Node> layer;
    layer.push_back({A, {}});
    std::set<std::string> seen{A.key()};
    // Per layer: exact matches first, then matches up to one final
    // label-matching permutation. Expansion order is deterministic (arcs in
    // increasing order), so the returned word is reproducible.
    for (int depth = 0;; ++depth) {
        for (const Node& n : layer)
            if (n.T == B) return {GroupoidWord{A, n.moves}, depth};
        for (const Node& n : layer)
            if (auto sigma = find_label_matching(n.T, B)) {
                std::vector<Move> moves = n.moves;
                moves.push_back(Permute{*sigma});
                return {GroupoidWord{A, std::move(moves)}, depth};
            }
        if (depth == max_depth) return {std::nullopt, depth};
        std::vector<Node> next;
        for (const Node& n : layer)
            for (int k = 0; k < A.arc_count(); ++k) {
                if (!n.T.flip_is_legal(k)) continue;
                LabeledTriangulation t = n.T.flipped(k);
                if (!seen.insert(t.key()).second) continue;
                std::vector<Move> moves = n.moves;
                moves.push_back(Flip{k});
                next.push_back({std::move(t), std::move(moves)});
            }
        if (next.empty()) return {std::nullopt, depth};
        layer = std::move(next);
    }
}

}  // namespace ptolemy::tri
