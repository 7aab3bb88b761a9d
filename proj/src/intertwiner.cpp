#include "ptolemy/intertwiner.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

namespace ptolemy::itw {

namespace {

using Mat64 = std::vector<std::vector<std::int64_t>>;

Mat64 identity64(int n) {
    Mat64 m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Mat64 mul64(const Mat64& a, const Mat64& b) {
    int n = int(a.size());
    Mat64 c(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

// Sign of the k-th column of the tracking matrix. Sign coherence (all
// entries of a tracking column share a sign) holds along every mutation
// word; a violation means the bookkeeping itself is broken.
int column_sign(const Mat64& C, int k) {
    bool pos = false, neg = false;
    for (const auto& row : C) {
        if (row[k] > 0) pos = true;
        if (row[k] < 0) neg = true;
    }
    if (pos && neg) throw Error("Internal", "tropical sign coherence violated");
    if (!pos && !neg) throw Error("Internal", "vanishing tropical column");
    return pos ? +1 : -1;
}

// Flip tracking matrix: identity except row k, where M_kk = -1 and
// M_ki = [eta * eps_ik]_+ for i != k. Coincides with the momentum-side
// action of monomial_map(eps, k, -eta).
Mat64 flip_tracker(const std::vector<std::vector<int>>& eps, int k, int eta) {
    int n = int(eps.size());
    Mat64 m = identity64(n);
    m[k][k] = -1;
    for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        int e = eta * eps[i][k];
        if (e > 0) m[k][i] = e;
    }
    return m;
}

Mat64 perm_tracker(const std::vector<int>& sigma) {
    int n = int(sigma.size());
    Mat64 m(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][sigma[i]] = 1;
    return m;
}

}  // namespace

heis::LinearSymplecticMap IntertwinerWord::linear_part() const {
    auto total = heis::LinearSymplecticMap::identity(source.arc_count());
    for (const auto& f : factors) {
        if (std::holds_alternative<MonomialFactor>(f))
            total = total.then(std::get<MonomialFactor>(f).map);
        else if (std::holds_alternative<PermFactor>(f))
            total = total.then(std::get<PermFactor>(f).map);
    }
    return total;
}

IntertwinerWord compile(const tri::GroupoidWord& w, const qd::QDParams& params) {
    const int A = w.start.arc_count();
    tri::LabeledTriangulation cur = w.start;
    auto eps = tri::exchange_matrix(cur).eps;
    Mat64 tracking = identity64(A);

    // Per-move factor blocks in word order; each block is already in
    // application order (monomial part first within a flip).
    std::vector<std::vector<Factor>> blocks;
    for (const auto& mv : w.moves) {
        if (std::holds_alternative<tri::Flip>(mv)) {
            int k = std::get<tri::Flip>(mv).arc;
            int eta = column_sign(tracking, k);
            std::vector<Factor> block;
            block.push_back(MonomialFactor{heis::monomial_map(eps, k, -eta), k, eta});
            block.push_back(AutoFactor{params, k, eps});
            blocks.push_back(std::move(block));
            tracking = mul64(tracking, flip_tracker(eps, k, eta));
            cur = cur.flipped(k);
            eps = tri::mutate_exchange(eps, k);
        } else {
            const auto& sigma = std::get<tri::Permute>(mv).sigma;
            blocks.push_back({PermFactor{heis::permutation_map(sigma), sigma}});
            tracking = mul64(tracking, perm_tracker(sigma));
            cur = cur.permuted(sigma);
            eps = tri::exchange_matrix(cur).eps;
        }
    }

    IntertwinerWord out;
    out.source = cur;
    out.target = w.start;
    out.params = params;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
        for (auto& f : *it) out.factors.push_back(std::move(f));
    return out;
}

tri::GroupoidWord simplify(const tri::GroupoidWord& w) {
    std::vector<tri::Move> moves = w.moves;
    bool changed = true;
    const int A = w.start.arc_count();
    auto is_identity_perm = [&](const std::vector<int>& s) {
        return s == tri::perm_identity(A);
    };
    while (changed) {
        changed = false;
        std::vector<tri::Move> next;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            if (i + 1 < moves.size()) {
                // mu_k mu_k cancels
                if (std::holds_alternative<tri::Flip>(moves[i]) &&
                    std::holds_alternative<tri::Flip>(moves[i + 1]) &&
                    std::get<tri::Flip>(moves[i]).arc == std::get<tri::Flip>(moves[i + 1]).arc) {
                    ++i;
                    changed = true;
                    continue;
                }
                // adjacent permutations merge
                if (std::holds_alternative<tri::Permute>(moves[i]) &&
                    std::holds_alternative<tri::Permute>(moves[i + 1])) {
                    auto merged = tri::perm_compose(std::get<tri::Permute>(moves[i + 1]).sigma,
                                                    std::get<tri::Permute>(moves[i]).sigma);
                    next.push_back(tri::Permute{std::move(merged)});
                    ++i;
                    changed = true;
                    continue;
                }
            }
            if (std::holds_alternative<tri::Permute>(moves[i]) &&
                is_identity_perm(std::get<tri::Permute>(moves[i]).sigma)) {
                changed = true;
                continue;
            }
            next.push_back(moves[i]);
        }
        moves = std::move(next);
    }
    return tri::GroupoidWord{w.start, std::move(moves)};
}

RepresentationElement rho(const tri::MappingClassLoop& loop, const qd::QDParams& params) {
    if (!tri::verify_loop(loop))
        throw InvalidLoop("word endpoint is not label-isomorphic to its start");
    RepresentationElement el;
    el.loop = loop;
    el.word = compile(loop.word, params);
    el.params = params;
    return el;
}

RepresentationElement rho_product(const RepresentationElement& a,
                                  const RepresentationElement& b,
                                  const qd::QDParams& params) {
    tri::MappingClassLoop loop{a.loop.word.then(b.loop.word)};
    return rho(loop, params);
}

namespace {

RelationEntry check_word_relation(const tri::LabeledTriangulation& T,
                                  const std::vector<tri::Move>& moves,
                                  const qd::QDParams& params, std::string name,
                                  std::string detail) {
    RelationEntry e;
    e.relation = std::move(name);
    e.detail = std::move(detail);
    tri::GroupoidWord w{T, moves};
    tri::LabeledTriangulation end = w.end();
    e.triangulation_ok = (end == T);
    e.linear_ok = compile(w, params).linear_part().is_identity();
    e.ok = e.triangulation_ok && e.linear_ok;
    return e;
}

std::vector<int> transposition(int n, int i, int j) {
    auto s = tri::perm_identity(n);
    std::swap(s[i], s[j]);
    return s;
}

}  // namespace

RelationReport verify_relation_suite(const tri::LabeledTriangulation& T,
                                     const qd::QDParams& params, const RelationOptions& opt) {
    RelationReport rep;
    const int A = T.arc_count();
    auto em = tri::exchange_matrix(T);

    auto push = [&](RelationEntry e) {
        rep.all_ok = rep.all_ok && e.ok;
        rep.entries.push_back(std::move(e));
    };

    for (int k = 0; k < A; ++k) {
        if (!T.flip_is_legal(k)) continue;
        if (!T.flipped(k).flip_is_legal(k)) continue;
        push(check_word_relation(T, {tri::Flip{k}, tri::Flip{k}}, params, "twice-flip",
                                 "arc " + std::to_string(k + 1)));
    }

    auto word_is_legal = [&](const std::vector<tri::Move>& moves) {
        try {
            tri::GroupoidWord{T, moves}.end();
            return true;
        } catch (const IllegalFlip&) {
            return false;
        }
    };

    for (int i = 0; i < A; ++i)
        for (int j = 0; j < A; ++j) {
            if (i == j) continue;
            std::vector<tri::Move> quad = {tri::Flip{i}, tri::Flip{j}, tri::Flip{i},
                                           tri::Flip{j}};
            if (em.eps[i][j] == 0 && word_is_legal(quad))
                push(check_word_relation(T, quad, params, "quadrilateral",
                                         "arcs " + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1)));
            std::vector<tri::Move> pent = {tri::Flip{i}, tri::Flip{j}, tri::Flip{i},
                                           tri::Flip{j}, tri::Flip{i},
                                           tri::Permute{transposition(A, i, j)}};
            if (std::abs(em.eps[i][j]) == 1 && word_is_legal(pent))
                push(check_word_relation(T, pent, params, "pentagon",
                                         "arcs " + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1)));
        }

    // Prop 4.2 relations with a deterministic set of permutations.
    std::mt19937_64 rng(opt.seed);
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
        auto sigma = tri::perm_identity(A);
        auto gamma = tri::perm_identity(A);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::shuffle(gamma.begin(), gamma.end(), rng);
        auto sg_inv = tri::perm_inverse(tri::perm_compose(sigma, gamma));
        push(check_word_relation(
            T, {tri::Permute{gamma}, tri::Permute{sigma}, tri::Permute{sg_inv}}, params,
            "perm-composition", "instance " + std::to_string(rep_i)));

        int i = int(rng() % A);
        std::vector<tri::Move> conj = {tri::Flip{sigma[i]}, tri::Permute{tri::perm_inverse(sigma)},
                                       tri::Flip{i}, tri::Permute{sigma}};
        if (word_is_legal(conj))
            push(check_word_relation(T, conj, params, "perm-flip-conjugation",
                                     "arc " + std::to_string(i + 1)));
    }
    push(check_word_relation(T, {tri::Permute{tri::perm_identity(A)}}, params, "perm-identity",
                             ""));

    if (opt.run_numeric) {
        op::Grid g{2, opt.grid_N, opt.grid_L};
        auto states = op::random_test_states(2, opt.pentagon_states, opt.seed, 1.8, 2.0, 0.35);
        for (auto& spec : states)
            for (auto& b : spec.boosts) b = -std::abs(b);  // tame side of the multipliers
        auto rr = op::verify_F_pentagon(params, g, states, {}, opt.workers, opt.corrupt_control);
        RelationEntry e;
        e.relation = opt.corrupt_control ? "pentagon-operator-corrupted" : "pentagon-operator";
        e.detail = "N=" + std::to_string(opt.grid_N);
        e.triangulation_ok = true;
        e.linear_ok = true;
        e.pentagon_residual = rr.max_residual;
        e.ok = opt.corrupt_control ? rr.max_residual > 0.05
                                   : rr.max_residual <= opt.pentagon_tol;
        rep.max_pentagon_residual = std::max(rep.max_pentagon_residual, rr.max_residual);
        push(std::move(e));
    }
    return rep;
}

}  // namespace ptolemy::itw
