#pragma once

#include <optional>
#include <random>

#include "ptolemy/triangulation.hpp"

namespace ptolemy::tests {

inline tri::GroupoidWord random_word(const tri::LabeledTriangulation& T, int len,
                                     std::mt19937_64& rng, bool with_perms = false) {
    tri::GroupoidWord w{T, {}};
    auto cur = T;
    int made = 0, guard = 0;
    while (made < len && ++guard < 300) {
        if (with_perms && rng() % 5 == 0) {
            auto sigma = tri::perm_identity(T.arc_count());
            std::shuffle(sigma.begin(), sigma.end(), rng);
            cur = cur.permuted(sigma);
            w.moves.push_back(tri::Permute{std::move(sigma)});
            ++made;
            continue;
        }
        int k = int(rng() % T.arc_count());
        if (!cur.flip_is_legal(k)) continue;
        cur = cur.flipped(k);
        w.moves.push_back(tri::Flip{k});
        ++made;
    }
    return w;
}

// An independent connecting word with the same endpoints and the same
// Ptolemy-groupoid morphism: apply random relation-preserving rewrites
// (twice-flip insertions, permutation-pair insertions, pentagon detours,
// flip/permutation commutations). Two combinatorial words between equal
// endpoints can otherwise differ by a mapping class, which genuinely
// changes the linear part.
inline tri::GroupoidWord rewrite_word(const tri::GroupoidWord& w, std::mt19937_64& rng,
                                      int n_rewrites) {
    tri::GroupoidWord out = w;
    const int A = w.start.arc_count();
    for (int r = 0, guard = 0; r < n_rewrites && guard < 20 * n_rewrites; ++guard) {
        std::size_t pos = out.moves.empty() ? 0 : rng() % (out.moves.size() + 1);
        tri::GroupoidWord head{out.start,
                               std::vector<tri::Move>(out.moves.begin(), out.moves.begin() + pos)};
        auto Tp = head.end();
        int choice = int(rng() % 3);
        std::vector<tri::Move> insert;
        if (choice == 0) {
            int k = int(rng() % A);
            if (!Tp.flip_is_legal(k)) continue;
            insert = {tri::Flip{k}, tri::Flip{k}};
        } else if (choice == 1) {
            auto sigma = tri::perm_identity(A);
            std::shuffle(sigma.begin(), sigma.end(), rng);
            insert = {tri::Permute{sigma}, tri::Permute{tri::perm_inverse(sigma)}};
        } else {
            // pentagon detour when one is legal here
            auto em = tri::exchange_matrix(Tp);
            bool placed = false;
            for (int tries = 0; tries < 12 && !placed; ++tries) {
                int i = int(rng() % A), j = int(rng() % A);
                if (i == j || std::abs(em.eps[i][j]) != 1) continue;
                auto sigma = tri::perm_identity(A);
                std::swap(sigma[i], sigma[j]);
                std::vector<tri::Move> pent = {tri::Flip{i},       tri::Flip{j}, tri::Flip{i},
                                               tri::Flip{j},       tri::Flip{i},
                                               tri::Permute{sigma}};
                try {
                    if (tri::GroupoidWord{Tp, pent}.end() == Tp) {
                        insert = pent;
                        placed = true;
                    }
                } catch (const IllegalFlip&) {
                }
            }
            if (!placed) continue;
        }
        out.moves.insert(out.moves.begin() + pos, insert.begin(), insert.end());
        ++r;
    }
    return out;
}

}  // namespace ptolemy::tests
