#pragma once

#include <map>
#include <string>
#include <vector>

#include "ptolemy/rational.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy::heis {

// First-order operator  sum_j pos[j]*s_j + sum_j mom[j]*(-pi i d/ds_j)
// + scalar*(pi i), with exact rational coefficients. pi i is a formal unit;
// it never becomes a float in this module.
struct OperatorCoeffs {
    RatVec pos;
    RatVec mom;
    Rat scalar = Rat(0);  // multiple of pi i

    std::size_t dim() const { return pos.size(); }
    bool is_self_adjoint_form() const { return scalar.is_zero(); }

    friend bool operator==(const OperatorCoeffs&, const OperatorCoeffs&) = default;
};

OperatorCoeffs op_zero(std::size_t dim);
OperatorCoeffs op_position(std::size_t dim, std::size_t j, Rat coeff = Rat(1));
OperatorCoeffs op_momentum(std::size_t dim, std::size_t j, Rat coeff = Rat(1));
OperatorCoeffs op_add(const OperatorCoeffs& a, const OperatorCoeffs& b);
OperatorCoeffs op_scale(const Rat& c, const OperatorCoeffs& a);

// [A,B] = pi i * c * id with c = A.pos . B.mom - A.mom . B.pos, forced by
// [s_j, -pi i d/ds_k] = pi i delta_jk. Returns c.
Rat commutator(const OperatorCoeffs& A, const OperatorCoeffs& B);

// Same value, named for its role in the Weyl-relation bookkeeping that the
// grid calculus consumes: [A,B] = i(pi c) id, so the grid phase is
// exp(-i (pi c) alpha beta).
inline Rat check_weyl_consistency(const OperatorCoeffs& A, const OperatorCoeffs& B) {
    return commutator(A, B);
}

// Linear map on the coefficient space of (pos (+) mom), stored through the
// coordinate pullback matrix X: positions transform by X^T, momentum
// derivations by X^{-1}. Any such map preserves the commutator form; |det X|
// is recorded for the unitarity normalization (always 1 here).
class LinearSymplecticMap {
  public:
    LinearSymplecticMap() = default;
    static LinearSymplecticMap identity(std::size_t dim);
    static LinearSymplecticMap from_pullback(RatMat X);

    std::size_t dim() const { return X_.size(); }
    const RatMat& pullback() const { return X_; }
    const RatMat& pullback_inverse() const { return Xi_; }
    const Rat& det() const { return det_; }

    OperatorCoeffs apply(const OperatorCoeffs& A) const;

    // Composition as conjugation actions: (a.then(b)) applies a first.
    LinearSymplecticMap then(const LinearSymplecticMap& later) const;
    LinearSymplecticMap inverse() const;

    // Block matrix diag(X^T, X^{-1}) on (pos (+) mom).
    RatMat full_matrix() const;

    bool is_identity() const;
    friend bool operator==(const LinearSymplecticMap& a, const LinearSymplecticMap& b) {
        return a.X_ == b.X_;
    }

  private:
    RatMat X_, Xi_;
    Rat det_ = Rat(1);
};

// Pullback matrix of the flip coordinate change at arc k:
//   t'_k = -t_k + sum_j [sign * eps_kj]_+ t_j,   t'_i = t_i  (i != k).
// sign = -1 reproduces the conjugation table
//   K'_k x'_i K'_k^{-1} = -x_k (i=k) / x_i + [eps_ik]_+ x_k (i != k)
// and likewise for y. sign = +1 is the same map for the opposite tropical
// sign; word compilation alternates signs so the flip relations close
// exactly at the linear level (see intertwiner).
LinearSymplecticMap monomial_map(const std::vector<std::vector<int>>& eps, int k,
                                 int sign = -1);

// Relabeling map: t'_{sigma(i)} = t_i.
LinearSymplecticMap permutation_map(const std::vector<int>& sigma);

// Reducible solution of the Heisenberg relations on V = I:
//   x_i = -pi i d/dt_i,   y_i = sum_j eps_ij t_j.
// Satisfies [x_i,y_j] = pi i eps_ij but not the quantum constraints.
struct OperatorSystem {
    std::vector<OperatorCoeffs> x;
    std::vector<OperatorCoeffs> y;
    std::vector<std::string> variables;  // names of the underlying s/t variables
};

OperatorSystem reducible_solution(const tri::ExchangeMatrix& em);

// Column reduced echelon form of the valence matrix.
struct EchelonData {
    std::vector<int> pivots;         // i_1 < ... < i_n (row indices in I)
    std::vector<int> pivot_columns;  // p_j = column owning the j-th pivot
    RatMat reduced;                  // w, |I| x n, original column order
    std::vector<int> ring;           // the arcs of I \ {i_1..i_n}, increasing
};

EchelonData echelon_reduce(const std::vector<std::vector<int>>& valences);

// Constrained irreducible solution over V = ring (the arcs outside the
// pivot set):
//   x_i     = -pi i d/ds_i                    for i in ring,
//   x_{i_j} = sum_{k in ring} pi i w_{k,p_j} d/ds_k,
//   y_i     = sum_{j in ring} eps_ij s_j      for all i in I.
// Satisfies the Heisenberg relations and both quantum constraint sums
// exactly.
OperatorSystem irreducible_solution(const tri::ExchangeMatrix& em, const EchelonData& ech);

}  // namespace ptolemy::heis
