#include "ptolemy/heisenberg.hpp"

#include <algorithm>

namespace ptolemy {

RatMat rat_inverse(const RatMat& a) {
    const std::size_t n = a.size();
    RatMat m = a;
    RatMat inv = rat_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw RankDeficient("matrix not invertible");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rat d = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rat f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Rat rat_det(const RatMat& a) {
    const std::size_t n = a.size();
    RatMat m = a;
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat d = m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            Rat f = m[r][col] / d;
            for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    return det;
}

}  // namespace ptolemy

namespace ptolemy::heis {

OperatorCoeffs op_zero(std::size_t dim) {
    return OperatorCoeffs{RatVec(dim, Rat(0)), RatVec(dim, Rat(0)), Rat(0)};
}

OperatorCoeffs op_position(std::size_t dim, std::size_t j, Rat coeff) {
    auto a = op_zero(dim);
    a.pos[j] = coeff;
    return a;
}

OperatorCoeffs op_momentum(std::size_t dim, std::size_t j, Rat coeff) {
    auto a = op_zero(dim);
    a.mom[j] = coeff;
    return a;
}

OperatorCoeffs op_add(const OperatorCoeffs& a, const OperatorCoeffs& b) {
    OperatorCoeffs r = a;
    for (std::size_t i = 0; i < r.pos.size(); ++i) {
        r.pos[i] += b.pos[i];
        r.mom[i] += b.mom[i];
    }
    r.scalar += b.scalar;
    return r;
}

OperatorCoeffs op_scale(const Rat& c, const OperatorCoeffs& a) {
    OperatorCoeffs r = a;
    for (auto& v : r.pos) v *= c;
    for (auto& v : r.mom) v *= c;
    r.scalar *= c;
    return r;
}

Rat commutator(const OperatorCoeffs& A, const OperatorCoeffs& B) {
    Rat c(0);
    for (std::size_t j = 0; j < A.pos.size(); ++j)
        c += A.pos[j] * B.mom[j] - A.mom[j] * B.pos[j];
    return c;
}

LinearSymplecticMap LinearSymplecticMap::identity(std::size_t dim) {
    LinearSymplecticMap m;
    m.X_ = rat_identity(dim);
    m.Xi_ = m.X_;
    m.det_ = Rat(1);
    return m;
}

LinearSymplecticMap LinearSymplecticMap::from_pullback(RatMat X) {
    LinearSymplecticMap m;
    m.det_ = rat_det(X);
    if (m.det_.is_zero()) throw RankDeficient("pullback matrix is singular");
    m.Xi_ = rat_inverse(X);
    m.X_ = std::move(X);
    return m;
}

OperatorCoeffs LinearSymplecticMap::apply(const OperatorCoeffs& A) const {
    OperatorCoeffs r;
    r.pos = rat_mul_vec(rat_transpose(X_), A.pos);
    r.mom = rat_mul_vec(Xi_, A.mom);
    r.scalar = A.scalar;
    return r;
}

LinearSymplecticMap LinearSymplecticMap::then(const LinearSymplecticMap& later) const {
    // Conjugation by this map happens first, then by `later`: coefficient
    // vectors see later(this(A)). Pullback matrices compose as X_this * X_later.
    LinearSymplecticMap m;
    m.X_ = rat_mul(X_, later.X_);
    m.Xi_ = rat_mul(later.Xi_, Xi_);
    m.det_ = det_ * later.det_;
    return m;
}

LinearSymplecticMap LinearSymplecticMap::inverse() const {
    LinearSymplecticMap m;
    m.X_ = Xi_;
    m.Xi_ = X_;
    m.det_ = Rat(1) / det_;
    return m;
}

RatMat LinearSymplecticMap::full_matrix() const {
    const std::size_t n = dim();
    RatMat f(2 * n, RatVec(2 * n, Rat(0)));
    RatMat Xt = rat_transpose(X_);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            f[i][j] = Xt[i][j];
            f[n + i][n + j] = Xi_[i][j];
        }
    return f;
}

bool LinearSymplecticMap::is_identity() const { return X_ == rat_identity(dim()); }

LinearSymplecticMap monomial_map(const std::vector<std::vector<int>>& eps, int k, int sign) {
    const std::size_t n = eps.size();
    if (k < 0 || std::size_t(k) >= n) throw InputError("monomial_map: arc out of range");
    RatMat X = rat_identity(n);
    X[k][k] = Rat(-1);
    for (std::size_t j = 0; j < n; ++j) {
        if (int(j) == k) continue;
        int e = sign * eps[k][j];
        if (e > 0) X[k][j] = Rat(e);
    }
    return LinearSymplecticMap::from_pullback(std::move(X));
}

LinearSymplecticMap permutation_map(const std::vector<int>& sigma) {
    const std::size_t n = sigma.size();
    RatMat X(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) X[sigma[i]][i] = Rat(1);
    return LinearSymplecticMap::from_pullback(std::move(X));
}

OperatorSystem reducible_solution(const tri::ExchangeMatrix& em) {
    const std::size_t n = em.eps.size();
    OperatorSystem sys;
    for (std::size_t j = 0; j < n; ++j) sys.variables.push_back("t_" + std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i) {
        sys.x.push_back(op_momentum(n, i));
        OperatorCoeffs y = op_zero(n);
        for (std::size_t j = 0; j < n; ++j) y.pos[j] = Rat(em.eps[i][j]);
        sys.y.push_back(y);
    }
    return sys;
}

EchelonData echelon_reduce(const std::vector<std::vector<int>>& valences) {
    const std::size_t rows = valences.size();
    const std::size_t cols = rows ? valences[0].size() : 0;
    RatMat w(rows, RatVec(cols, Rat(0)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t p = 0; p < cols; ++p) w[i][p] = Rat(valences[i][p]);

    EchelonData out;
    std::vector<bool> column_used(cols, false);
    for (std::size_t i = 0; i < rows && out.pivots.size() < cols; ++i) {
        std::size_t pc = cols;
        for (std::size_t p = 0; p < cols; ++p)
            if (!column_used[p] && !w[i][p].is_zero()) {
                pc = p;
                break;
            }
        if (pc == cols) continue;
        Rat d = w[i][pc];
        for (std::size_t r = 0; r < rows; ++r) w[r][pc] /= d;
        for (std::size_t p = 0; p < cols; ++p) {
            if (p == pc || w[i][p].is_zero()) continue;
            Rat f = w[i][p];
            for (std::size_t r = 0; r < rows; ++r) w[r][p] -= f * w[r][pc];
        }
        column_used[pc] = true;
        out.pivots.push_back(int(i));
        out.pivot_columns.push_back(int(pc));
    }
    if (out.pivots.size() != cols)
        throw RankDeficient("valence matrix rank " + std::to_string(out.pivots.size()) +
                            " < " + std::to_string(cols));
    out.reduced = std::move(w);
    std::vector<bool> is_pivot(rows, false);
    for (int i : out.pivots) is_pivot[i] = true;
    for (std::size_t i = 0; i < rows; ++i)
        if (!is_pivot[i]) out.ring.push_back(int(i));
    return out;
}

OperatorSystem irreducible_solution(const tri::ExchangeMatrix& em, const EchelonData& ech) {
    const std::size_t A = em.eps.size();
    const std::size_t d = ech.ring.size();
    std::vector<int> ring_index(A, -1);
    for (std::size_t a = 0; a < d; ++a) ring_index[ech.ring[a]] = int(a);

    OperatorSystem sys;
    for (int i : ech.ring) sys.variables.push_back("s_" + std::to_string(i + 1));
    sys.x.resize(A);
    sys.y.resize(A);
    for (std::size_t i = 0; i < A; ++i) {
        OperatorCoeffs y = op_zero(d);
        for (std::size_t a = 0; a < d; ++a) y.pos[a] = Rat(em.eps[i][ech.ring[a]]);
        sys.y[i] = y;
        if (ring_index[i] >= 0) {
            sys.x[i] = op_momentum(d, ring_index[i]);
        }
    }
    for (std::size_t j = 0; j < ech.pivots.size(); ++j) {
        OperatorCoeffs x = op_zero(d);
        int pj = ech.pivot_columns[j];
        for (std::size_t a = 0; a < d; ++a) x.mom[a] = -ech.reduced[ech.ring[a]][pj];
        sys.x[ech.pivots[j]] = x;
    }
    return sys;
}

}  // namespace ptolemy::heis
