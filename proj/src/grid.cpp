#include "ptolemy/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ptolemy::op {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const std::vector<cplx>& twiddles(int n) {
    static std::map<int, std::vector<cplx>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> tw(n / 2);
    for (int i = 0; i < n / 2; ++i) {
        double a = -2.0 * kPi * i / n;
        tw[i] = cplx(std::cos(a), std::sin(a));
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

void fft_1d(cplx* v, int n, bool inverse) {
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    const auto& tw = twiddles(n);
    for (int len = 2; len <= n; len <<= 1) {
        int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; ++j) {
                cplx w = tw[j * step];
                if (inverse) w = std::conj(w);
                cplx u = v[i + j];
                cplx t = v[i + j + len / 2] * w;
                v[i + j] = u + t;
                v[i + j + len / 2] = u - t;
            }
        }
    }
    if (inverse) {
        double s = 1.0 / n;
        for (int i = 0; i < n; ++i) v[i] *= s;
    }
}

void transpose(std::vector<cplx>& v, int n) {
    constexpr int B = 64;
    for (int bi = 0; bi < n; bi += B)
        for (int bj = bi; bj < n; bj += B)
            for (int i = bi; i < std::min(bi + B, n); ++i) {
                int j0 = (bi == bj) ? i + 1 : bj;
                for (int j = j0; j < std::min(bj + B, n); ++j)
                    std::swap(v[std::size_t(i) * n + j], v[std::size_t(j) * n + i]);
            }
}

}  // namespace

double GridState::norm() const {
    double s = 0;
    for (const cplx& c : v) s += std::norm(c);
    return std::sqrt(s * grid.cell_volume());
}

GridState& GridState::operator-=(const GridState& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}

GridState make_state(const Grid& g) {
    g.validate();
    return GridState{g, std::vector<cplx>(g.size(), cplx(0))};
}

GridState gaussian_state(const Grid& g, const std::vector<double>& widths,
                         const std::vector<double>& boosts) {
    if (int(widths.size()) != g.d || int(boosts.size()) != g.d)
        throw UnsupportedShape("gaussian_state: need one width and boost per axis");
    GridState s = make_state(g);
    auto profile = [](double x, double w, double b) {
        return std::exp(cplx(-x * x / (2.0 * w * w), b * x));
    };
    if (g.d == 1) {
        for (int j = 0; j < g.N; ++j) s.v[j] = profile(g.x(j), widths[0], boosts[0]);
    } else {
        std::vector<cplx> f0(g.N), f1(g.N);
        for (int j = 0; j < g.N; ++j) {
            f0[j] = profile(g.x(j), widths[0], boosts[0]);
            f1[j] = profile(g.x(j), widths[1], boosts[1]);
        }
        for (int i = 0; i < g.N; ++i)
            for (int j = 0; j < g.N; ++j) s.v[std::size_t(i) * g.N + j] = f0[i] * f1[j];
    }
    double nrm = s.norm();
    for (auto& c : s.v) c /= nrm;
    if (boundary_mass_fraction(s) > 1e-10)
        throw SupportOverflow("test state carries mass at the grid boundary");
    return s;
}

double boundary_mass_fraction(const GridState& s) {
    const int N = s.grid.N;
    double total = 0, edge = 0;
    auto is_edge = [N](int j) { return j < 2 || j >= N - 2; };
    if (s.grid.d == 1) {
        for (int j = 0; j < N; ++j) {
            double m = std::norm(s.v[j]);
            total += m;
            if (is_edge(j)) edge += m;
        }
    } else {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                double m = std::norm(s.v[std::size_t(i) * N + j]);
                total += m;
                if (is_edge(i) || is_edge(j)) edge += m;
            }
    }
    return total == 0 ? 0 : edge / total;
}

void fft_axis(GridState& s, int axis, bool inverse) {
    const int N = s.grid.N;
    if (s.grid.d == 1) {
        if (axis != 0) throw UnsupportedShape("axis out of range");
        fft_1d(s.v.data(), N, inverse);
        return;
    }
    if (axis == 1) {
        for (int i = 0; i < N; ++i) fft_1d(s.v.data() + std::size_t(i) * N, N, inverse);
    } else if (axis == 0) {
        transpose(s.v, N);
        for (int i = 0; i < N; ++i) fft_1d(s.v.data() + std::size_t(i) * N, N, inverse);
        transpose(s.v, N);
    } else {
        throw UnsupportedShape("axis out of range");
    }
}

double l2_distance(const GridState& a, const GridState& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += std::norm(a.v[i] - b.v[i]);
    return std::sqrt(s * a.grid.cell_volume());
}

}  // namespace ptolemy::op
