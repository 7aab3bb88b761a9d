#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ptolemy/errors.hpp"

namespace ptolemy::op {

using cplx = std::complex<double>;

// Periodic sampling grid on [-L, L)^d, N samples per axis (power of two).
// Fourier convention: the k-th mode carries momentum eigenvalue pi*k/L for
// -i d/dx, k in {-N/2, ..., N/2-1}; FFT bin b maps to k = b < N/2 ? b : b-N.
struct Grid {
    int d = 1;
    int N = 1024;
    double L = 12.0;

    void validate() const {
        if (d != 1 && d != 2) throw UnsupportedShape("grid dimension must be 1 or 2");
        if (N < 64 || (N & (N - 1)) != 0)
            throw UnsupportedShape("N must be a power of two >= 64");
        if (L <= 0) throw UnsupportedShape("L must be positive");
    }
    double dx() const { return 2.0 * L / N; }
    double x(int j) const { return -L + j * dx(); }
    double p(int bin) const {
        int k = bin < N / 2 ? bin : bin - N;
        return 3.141592653589793238462643383279502884 * k / L;
    }
    std::size_t size() const { return d == 1 ? std::size_t(N) : std::size_t(N) * N; }
    double cell_volume() const { return d == 1 ? dx() : dx() * dx(); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

// Sampled complex state; d=2 storage is row-major v[i0*N + i1].
struct GridState {
    Grid grid;
    std::vector<cplx> v;

    double norm() const;
    GridState& operator-=(const GridState& o);
};

GridState make_state(const Grid& g);

// Centered Gaussian with per-axis widths and momentum boosts.
GridState gaussian_state(const Grid& g, const std::vector<double>& widths,
                         const std::vector<double>& boosts);

// Fraction of squared mass within two cells of the boundary.
double boundary_mass_fraction(const GridState& s);

// In-place FFT along one axis; inverse applies the 1/N factor so that
// inverse(forward(v)) == v.
void fft_axis(GridState& s, int axis, bool inverse);

double l2_distance(const GridState& a, const GridState& b);

}  // namespace ptolemy::op
