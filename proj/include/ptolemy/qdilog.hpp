#pragma once

#include <complex>
#include <vector>

#include "ptolemy/errors.hpp"

namespace ptolemy::qd {

using cplx = std::complex<double>;

struct QDParams {
    int lambda = -1;  // in {-1, 0, 1}
    double hbar = 1.0;
};

struct AccuracyBudget {
    double abs_tol = 1e-12;
    int max_terms = 4000;       // compact product truncation
    int nodes_per_panel = 24;   // Gauss-Legendre nodes per tail panel
    double panel_length = 0.5;
    double semicircle_radius = 0.0;  // 0 = min(pi, pi/|h|)/4
    int semicircle_nodes = 96;
};

// Compact quantum dilogarithm psi^q(z) = prod_{m>=0} (1 + q^{2m+1} z)^{-1},
// |q| < 1. log_psi_q returns the sum of principal logs of the factors; its
// exponential is the exact product value regardless of branch.
cplx log_psi_q(cplx q, cplx z, const AccuracyBudget& budget = {});
cplx psi_q(cplx q, cplx z, const AccuracyBudget& budget = {});

// Im log psi^q(exp(log_r + i*phase)) modulo 2*pi, for real 0<q<1. Stable for
// arbitrarily large log_r; used by the Lambda=+1 kernel tables.
double psi_phase(double q, double log_r, double phase, const AccuracyBudget& budget = {});

// Quadrature plan for the Barnes contour integral
//   log Phi^h(z) = -1/4 int_Omega e^{-ipz} / (sinh(pi p) sinh(pi h p)) dp/p
// with Omega the real line detouring above the origin on a semicircle of
// radius r. The two rays fold into int_r^inf -2i sin(pz) g(p) dp by oddness
// of g. Valid while |Im z| <= max_im and Re z is moderate; large positive
// Re z must be routed through the inversion identity first (the semicircle
// factors grow like e^{r Re z} and cancellation destroys the quadrature).
class BarnesPlan {
  public:
    // max_abs_z bounds |Re z| of later evaluations; panel lengths shrink so
    // the sin(p z) oscillation stays resolved.
    BarnesPlan(cplx h, double max_im, const AccuracyBudget& budget = {},
               double max_abs_z = 48.0);

    cplx log_phi(cplx z) const;

    // log Phi at the real lattice z_j = z0 + j*dz, j in [0, count).
    void log_phi_lattice(double z0, double dz, int count, cplx* out) const;

    double radius() const { return r_; }
    double max_im() const { return max_im_; }

  private:
    void build(const AccuracyBudget& budget, int refine);
    cplx h_;
    double max_abs_z_ = 48.0;
    double r_ = 0, max_im_ = 0;
    std::vector<double> tail_p_;
    std::vector<cplx> tail_w_;  // includes the -2i and the GL weight
    std::vector<cplx> semi_p_, semi_w_;
};

// Phi^{h}(z)*Phi^{h}(-z) = exp(-i (z^2/(4 pi h) + pi (h + 1/h)/12)); the
// right-hand side, from the residue of the integrand at the origin.
cplx phi_inversion_factor(cplx h, cplx z);

// Non-compact quantum dilogarithm, real nonzero hbar. Outside the strip
// |Im z| < pi (1 + |hbar|) the pair of difference equations continues the
// value; steps of 2 pi i hbar are preferred when hbar < 1.
cplx phi_hbar(double hbar, cplx z, const AccuracyBudget& budget = {});

// Barnes integral for complex h with Re h > 0 (the regime where the compact
// ratio formula overlaps; used as a cross-check of the quadrature engine).
cplx phi_barnes(cplx h, cplx z, const AccuracyBudget& budget = {});

// Modular-double pair: Phi^{i hbar} (sign=+1) and Phi^{-i hbar} (sign=-1)
// via ratios of compact quantum dilogarithms at parameters e^{-pi hbar},
// e^{-pi/hbar}.
cplx phi_ihbar(int sign, double hbar, cplx z, const AccuracyBudget& budget = {});

// Trilogy kernel F^hbar_Lambda(x, y) for real x, y.
cplx F_kernel(const QDParams& params, double x, double y, const AccuracyBudget& budget = {});

// Real-axis fast path for Phi^hbar: far-left tail ~ 1, inversion for
// z above z_pivot, quadrature in between. Exposed for the grid multiplier
// tables, which need whole lattices of evaluations.
class PhiRealEvaluator {
  public:
    PhiRealEvaluator(double hbar, const AccuracyBudget& budget = {});
    cplx operator()(double z) const;
    // out[j] = Phi^hbar(z0 + j*dz)
    void lattice(double z0, double dz, int count, cplx* out) const;
    double far_left() const { return z_far_; }

  private:
    double hbar_, z_far_, z_pivot_;
    BarnesPlan plan_;
};

}  // namespace ptolemy::qd
