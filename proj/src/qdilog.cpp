#include "ptolemy/qdilog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace ptolemy::qd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI(0.0, 1.0);

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
}

cplx integrand_g(cplx h, cplx p) {
    return 1.0 / (std::sinh(kPi * p) * std::sinh(kPi * h * p) * p);
}

}  // namespace

cplx log_psi_q(cplx q, cplx z, const AccuracyBudget& budget) {
    double aq = std::abs(q);
    if (aq >= 1.0 - 1e-14)
        throw NonConvergent("psi_q requires |q| < 1, got |q| = " + std::to_string(aq));
    cplx sum = 0.0;
    cplx u = q * z;  // q^{2m+1} z
    cplx q2 = q * q;
    double aq2 = aq * aq;
    for (int m = 0; m < budget.max_terms; ++m) {
        double au = std::abs(u);
        cplx factor = 1.0 + u;
        if (std::abs(factor) < 1e-12 * std::max(1.0, au))
            throw PoleHit("psi_q factor vanishes at m = " + std::to_string(m));
        sum += std::log(factor);
        u *= q2;
        au *= aq2;
        // remaining tail of sum_m |u_m| / (1 - |u_m|), geometric from here
        if (au < 0.5) {
            double tail = au / ((1.0 - aq2) * (1.0 - au));
            if (tail < budget.abs_tol) return -sum;
        }
    }
    throw NonConvergent("psi_q did not converge within max_terms");
}

cplx psi_q(cplx q, cplx z, const AccuracyBudget& budget) {
    return std::exp(log_psi_q(q, z, budget));
}

double psi_phase(double q, double log_r, double phase, const AccuracyBudget& budget) {
    if (!(q > 0.0 && q < 1.0)) throw NonConvergent("psi_phase requires real 0 < q < 1");
    const double lq = std::log(q);  // < 0
    const double cut = 33.0;        // e^{-33} ~ 5e-15
    // w_m = log_r + (2m+1) log q decreases in m; factors with w_m > cut
    // contribute Arg = phase (mod 2pi) up to e^{-w_m}; factors with
    // w_m < -cut are negligible.
    double first = log_r + lq;
    long big = 0;
    if (first > cut) big = long(std::floor(((cut - log_r) / lq - 1.0) / 2.0)) + 1;
    double acc = std::fmod(double(big) * phase, 2.0 * kPi);
    const double s = std::sin(phase), c = std::cos(phase);
    for (long m = big; m < budget.max_terms; ++m) {
        double wm = log_r + (2.0 * m + 1.0) * lq;
        if (wm < -cut) break;
        double u = std::exp(wm);
        double re = 1.0 + u * c, im = u * s;
        if (re * re + im * im < 1e-24 * std::max(1.0, u * u))
            throw PoleHit("psi factor vanishes on the evaluation lattice");
        acc += std::atan2(im, re);
    }
    return -acc;
}

BarnesPlan::BarnesPlan(cplx h, double max_im, const AccuracyBudget& budget, double max_abs_z)
    : h_(h), max_im_(max_im), max_abs_z_(std::max(8.0, max_abs_z)) {
    if (h.real() <= 0.0) throw QuadratureFailure("Barnes plan requires Re h > 0");
    double strip = kPi * (1.0 + h.real());
    if (max_im >= strip - 0.05)
        throw QuadratureFailure("requested |Im z| reaches the strip boundary");
    r_ = budget.semicircle_radius > 0 ? budget.semicircle_radius
                                      : 0.25 * std::min(kPi, kPi / std::abs(h));
    build(budget, 1);
    // Self-check against a refined rule; catches bad pole clearance or an
    // under-resolved semicircle before any value is trusted.
    std::vector<double> tp = tail_p_;
    std::vector<cplx> tw = tail_w_, sp = semi_p_, sw = semi_w_;
    build(budget, 2);
    std::vector<double> tp2;
    std::vector<cplx> tw2, sp2, sw2;
    tp2.swap(tail_p_);
    tw2.swap(tail_w_);
    sp2.swap(semi_p_);
    sw2.swap(semi_w_);
    tail_p_ = tp;
    tail_w_ = tw;
    semi_p_ = sp;
    semi_w_ = sw;
    for (cplx probe : {cplx(1.3, 0.0), cplx(-2.1, 0.7 * max_im), cplx(3.4, -0.9 * max_im)}) {
        cplx base = log_phi(probe);
        tail_p_.swap(tp2);
        tail_w_.swap(tw2);
        semi_p_.swap(sp2);
        semi_w_.swap(sw2);
        cplx fine = log_phi(probe);
        tail_p_.swap(tp2);
        tail_w_.swap(tw2);
        semi_p_.swap(sp2);
        semi_w_.swap(sw2);
        if (std::abs(base - fine) > 50.0 * budget.abs_tol)
            {
            char msg[64];
            std::snprintf(msg, sizeof(msg), "%.3e", std::abs(base - fine));
            throw QuadratureFailure(std::string("Barnes quadrature self-check failed: |diff| = ") + msg);
        }
    }
}

void BarnesPlan::build(const AccuracyBudget& budget, int refine) {
    tail_p_.clear();
    tail_w_.clear();
    semi_p_.clear();
    semi_w_.clear();

    double decay = kPi * (1.0 + h_.real()) - max_im_;
    double R = r_ + 42.0 / decay;
    int pn = budget.nodes_per_panel;
    // keep >= 6 nodes per oscillation period of sin(p z) at the largest |z|
    double plen = std::min(budget.panel_length, 2.0 * kPi * pn / (6.0 * max_abs_z_));
    plen /= refine;

    std::vector<double> gx, gw;
    gauss_legendre(pn, gx, gw);
    for (double a = r_; a < R; a += plen) {
        double b = std::min(a + plen, R);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < pn; ++i) {
            double p = mid + half * gx[i];
            tail_p_.push_back(p);
            tail_w_.push_back(-2.0 * kI * half * gw[i] * integrand_g(h_, p));
        }
    }

    // theta from pi to 0: int_semi f dp = -int_0^pi f(r e^{i th}) i r e^{i th} dth.
    // Panelled: the nearest pole of g sits one radius-margin above the arc
    // (a double pole at the self-dual point), which a single rule
    // under-resolves.
    int spanels = std::max(4, budget.semicircle_nodes / 24) * refine;
    gauss_legendre(24, gx, gw);
    for (int pnl = 0; pnl < spanels; ++pnl) {
        double lo = kPi * pnl / spanels, hi = kPi * (pnl + 1) / spanels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int i = 0; i < 24; ++i) {
            double th = mid + half * gx[i];
            cplx p = r_ * std::exp(kI * th);
            semi_p_.push_back(p);
            semi_w_.push_back(-kI * p * (half * gw[i]) * integrand_g(h_, p));
        }
    }
}

cplx BarnesPlan::log_phi(cplx z) const {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < tail_p_.size(); ++m) acc += tail_w_[m] * std::sin(tail_p_[m] * z);
    for (std::size_t j = 0; j < semi_p_.size(); ++j)
        acc += semi_w_[j] * std::exp(-kI * semi_p_[j] * z);
    return -0.25 * acc;
}

void BarnesPlan::log_phi_lattice(double z0, double dz, int count, cplx* out) const {
    std::fill(out, out + count, cplx(0.0));
    // sin(p z_j) via rotation recurrences: one complex multiply per point per
    // node instead of a sincos.
    for (std::size_t m = 0; m < tail_p_.size(); ++m) {
        cplx rot = std::exp(kI * tail_p_[m] * z0);
        cplx mult = std::exp(kI * tail_p_[m] * dz);
        cplx w = tail_w_[m];
        for (int j = 0; j < count; ++j) {
            out[j] += w * rot.imag();
            rot *= mult;
        }
    }
    for (std::size_t s = 0; s < semi_p_.size(); ++s) {
        cplx rot = std::exp(-kI * semi_p_[s] * z0);
        cplx mult = std::exp(-kI * semi_p_[s] * dz);
        cplx w = semi_w_[s];
        for (int j = 0; j < count; ++j) {
            out[j] += w * rot;
            rot *= mult;
        }
    }
    for (int j = 0; j < count; ++j) out[j] *= -0.25;
}

cplx phi_inversion_factor(cplx h, cplx z) {
    return std::exp(-kI * (z * z / (4.0 * kPi * h) + kPi * (h + 1.0 / h) / 12.0));
}

namespace {

// Core evaluation for Re h > 0, |Im z| inside the safe band: route large
// positive Re z through the inversion identity, the far-left tail to 1.
cplx phi_core(cplx h, cplx z, const BarnesPlan& plan, double z_far, double z_pivot) {
    if (z.real() < -z_far) return 1.0;
    if (z.real() > z_pivot) return phi_inversion_factor(h, z) / phi_core(h, -z, plan, z_far, z_pivot);
    return std::exp(plan.log_phi(z));
}

double far_left_cutoff(double hbar) {
    // |log Phi(z)| decays like (1+|z|) e^{Re z * min(1, 1/hbar)} for
    // Re z -> -inf.
    return 44.0 * std::max(1.0, hbar);
}

}  // namespace

cplx phi_barnes(cplx h, cplx z, const AccuracyBudget& budget) {
    if (h.real() <= 0.0) throw QuadratureFailure("phi_barnes requires Re h > 0");
    double strip = kPi * (1.0 + h.real());
    double max_im = std::min(std::abs(z.imag()) * 1.05 + 0.1, 0.8 * strip);
    if (std::abs(z.imag()) >= 0.8 * strip)
        throw QuadratureFailure("phi_barnes argument too close to the strip boundary");
    BarnesPlan plan(h, max_im, budget);
    return phi_core(h, z, plan, far_left_cutoff(std::abs(h)), 5.0);
}

cplx phi_hbar(double hbar, cplx z, const AccuracyBudget& budget) {
    if (hbar == 0.0) throw NonConvergent("phi_hbar requires nonzero hbar");
    if (hbar < 0.0) return 1.0 / phi_hbar(-hbar, z, budget);

    const double strip = kPi * (1.0 + hbar);
    const double safe = 0.55 * strip;
    cplx zc = z;
    cplx up_factors = 1.0;    // product of factors acquired stepping down
    cplx down_factors = 1.0;  // ... stepping up
    if (std::abs(z.imag()) > safe) {
        // Pair of difference equations; steps of 2 pi i hbar preferred for
        // hbar < 1 (smaller factor growth), 2 pi i otherwise.
        double step = hbar < 1.0 ? 2.0 * kPi * hbar : 2.0 * kPi;
        cplx coef = hbar < 1.0 ? std::exp(kI * kPi * hbar) : std::exp(kI * kPi / hbar);
        double escale = hbar < 1.0 ? 1.0 : 1.0 / hbar;
        while (zc.imag() > safe) {
            zc -= kI * step;
            cplx f = 1.0 + coef * std::exp(zc * escale);
            if (std::abs(f) < 1e-12)
                throw PoleOfContinuation("difference-equation factor vanished");
            up_factors *= f;
        }
        while (zc.imag() < -safe) {
            cplx f = 1.0 + coef * std::exp(zc * escale);
            if (std::abs(f) < 1e-12)
                throw PoleOfContinuation("difference-equation factor vanished");
            down_factors *= f;
            zc += kI * step;
        }
    }
    BarnesPlan plan(hbar, safe, budget, far_left_cutoff(hbar));
    cplx core = phi_core(hbar, zc, plan, far_left_cutoff(hbar), 5.0);
    return up_factors * core / down_factors;
}

cplx phi_ihbar(int sign, double hbar, cplx z, const AccuracyBudget& budget) {
    if (hbar <= 0.0) throw NonConvergent("phi_ihbar requires hbar > 0");
    if (sign != 1 && sign != -1) throw InputError("phi_ihbar sign must be +1 or -1");
    double q1 = std::exp(-kPi * hbar);
    double q2 = std::exp(-kPi / hbar);
    if (q1 >= 1.0 - 1e-10 || q2 >= 1.0 - 1e-10)
        throw NonConvergent("hbar too extreme: compact parameter at 1");
    if (sign == 1) {
        // psi^{q1}(e^z) / psi^{q2}(e^{z/(i hbar)}), z/(i hbar) = -i z / hbar
        cplx lp = log_psi_q(q1, std::exp(z), budget);
        cplx lq = log_psi_q(q2, std::exp(-kI * z / hbar), budget);
        return std::exp(lp - lq);
    }
    // psi^{q2}(e^{-z/(i hbar)}) / psi^{q1}(e^z)
    cplx lp = log_psi_q(q2, std::exp(kI * z / hbar), budget);
    cplx lq = log_psi_q(q1, std::exp(z), budget);
    return std::exp(lp - lq);
}

PhiRealEvaluator::PhiRealEvaluator(double hbar, const AccuracyBudget& budget)
    : hbar_(hbar),
      z_far_(far_left_cutoff(hbar)),
      z_pivot_(5.0),
      plan_(hbar, 0.0, budget, far_left_cutoff(hbar)) {
    if (hbar <= 0.0) throw NonConvergent("PhiRealEvaluator requires hbar > 0");
}

cplx PhiRealEvaluator::operator()(double z) const {
    if (z < -z_far_) return 1.0;
    if (z > z_pivot_) return phi_inversion_factor(hbar_, z) / (*this)(-z);
    return std::exp(plan_.log_phi(z));
}

void PhiRealEvaluator::lattice(double z0, double dz, int count, cplx* out) const {
    if (count <= 0) return;
    if (dz <= 0.0) throw InputError("lattice spacing must be positive");
    auto z_at = [&](int j) { return z0 + j * dz; };
    // Direct-quadrature block: z in [-z_far, z_pivot].
    int j_lo = 0;
    while (j_lo < count && z_at(j_lo) < -z_far_) ++j_lo;
    int j_hi = j_lo;
    while (j_hi < count && z_at(j_hi) <= z_pivot_) ++j_hi;

    for (int j = 0; j < j_lo; ++j) out[j] = 1.0;
    if (j_hi > j_lo) {
        std::vector<cplx> lp(j_hi - j_lo);
        plan_.log_phi_lattice(z_at(j_lo), dz, j_hi - j_lo, lp.data());
        for (int j = j_lo; j < j_hi; ++j) out[j] = std::exp(lp[j - j_lo]);
    }
    // Inversion block: reflected arguments form a descending lattice; sweep
    // it in ascending order.
    int m = count - j_hi;
    if (m > 0) {
        std::vector<cplx> refl(m);
        double u0 = -z_at(count - 1);
        int k_lo = 0;
        while (k_lo < m && u0 + k_lo * dz < -z_far_) ++k_lo;
        for (int k = 0; k < k_lo; ++k) refl[k] = 1.0;
        if (k_lo < m) {
            std::vector<cplx> lp(m - k_lo);
            plan_.log_phi_lattice(u0 + k_lo * dz, dz, m - k_lo, lp.data());
            for (int k = k_lo; k < m; ++k) refl[k] = std::exp(lp[k - k_lo]);
        }
        for (int j = j_hi; j < count; ++j) {
            double z = z_at(j);
            cplx phi_neg = refl[count - 1 - j];
            out[j] = phi_inversion_factor(hbar_, z) / phi_neg;
        }
    }
}

cplx F_kernel(const QDParams& params, double x, double y, const AccuracyBudget& budget) {
    switch (params.lambda) {
        case 0: {
            // (1 + e^x)^{y/(pi i)} with the real branch of log(1 + e^x)
            double ln1p = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
            return std::exp(-kI * (y / kPi) * ln1p);
        }
        case -1: {
            double hb = params.hbar;
            PhiRealEvaluator phi(hb, budget);
            return phi(x + hb * y) / phi(x - hb * y);
        }
        case 1: {
            double hb = params.hbar;
            double q1 = std::exp(-kPi * hb), q2 = std::exp(-kPi / hb);
            double s1 = psi_phase(q1, x, hb * y, budget);
            double s2 = psi_phase(q2, y, x / hb, budget);
            return std::exp(2.0 * kI * (s1 + s2));
        }
        default:
            throw InputError("lambda must be -1, 0 or 1");
    }
}

}  // namespace ptolemy::qd
