#include "ptolemy/opcalc.hpp"

#include <cmath>
#include <future>
#include <random>

namespace ptolemy::op {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI(0.0, 1.0);

void multiply_inplace(GridState& s, const std::vector<cplx>& values) {
    for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] *= values[i];
}

void multiply_conj_inplace(GridState& s, const std::vector<cplx>& values) {
    for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] *= std::conj(values[i]);
}

void apply_inplace(const Plan& plan, GridState& s);

struct ApplyVisitor {
    GridState& s;
    void operator()(const Multiplier& m) const { multiply_inplace(s, m.values); }
    void operator()(const FourierMultiplier& m) const {
        fft_axis(s, m.axis, false);
        multiply_inplace(s, m.values);
        fft_axis(s, m.axis, true);
    }
    void operator()(const ChirpConjugated& m) const {
        multiply_conj_inplace(s, m.chirp);
        apply_inplace(*m.inner, s);
        multiply_inplace(s, m.chirp);
    }
    void operator()(const Composite& m) const {
        for (const auto& part : m.parts) apply_inplace(*part, s);
    }
};

void apply_inplace(const Plan& plan, GridState& s) { std::visit(ApplyVisitor{s}, plan.op); }

std::vector<double> as_doubles(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
    return out;
}

bool all_zero(const RatVec& v) {
    for (const auto& r : v)
        if (!r.is_zero()) return false;
    return true;
}

// Position-proportional Fourier phase along `axis`: multiplies mode p by
// exp(i * p * coef * x_other). Realizes the shear building block.
PlanPtr shear_plan(const Grid& g, int axis, double coef) {
    FourierMultiplier fm;
    fm.axis = axis;
    fm.values.resize(g.size());
    const int N = g.N;
    for (int i0 = 0; i0 < N; ++i0)
        for (int i1 = 0; i1 < N; ++i1) {
            double p = g.p(axis == 0 ? i0 : i1);
            double other = g.x(axis == 0 ? i1 : i0);
            fm.values[std::size_t(i0) * N + i1] = std::exp(kI * p * coef * other);
        }
    return make_plan(std::move(fm));
}

PlanPtr rotation_plan(const Grid& g, double phi) {
    if (g.d != 2) throw UnsupportedShape("rotation needs d = 2");
    double alpha = -std::tan(0.5 * phi);
    double beta = std::sin(phi);
    // psi o R(phi) = ((psi o Sx(alpha)) o Sy(beta)) o Sx(alpha); a shear
    // Sx(a) acts as the axis-0 Fourier phase e^{i p0 a x1}.
    Composite c;
    c.parts.push_back(shear_plan(g, 0, alpha));
    c.parts.push_back(shear_plan(g, 1, beta));
    c.parts.push_back(shear_plan(g, 0, alpha));
    return make_plan(std::move(c));
}

// Mixed multiplier table: values[bin0 * N + i1] = F(mscale * p_bin0,
// ascale * x_i1), filled with the per-Lambda fast paths (the Barnes lattice
// sweep for Lambda = -1, compact phase sums for Lambda = +1).
std::vector<cplx> mixed_F_table(const qd::QDParams& params, const Grid& g, double mscale,
                                double ascale, const qd::AccuracyBudget& budget) {
    const int N = g.N;
    std::vector<cplx> table(std::size_t(N) * N);
    // first argument is the eigenvalue of mscale * (-pi i d/du) on bin b,
    // i.e. mscale * pi * p_b
    const double dp = mscale * kPi * kPi / g.L;  // arg1 step over monotone k

    switch (params.lambda) {
        case 0: {
            for (int b = 0; b < N; ++b) {
                double x = mscale * kPi * g.p(b);
                double ln1p = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
                for (int i = 0; i < N; ++i) {
                    double y = ascale * g.x(i);
                    table[std::size_t(b) * N + i] = std::exp(-kI * (y / kPi) * ln1p);
                }
            }
            break;
        }
        case -1: {
            qd::PhiRealEvaluator phi(params.hbar, budget);
            std::vector<cplx> up(N), dn(N);
            for (int i = 0; i < N; ++i) {
                double y = ascale * g.x(i);
                double base = mscale * kPi * kPi * (-N / 2) / g.L;
                phi.lattice(base + params.hbar * y, dp, N, up.data());
                phi.lattice(base - params.hbar * y, dp, N, dn.data());
                for (int j = 0; j < N; ++j) {
                    int k = j - N / 2;
                    int bin = k >= 0 ? k : k + N;
                    table[std::size_t(bin) * N + i] = up[j] / dn[j];
                }
            }
            break;
        }
        case 1: {
            const double q1 = std::exp(-kPi * params.hbar);
            const double q2 = std::exp(-kPi / params.hbar);
            for (int b = 0; b < N; ++b) {
                double x = mscale * kPi * g.p(b);
                for (int i = 0; i < N; ++i) {
                    double y = ascale * g.x(i);
                    double s1 = qd::psi_phase(q1, x, params.hbar * y, budget);
                    double s2 = qd::psi_phase(q2, y, x / params.hbar, budget);
                    table[std::size_t(b) * N + i] = std::exp(2.0 * kI * (s1 + s2));
                }
            }
            break;
        }
        default:
            throw InputError("lambda must be -1, 0 or 1");
    }
    return table;
}

void require_support(const GridState& psi, double tol) {
    if (boundary_mass_fraction(psi) > tol)
        throw SupportOverflow("state mass too close to the grid boundary");
}

}  // namespace

PlanPtr make_plan(Multiplier m) { return std::make_shared<Plan>(Plan{std::move(m)}); }
PlanPtr make_plan(FourierMultiplier m) { return std::make_shared<Plan>(Plan{std::move(m)}); }
PlanPtr make_plan(ChirpConjugated m) { return std::make_shared<Plan>(Plan{std::move(m)}); }
PlanPtr make_plan(Composite m) { return std::make_shared<Plan>(Plan{std::move(m)}); }

GridState apply_plan(const PlanPtr& plan, const GridState& psi) {
    GridState out = psi;
    apply_inplace(*plan, out);
    return out;
}

GridState apply_weyl(const heis::OperatorCoeffs& A, double alpha, const GridState& psi) {
    const Grid& g = psi.grid;
    if (int(A.dim()) != g.d) throw UnsupportedShape("operator dimension != grid dimension");
    if (!A.scalar.is_zero()) throw UnsupportedShape("apply_weyl needs a self-adjoint operator");
    require_support(psi, 1e-6);

    auto pos = as_doubles(A.pos);
    auto mom = as_doubles(A.mom);
    for (double m : mom)
        if (std::abs(alpha * kPi * m) > 0.5 * g.L)
            throw AliasRisk("Weyl shift exceeds half the grid");

    GridState out = psi;
    // e^{i alpha A_mom}: shift x_a by alpha*pi*mom_a, as the Fourier phase
    // e^{i p s}.
    for (int axis = 0; axis < g.d; ++axis) {
        if (mom[axis] == 0.0) continue;
        double s = alpha * kPi * mom[axis];
        fft_axis(out, axis, false);
        const int N = g.N;
        if (g.d == 1) {
            for (int b = 0; b < N; ++b) out.v[b] *= std::exp(kI * g.p(b) * s);
        } else {
            for (int i0 = 0; i0 < N; ++i0)
                for (int i1 = 0; i1 < N; ++i1)
                    out.v[std::size_t(i0) * N + i1] *=
                        std::exp(kI * g.p(axis == 0 ? i0 : i1) * s);
        }
        fft_axis(out, axis, true);
    }
    // e^{i alpha A_pos}
    const int N = g.N;
    if (g.d == 1) {
        for (int j = 0; j < N; ++j) out.v[j] *= std::exp(kI * alpha * pos[0] * g.x(j));
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1)
                out.v[std::size_t(i0) * N + i1] *=
                    std::exp(kI * alpha * (pos[0] * g.x(i0) + pos[1] * g.x(i1)));
    }
    // BCH scalar: [A_pos, A_mom] = pi i (pos . mom) = i c id
    heis::OperatorCoeffs pos_part{A.pos, RatVec(A.dim(), Rat(0)), Rat(0)};
    heis::OperatorCoeffs mom_part{RatVec(A.dim(), Rat(0)), A.mom, Rat(0)};
    double c = kPi * heis::check_weyl_consistency(pos_part, mom_part).to_double();
    cplx phase = std::exp(kI * 0.5 * alpha * alpha * c);
    for (auto& z : out.v) z *= phase;
    return out;
}

PlanPtr build_F_plan(const qd::QDParams& params, const heis::OperatorCoeffs& xk,
                     const heis::OperatorCoeffs& yk, const Grid& grid,
                     const qd::AccuracyBudget& budget) {
    grid.validate();
    if (int(xk.dim()) != grid.d || int(yk.dim()) != grid.d)
        throw UnsupportedShape("operator dimension != grid dimension");
    if (!xk.scalar.is_zero() || !yk.scalar.is_zero())
        throw UnsupportedShape("F arguments must be scalar-free");
    if (!all_zero(xk.pos) || !all_zero(yk.mom))
        throw UnsupportedShape("xk must be pure momentum and yk pure position");
    if (!heis::commutator(xk, yk).is_zero())
        throw NonCommuting("[xk, yk] != 0; two-variable calculus undefined");

    auto m = as_doubles(xk.mom);
    auto a = as_doubles(yk.pos);
    const int N = grid.N;

    bool m_zero = true, a_zero = true;
    for (double v : m) m_zero = m_zero && v == 0.0;
    for (double v : a) a_zero = a_zero && v == 0.0;

    if (m_zero) {
        Multiplier mult;
        mult.values.resize(grid.size());
        if (grid.d == 1) {
            for (int j = 0; j < N; ++j)
                mult.values[j] = qd::F_kernel(params, 0.0, a[0] * grid.x(j), budget);
        } else {
            for (int i0 = 0; i0 < N; ++i0)
                for (int i1 = 0; i1 < N; ++i1)
                    mult.values[std::size_t(i0) * N + i1] = qd::F_kernel(
                        params, 0.0, a[0] * grid.x(i0) + a[1] * grid.x(i1), budget);
        }
        return make_plan(std::move(mult));
    }
    if (grid.d == 1) {
        // a must vanish here (otherwise [xk,yk] != 0 already threw)
        FourierMultiplier fm;
        fm.axis = 0;
        fm.values.resize(grid.size());
        for (int b = 0; b < N; ++b)
            fm.values[b] = qd::F_kernel(params, kPi * m[0] * grid.p(b), 0.0, budget);
        return make_plan(std::move(fm));
    }

    // d = 2. Axis-aligned cases avoid the rotation.
    if (m[1] == 0.0 && (a_zero || a[0] == 0.0)) {
        FourierMultiplier fm;
        fm.axis = 0;
        fm.values = mixed_F_table(params, grid, m[0], a[1], budget);
        return make_plan(std::move(fm));
    }
    if (m[0] == 0.0 && (a_zero || a[1] == 0.0)) {
        FourierMultiplier fm;
        fm.axis = 1;
        auto table = mixed_F_table(params, grid, m[1], a[0], budget);
        // re-index [bin1][i0] -> [i0][bin1]
        fm.values.resize(grid.size());
        for (int b = 0; b < N; ++b)
            for (int i = 0; i < N; ++i)
                fm.values[std::size_t(i) * N + b] = table[std::size_t(b) * N + i];
        return make_plan(std::move(fm));
    }

    // General perpendicular pair: rotate m to the first axis.
    double mnorm = std::hypot(m[0], m[1]);
    double theta = std::atan2(m[1], m[0]);
    double mhat0 = m[0] / mnorm, mhat1 = m[1] / mnorm;
    // a is perpendicular to m; its signed magnitude along (-mhat1, mhat0).
    double a_signed = a[0] * (-mhat1) + a[1] * mhat0;

    FourierMultiplier fm;
    fm.axis = 0;
    fm.values = mixed_F_table(params, grid, mnorm, a_signed, budget);

    Composite c;
    c.parts.push_back(rotation_plan(grid, theta));
    c.parts.push_back(make_plan(std::move(fm)));
    c.parts.push_back(rotation_plan(grid, -theta));
    return make_plan(std::move(c));
}

GridState apply_F(const qd::QDParams& params, const heis::OperatorCoeffs& xk,
                  const heis::OperatorCoeffs& yk, const GridState& psi,
                  const qd::AccuracyBudget& budget) {
    return apply_plan(build_F_plan(params, xk, yk, psi.grid, budget), psi);
}

GridState rotate_state(const GridState& psi, double phi) {
    return apply_plan(rotation_plan(psi.grid, phi), psi);
}

std::vector<TestStateSpec> random_test_states(int d, int count, std::uint64_t seed,
                                              double min_width, double max_width,
                                              double max_boost) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(min_width, max_width);
    std::uniform_real_distribution<double> boost(-max_boost, max_boost);
    std::vector<TestStateSpec> out;
    for (int i = 0; i < count; ++i) {
        TestStateSpec spec;
        for (int axis = 0; axis < d; ++axis) {
            spec.widths.push_back(width(rng));
            spec.boosts.push_back(boost(rng));
        }
        out.push_back(std::move(spec));
    }
    return out;
}

namespace {

ResidualReport run_pentagon(const Grid& grid, const std::vector<TestStateSpec>& states,
                            const std::vector<PlanPtr>& lhs, const std::vector<PlanPtr>& rhs,
                            int workers) {
    ResidualReport rep;
    rep.N = grid.N;
    rep.L = grid.L;
    rep.states = int(states.size());
    auto one = [&](const TestStateSpec& spec) {
        GridState psi = gaussian_state(grid, spec.widths, spec.boosts);
        GridState l = psi, r = psi;
        for (const auto& p : lhs) l = apply_plan(p, l);
        for (const auto& p : rhs) r = apply_plan(p, r);
        return l2_distance(l, r) / psi.norm();
    };
    if (workers <= 1) {
        for (const auto& spec : states) rep.per_state.push_back(one(spec));
    } else {
        std::vector<std::future<double>> futs;
        for (const auto& spec : states)
            futs.push_back(std::async(std::launch::async, one, spec));
        for (auto& f : futs) rep.per_state.push_back(f.get());
    }
    for (double r : rep.per_state) rep.max_residual = std::max(rep.max_residual, r);
    return rep;
}

}  // namespace

ResidualReport verify_phi_pentagon(double hbar, const Grid& grid,
                                   const std::vector<TestStateSpec>& states,
                                   const qd::AccuracyBudget& budget, int workers) {
    grid.validate();
    if (grid.d != 1) throw UnsupportedShape("phi pentagon runs on d = 1");
    const int N = grid.N;

    // Q = x, P = 2 pi i hbar d/dx = -2 hbar (-pi i d/dx). With hbar as the
    // formal unit the rational shadow gives [P, Q] = pi i * 2 hbar, i.e. the
    // required [P,Q] = 2 pi i hbar id; verified here before any numerics.
    heis::OperatorCoeffs Pshadow = heis::op_momentum(1, 0, Rat(-2));
    heis::OperatorCoeffs Qshadow = heis::op_position(1, 0, Rat(1));
    if (heis::commutator(Pshadow, Qshadow) != Rat(2))
        throw Error("Internal", "P,Q commutator bookkeeping broken");

    qd::PhiRealEvaluator phi(hbar, budget);

    Multiplier phiQ;
    phiQ.values.resize(N);
    {
        std::vector<cplx> vals(N);
        phi.lattice(grid.x(0), grid.dx(), N, vals.data());
        for (int j = 0; j < N; ++j) phiQ.values[j] = vals[j];
    }
    FourierMultiplier phiP;
    phiP.axis = 0;
    phiP.values.resize(N);
    {
        // P eigenvalue on bin b: -2 pi hbar p_b; monotone sweep then scatter
        std::vector<cplx> vals(N);
        double base = -2.0 * kPi * hbar * (kPi * (N / 2 - 1) / grid.L);
        double step = 2.0 * kPi * hbar * kPi / grid.L;
        phi.lattice(base, step, N, vals.data());
        // vals[j] corresponds to k = N/2-1-j
        for (int j = 0; j < N; ++j) {
            int k = N / 2 - 1 - j;
            int bin = k >= 0 ? k : k + N;
            phiP.values[bin] = vals[j];
        }
    }
    ChirpConjugated phiPQ;
    phiPQ.chirp.resize(N);
    for (int j = 0; j < N; ++j) {
        double x = grid.x(j);
        phiPQ.chirp[j] = std::exp(kI * x * x / (4.0 * kPi * hbar));
    }
    PlanPtr planQ = make_plan(std::move(phiQ));
    PlanPtr planP = make_plan(std::move(phiP));
    phiPQ.inner = planP;
    PlanPtr planPQ = make_plan(std::move(phiPQ));

    auto rep = run_pentagon(grid, states, {planQ, planP}, {planP, planPQ, planQ}, workers);
    rep.lambda = -1;
    rep.hbar = hbar;
    return rep;
}

ResidualReport verify_F_pentagon(const qd::QDParams& params, const Grid& grid,
                                 const std::vector<TestStateSpec>& states,
                                 const qd::AccuracyBudget& budget, int workers,
                                 bool corrupt_auto) {
    grid.validate();
    if (grid.d != 2) throw UnsupportedShape("F pentagon runs on d = 2");

    // The standard operator realization for eps = [[0,1],[-1,0]]:
    // x1 = -pi i d1, y1 = t2; x2 = -pi i d2, y2 = -t1.
    heis::OperatorCoeffs x1 = heis::op_momentum(2, 0);
    heis::OperatorCoeffs x2 = heis::op_momentum(2, 1);
    heis::OperatorCoeffs y1 = heis::op_position(2, 1);
    heis::OperatorCoeffs y2 = heis::op_position(2, 0, Rat(-1));
    // All six Heisenberg hypotheses, exactly, before any numerics.
    if (!heis::commutator(x1, x2).is_zero() || !heis::commutator(y1, y2).is_zero() ||
        !heis::commutator(x1, y1).is_zero() || !heis::commutator(x2, y2).is_zero() ||
        heis::commutator(x1, y2) != Rat(1) || heis::commutator(y1, x2) != Rat(1))
        throw Error("Internal", "pentagon operator hypotheses violated");

    heis::OperatorCoeffs x12 = heis::op_add(x1, x2);
    heis::OperatorCoeffs y12 = heis::op_add(y1, y2);

    PlanPtr F1 = build_F_plan(params, x1, y1, grid, budget);
    PlanPtr F2 = build_F_plan(params, x2, y2, grid, budget);
    PlanPtr F12 = build_F_plan(params, x12, y12, grid, budget);
    if (corrupt_auto) {
        // Negative control: apply the middle factor with the wrong arc data
        // (x1,y1 in place of x1+x2, y1+y2).
        F12 = build_F_plan(params, x1, y1, grid, budget);
    }

    auto rep = run_pentagon(grid, states, {F2, F1}, {F1, F12, F2}, workers);
    rep.lambda = params.lambda;
    rep.hbar = params.hbar;
    return rep;
}

}  // namespace ptolemy::op
