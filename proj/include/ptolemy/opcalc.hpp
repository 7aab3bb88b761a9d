#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "ptolemy/grid.hpp"
#include "ptolemy/heisenberg.hpp"
#include "ptolemy/qdilog.hpp"

namespace ptolemy::op {

// A recipe for applying a unitary to a sampled state. Every plan preserves
// the grid L2 norm up to discretization error.
struct Plan;
using PlanPtr = std::shared_ptr<const Plan>;

struct Multiplier {
    std::vector<cplx> values;  // pointwise, state-sized
};
struct FourierMultiplier {
    int axis = 0;
    std::vector<cplx> values;  // state-sized, indexed with the axis in bins
};
struct ChirpConjugated {
    std::vector<cplx> chirp;  // conjugation e^{i c Q^2}: chirp * inner * conj(chirp)
    PlanPtr inner;
};
struct Composite {
    std::vector<PlanPtr> parts;  // applied first-to-last
};

struct Plan {
    std::variant<Multiplier, FourierMultiplier, ChirpConjugated, Composite> op;
};

PlanPtr make_plan(Multiplier m);
PlanPtr make_plan(FourierMultiplier m);
PlanPtr make_plan(ChirpConjugated m);
PlanPtr make_plan(Composite m);

GridState apply_plan(const PlanPtr& plan, const GridState& psi);

// e^{i alpha A} for a first-order A = pos + mom part (scalar must vanish):
// Fourier-side shift, then position phase, then the exact BCH scalar
// e^{i alpha^2 c / 2} with [A_pos, A_mom] = i c id.
GridState apply_weyl(const heis::OperatorCoeffs& A, double alpha, const GridState& psi);

// Functional-calculus unitary F^hbar_Lambda(xk, yk) for xk a pure momentum
// combination and yk a pure position combination with [xk, yk] = 0 exactly.
// A non-axis-aligned pair is handled by one orthogonal rotation realized as
// three FFT shears (exact on band-limited periodic data).
PlanPtr build_F_plan(const qd::QDParams& params, const heis::OperatorCoeffs& xk,
                     const heis::OperatorCoeffs& yk, const Grid& grid,
                     const qd::AccuracyBudget& budget = {});

GridState apply_F(const qd::QDParams& params, const heis::OperatorCoeffs& xk,
                  const heis::OperatorCoeffs& yk, const GridState& psi,
                  const qd::AccuracyBudget& budget = {});

// Rotation of the sampled function by angle phi about the grid center,
// as the three-shear FFT factorization.
GridState rotate_state(const GridState& psi, double phi);

struct ResidualReport {
    int lambda = 0;
    double hbar = 0;
    int N = 0;
    double L = 0;
    int states = 0;
    double max_residual = 0;
    std::vector<double> per_state;
};

struct TestStateSpec {
    std::vector<double> widths;
    std::vector<double> boosts;
};

std::vector<TestStateSpec> random_test_states(int d, int count, std::uint64_t seed,
                                              double min_width = 0.5, double max_width = 2.0,
                                              double max_boost = 1.0);

// Phi^hbar(P) Phi^hbar(Q) = Phi^hbar(Q) Phi^hbar(P+Q) Phi^hbar(P) on d=1,
// with Q = multiplication by x, P = 2 pi i hbar d/dx ([P,Q] = 2 pi i hbar id)
// and Phi(P+Q) realized by chirp conjugation e^{iQ^2/(4 pi hbar)}.
ResidualReport verify_phi_pentagon(double hbar, const Grid& grid,
                                   const std::vector<TestStateSpec>& states,
                                   const qd::AccuracyBudget& budget = {}, int workers = 1);

// F(x1,y1) F(x2,y2) = F(x2,y2) F(x1+x2,y1+y2) F(x1,y1) on d=2 with
// x1 = -pi i d1, x2 = -pi i d2, y1 = t2, y2 = -t1.
ResidualReport verify_F_pentagon(const qd::QDParams& params, const Grid& grid,
                                 const std::vector<TestStateSpec>& states,
                                 const qd::AccuracyBudget& budget = {}, int workers = 1,
                                 bool corrupt_auto = false);

}  // namespace ptolemy::op
