#pragma once

#include <string>
#include <vector>

namespace frontlab::asym {

/// F(x) = 1/4 - (x_hi - x)^2, the logistic factor of the input equation.
double eval_F(double x, double x_hi);

/// Integral_a^b dx / F(x) via the closed-form antiderivative
/// log((1/2 + (x - x_hi)) / (1/2 - (x - x_hi))). Requires F > 0 on [a, b].
double inv_F_integral(double a, double b, double x_hi);

/// Same integral by adaptive quadrature; kept as an independent route for
/// cross-checks.
double inv_F_integral_quadrature(double a, double b, double x_hi,
                                 double abs_tol = 1e-13);

/// F_bar = 2 Integral_0^{x_hi} dx/F(x).
double f_bar(double x_hi);

/// s_{1/2} = Integral_0^{x_hi+x_lo} dx/F(x).
double s_half(double x_lo, double x_hi);

/// One produced front constant: the n-th front becomes steady near time s
/// at scaled depth y.
struct FrontConstant {
    double s;
    double y;
};

/// The constants (s_j, y_j), j = 1..n-1 entering G_n.
struct GCoefficients {
    std::vector<FrontConstant> pairs;

    int n() const { return static_cast<int>(pairs.size()) + 1; }
    double s_prev() const { return pairs.empty() ? 0.0 : pairs.back().s; }
};

/// G_n(t) by the recursive form: G_1 = 0, G_n = -G_{n-1} - 2E(y sqrt(s/t)).
double eval_G(const GCoefficients& coeffs, double t);

/// G_n(t) by the direct alternating sum; independent route for cross-checks.
double eval_G_direct(const GCoefficients& coeffs, double t);

/// H_n(t, z) = -G_n(t) - 2E(z/sqrt(t)) + 1. Asserts 0 < -G_n(t)+1 < 2,
/// which the construction guarantees for t >= s_tilde_n.
double eval_H(const GCoefficients& coeffs, double t, double z);

/// Z_n(t): the unique positive root of H_n(t, .) = 0,
/// z = sqrt(t) E^{-1}((1 - G_n(t))/2).
double solve_Z(const GCoefficients& coeffs, double t);

/// Solver knobs. The acceptance suite re-runs the schedule with all of them
/// tightened tenfold, so every tolerance must be honored literally.
struct AlgoOptions {
    double quad_abs_tol = 1e-12;
    long quad_max_intervals = 1000000;
    double root_rel_tol = 1e-12;
    double golden_rel_tol = 1e-10;
    double deriv_tol_scale = 1e-7; // classification tolerance = scale*sqrt(s_tilde)
    double deriv_step = 1e-6;      // relative step of the central difference
    int classify_points = 512;
    double residual_tol = 1e-9;    // inductive-invariant guard
    double bracket_cap_factor = 1e3;
};

/// s_tilde_n: unique root of Integral_{s_{n-1}}^{s} (G_n(t)+1) dt = F_bar.
double solve_s_tilde(const GCoefficients& coeffs, double x_hi, double T,
                     const AlgoOptions& opts = {});

enum class Case { A, B, Terminated };

std::string to_string(Case c);

/// Classifies the geometry of Z_n on [s_tilde*(1+1e-9), max(T, 4 s_tilde)]
/// from central-difference samples of its slope: case A if the slope never
/// dips below -tol (s_n = s_tilde), case B if it changes sign exactly once
/// from - to + (s_n = interior argmin of Z_n), Terminated otherwise.
struct Classification {
    Case kase;
    double s_n; // meaningful for A and B
};

Classification classify_and_solve_s_n(const GCoefficients& coeffs,
                                      double s_tilde, double T,
                                      const AlgoOptions& opts = {});

/// y_n = Z_n(s_n)/sqrt(s_n); verifies the inductive relations for G_{n+1}
/// (zero residual at s_n, positivity beyond) before returning.
double compute_y_n(const GCoefficients& coeffs, double s_n, double T,
                   const AlgoOptions& opts = {});

struct ScheduleRecord {
    int n;
    Case kase;
    double s_tilde;
    double s;      // NaN when terminated
    double y;      // NaN when terminated
    double s_half; // root of the half-interval equation for this n
};

struct Schedule {
    double x_lo, x_hi, T;
    double f_bar;
    double s_half_const; // Integral_0^{x_hi+x_lo} dx/F
    std::vector<ScheduleRecord> records;

    /// Coefficients (s_j, y_j) for j = 1..k (k <= produced records).
    GCoefficients coefficients(int k) const;
    int produced() const; // records with case A or B
};

/// Runs the recursive algorithm until termination, s_n >= T, or n_max.
Schedule run_algorithm(double x_lo, double x_hi, double T, int n_max,
                       const AlgoOptions& opts = {});

struct FrontPrediction {
    int n;
    double t; // = s_n
    double q; // 2 y_n sqrt(D s_n)
    double x; // x_hi - q
};

/// Theorem-style predictions at a concrete diffusion coefficient. Throws if
/// any q_n reaches the domain width (D too large for the asymptotic regime).
std::vector<FrontPrediction> predict_fronts(const Schedule& schedule, double D);

} // namespace frontlab::asym
