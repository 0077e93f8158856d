#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace frontlab::num {

using ScalarFn = std::function<double(double)>;

/// Thrown when a solver runs out of iterations or subdivisions.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance.
/// The interval budget caps runaway subdivision on pathological integrands.
double adaptive_simpson(const ScalarFn& f, double a, double b,
                        double abs_tol = 1e-12, long max_intervals = 1000000);

/// Root of f on [lo, hi] by plain bisection; f(lo) and f(hi) must have
/// opposite signs (zero endpoint values are accepted as roots).
/// Terminates when the bracket is below rel_tol*|x| + abs_tol.
double bisect_root(const ScalarFn& f, double lo, double hi,
                   double rel_tol = 1e-12, double abs_tol = 0.0);

/// Expands hi geometrically from lo until f changes sign, then bisects.
/// Used for monotone increasing objectives with a known-negative left end.
/// Throws ConvergenceError if no sign change is found below cap.
double bisect_root_growing(const ScalarFn& f, double lo, double first_step,
                           double cap, double rel_tol = 1e-12);

/// Golden-section minimizer on [a, b] to relative x-tolerance.
double golden_min(const ScalarFn& f, double a, double b, double rel_tol = 1e-10);

/// E(y) = (2/sqrt(pi)) * Integral_0^y exp(-z^2) dz, i.e. the error function.
double erf_e(double y);

/// Inverse of erf_e on (0, 1). Newton iteration with a bisection safeguard.
double erf_e_inv(double p);

/// Solves a tridiagonal system in place: diag a (sub), b (main), c (super).
/// rhs is overwritten with the solution.
void solve_tridiagonal(const std::vector<double>& sub, std::vector<double> diag,
                       const std::vector<double>& sup, std::vector<double>& rhs);

// --- scalar ODE integration (Dormand-Prince 5(4) with event bisection) ---

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.0;   // 0 = no cap
    double first_step = 0.0; // 0 = automatic
    double event_tol = 1e-12;  // time localization tolerance for events
    long max_steps = 50000000;
};

struct OdePoint {
    double t;
    double y;
};

/// Result of one integration leg. If `event_hit` the leg ended at a root of
/// the event function, localized to opts.event_tol in t.
struct OdeLeg {
    std::vector<OdePoint> points; // accepted steps, including both ends
    bool event_hit = false;
};

/// Integrates dy/dt = f(t, y) from (t0, y0) to t_end, or until the event
/// function g(t, y) crosses zero in the given direction (+1 up, -1 down,
/// 0 any). Pass an empty event to integrate plainly to t_end.
OdeLeg integrate_scalar_ode(const std::function<double(double, double)>& f,
                            double t0, double y0, double t_end,
                            const OdeOptions& opts = {},
                            const std::function<double(double, double)>& event = {},
                            int event_direction = 0);

} // namespace frontlab::num
