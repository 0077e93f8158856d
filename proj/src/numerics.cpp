#include "frontlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlab::num {

namespace {

double simpson(double fa, double fm, double fb, double h)
{
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

struct SimpsonWorker {
    const ScalarFn& f;
    long budget;

    double run(double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth)
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(fa, flm, fm, m - a);
        const double right = simpson(fm, frm, fb, b - m);
        const double err = left + right - whole;
        if (depth > 0 && std::abs(err) <= 15.0 * tol)
            return left + right + err / 15.0;
        if (depth > 60 || --budget <= 0)
            throw ConvergenceError("adaptive_simpson: interval budget exhausted");
        return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

} // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b,
                        double abs_tol, long max_intervals)
{
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("adaptive_simpson: non-finite bounds");
    if (a == b)
        return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    SimpsonWorker w{f, max_intervals};
    return w.run(a, b, fa, fm, fb, whole, abs_tol, 0);
}

double bisect_root(const ScalarFn& f, double lo, double hi,
                   double rel_tol, double abs_tol)
{
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::abs(mid) + abs_tol)
            return mid;
        const double fmid = f(mid);
        if (fmid == 0.0)
            return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double bisect_root_growing(const ScalarFn& f, double lo, double first_step,
                           double cap, double rel_tol)
{
    const double flo = f(lo);
    if (flo == 0.0)
        return lo;
    if (flo > 0.0)
        throw std::invalid_argument("bisect_root_growing: f(lo) must be <= 0");
    double step = first_step;
    double a = lo;
    for (;;) {
        double b = a + step;
        if (b > cap)
            b = cap;
        if (f(b) >= 0.0)
            return bisect_root(f, a, b, rel_tol);
        if (b >= cap)
            throw ConvergenceError("bisect_root_growing: no sign change below cap");
        a = b;
        step *= 2.0;
    }
}

double golden_min(const ScalarFn& f, double a, double b, double rel_tol)
{
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * (std::abs(x1) + std::abs(x2)) * 0.5) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

double erf_e(double y)
{
    return std::erf(y);
}

double erf_e_inv(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("erf_e_inv: argument must lie in (0,1)");
    // bracket: erf(6) is 1 to double precision
    double lo = 0.0, hi = 6.0;
    // Newton from a crude seed, falling back to bisection when the step
    // leaves the bracket
    constexpr double two_over_sqrt_pi = 1.1283791670955126;
    double y = 0.8862269254527580 * p; // sqrt(pi)/2 * p, exact for small p
    for (int it = 0; it < 100; ++it) {
        const double r = std::erf(y) - p;
        if (r > 0.0)
            hi = y;
        else
            lo = y;
        const double dy = r / (two_over_sqrt_pi * std::exp(-y * y));
        double next = y - dy;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - y) <= 1e-16 + 1e-15 * std::abs(y))
            return next;
        y = next;
    }
    return y;
}

void solve_tridiagonal(const std::vector<double>& sub, std::vector<double> diag,
                       const std::vector<double>& sup, std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct DpStep {
    double y;   // 5th order solution
    double err; // embedded error estimate
    double k7;  // FSAL derivative at the step end
};

DpStep dp_step(const std::function<double(double, double)>& f,
               double t, double y, double k1, double h)
{
    const double k2 = f(t + c2 * h, y + h * a21 * k1);
    const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + h, y5);
    const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, err, k7};
}

} // namespace

OdeLeg integrate_scalar_ode(const std::function<double(double, double)>& f,
                            double t0, double y0, double t_end,
                            const OdeOptions& opts,
                            const std::function<double(double, double)>& event,
                            int event_direction)
{
    OdeLeg leg;
    leg.points.push_back({t0, y0});
    if (t_end <= t0)
        return leg;

    double t = t0, y = y0;
    double k1 = f(t, y);
    double g_prev = event ? event(t, y) : 0.0;

    double h = opts.first_step;
    if (h <= 0.0) {
        const double scale = opts.abs_tol + opts.rel_tol * std::abs(y);
        h = std::abs(k1) > 0.0 ? 0.01 * std::pow(scale / std::abs(k1), 0.5)
                               : 1e-6 * (t_end - t0);
        h = std::max(h, 1e-12 * (t_end - t0));
    }
    if (opts.max_step > 0.0)
        h = std::min(h, opts.max_step);

    for (long n = 0; n < opts.max_steps; ++n) {
        if (t >= t_end)
            return leg;
        bool clipped = false;
        if (t + h >= t_end) {
            h = t_end - t;
            clipped = true;
        }

        const DpStep s = dp_step(f, t, y, k1, h);
        const double scale = opts.abs_tol +
                             opts.rel_tol * std::max(std::abs(y), std::abs(s.y));
        const double err_ratio = std::abs(s.err) / scale;

        if (err_ratio > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err_ratio, -0.2));
            continue;
        }

        // accepted; look for an event crossing inside the step
        if (event) {
            const double g_new = event(t + h, s.y);
            const bool crossed =
                (g_prev != 0.0 || g_new != 0.0) &&
                ((event_direction >= 0 && g_prev < 0.0 && g_new >= 0.0) ||
                 (event_direction <= 0 && g_prev > 0.0 && g_new <= 0.0));
            if (crossed) {
                // bisect on the sub-step length, re-stepping from (t, y)
                double lo = 0.0, hi = h, y_hi = s.y;
                while (hi - lo > opts.event_tol) {
                    const double mid = 0.5 * (lo + hi);
                    const DpStep sm = dp_step(f, t, y, k1, mid);
                    const double gm = event(t + mid, sm.y);
                    const bool hit = (event_direction >= 0 && g_prev < 0.0 && gm >= 0.0) ||
                                     (event_direction <= 0 && g_prev > 0.0 && gm <= 0.0);
                    if (hit) {
                        hi = mid;
                        y_hi = sm.y;
                    } else {
                        lo = mid;
                    }
                }
                leg.points.push_back({t + hi, y_hi});
                leg.event_hit = true;
                return leg;
            }
            g_prev = g_new;
        }

        t += h;
        y = s.y;
        k1 = s.k7;
        leg.points.push_back({t, y});

        if (!clipped) {
            const double grow = err_ratio > 0.0
                                    ? std::min(5.0, 0.9 * std::pow(err_ratio, -0.2))
                                    : 5.0;
            h *= grow;
        }
        if (opts.max_step > 0.0)
            h = std::min(h, opts.max_step);
    }
    throw ConvergenceError("integrate_scalar_ode: step budget exhausted");
}

} // namespace frontlab::num
