#include "frontlab/asymptotics.hpp"

#include "frontlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frontlab::asym {

using num::adaptive_simpson;
using num::bisect_root;
using num::erf_e;
using num::erf_e_inv;

double eval_F(double x, double x_hi)
{
    const double d = x_hi - x;
    return 0.25 - d * d;
}

double inv_F_integral(double a, double b, double x_hi)
{
    // antiderivative of 1/(1/4 - u^2) with u = x - x_hi
    const auto anti = [x_hi](double x) {
        const double u = x - x_hi;
        return std::log((0.5 + u) / (0.5 - u));
    };
    if (!(a > x_hi - 0.5 && a < x_hi + 0.5 && b > x_hi - 0.5 && b < x_hi + 0.5))
        throw std::invalid_argument("inv_F_integral: range touches a zero of F");
    return anti(b) - anti(a);
}

double inv_F_integral_quadrature(double a, double b, double x_hi, double abs_tol)
{
    if (!(a > x_hi - 0.5 && a < x_hi + 0.5 && b > x_hi - 0.5 && b < x_hi + 0.5))
        throw std::invalid_argument("inv_F_integral: range touches a zero of F");
    return adaptive_simpson([x_hi](double x) { return 1.0 / eval_F(x, x_hi); },
                            a, b, abs_tol);
}

double f_bar(double x_hi)
{
    if (!(x_hi > 0.0 && x_hi < 0.5))
        throw std::invalid_argument("f_bar: need 0 < x_hi < 1/2");
    return 2.0 * inv_F_integral(0.0, x_hi, x_hi);
}

double s_half(double x_lo, double x_hi)
{
    if (!(x_lo > 0.0 && x_lo < x_hi && x_hi < 0.5))
        throw std::invalid_argument("s_half: need 0 < x_lo < x_hi < 1/2");
    return inv_F_integral(0.0, x_hi + x_lo, x_hi);
}

double eval_G(const GCoefficients& coeffs, double t)
{
    if (!(t > 0.0))
        throw std::invalid_argument("eval_G: need t > 0");
    double g = 0.0;
    for (const auto& [s, y] : coeffs.pairs)
        g = -g - 2.0 * erf_e(y * std::sqrt(s / t));
    return g;
}

double eval_G_direct(const GCoefficients& coeffs, double t)
{
    if (!(t > 0.0))
        throw std::invalid_argument("eval_G: need t > 0");
    const int n = coeffs.n();
    double g = 0.0;
    for (int j = 1; j < n; ++j) {
        const auto& [s, y] = coeffs.pairs[j - 1];
        const double term = erf_e(y * std::sqrt(s / t));
        g += ((n + j) % 2 == 0 ? term : -term);
    }
    return 2.0 * g;
}

double eval_H(const GCoefficients& coeffs, double t, double z)
{
    const double one_minus_g = 1.0 - eval_G(coeffs, t);
    if (!(one_minus_g > 0.0 && one_minus_g < 2.0))
        throw std::runtime_error("eval_H: 1 - G_n(t) left (0,2); inductive invariant corrupt");
    return one_minus_g - 2.0 * erf_e(z / std::sqrt(t));
}

double solve_Z(const GCoefficients& coeffs, double t)
{
    const double p = 0.5 * (1.0 - eval_G(coeffs, t));
    if (!(p > 0.0 && p < 1.0))
        throw std::runtime_error("solve_Z: (1 - G_n(t))/2 left (0,1)");
    return std::sqrt(t) * erf_e_inv(p);
}

double solve_s_tilde(const GCoefficients& coeffs, double x_hi, double T,
                     const AlgoOptions& opts)
{
    const double target = f_bar(x_hi);
    const double s_prev = coeffs.s_prev();

    // guard the inductive invariant before trusting the integrand
    if (!coeffs.pairs.empty()) {
        const double res = eval_G(coeffs, s_prev) + 1.0;
        if (std::abs(res) > 1e-8)
            throw std::runtime_error("solve_s_tilde: G_n(s_{n-1})+1 residual too large");
    }

    const auto integrand = [&](double t) { return eval_G(coeffs, t) + 1.0; };
    const auto lhs = [&](double s) {
        if (s <= s_prev)
            return -target;
        return adaptive_simpson(integrand, s_prev, s, opts.quad_abs_tol,
                                opts.quad_max_intervals) - target;
    };

    const double cap = opts.bracket_cap_factor * std::max(T, std::max(s_prev, 1.0));
    const double first = s_prev > 0.0 ? s_prev : target;
    return num::bisect_root_growing(lhs, s_prev, first, cap, opts.root_rel_tol);
}

std::string to_string(Case c)
{
    switch (c) {
    case Case::A: return "A";
    case Case::B: return "B";
    case Case::Terminated: return "TERMINATED";
    }
    return "?";
}

Classification classify_and_solve_s_n(const GCoefficients& coeffs,
                                      double s_tilde, double T,
                                      const AlgoOptions& opts)
{
    const double lo = s_tilde * (1.0 + 1e-9);
    const double hi = std::max(T, 4.0 * s_tilde);
    const int n_pts = opts.classify_points;
    const double ratio = std::pow(hi / lo, 1.0 / (n_pts - 1));
    const double tol = opts.deriv_tol_scale * std::sqrt(s_tilde);

    std::vector<double> ts(n_pts), zs(n_pts), dz(n_pts);
    double t = lo;
    for (int i = 0; i < n_pts; ++i, t *= ratio) {
        ts[i] = t;
        zs[i] = solve_Z(coeffs, t);
        const double h = opts.deriv_step * t;
        dz[i] = (solve_Z(coeffs, t + h) - solve_Z(coeffs, t - h)) / (2.0 * h);
    }

    bool any_negative = false;
    for (double d : dz)
        if (d <= -tol) {
            any_negative = true;
            break;
        }
    if (!any_negative)
        return {Case::A, s_tilde};

    // sign sequence ignoring the +-tol dead band
    std::vector<int> signs;
    for (double d : dz) {
        const int s = d > tol ? 1 : (d < -tol ? -1 : 0);
        if (s != 0 && (signs.empty() || signs.back() != s))
            signs.push_back(s);
    }
    const bool single_recovery = signs.size() == 2 && signs[0] == -1 && signs[1] == 1;
    if (!single_recovery)
        return {Case::Terminated, std::numeric_limits<double>::quiet_NaN()};

    // bracket the interior minimum of Z_n around the smallest sample
    int imin = 0;
    for (int i = 1; i < n_pts; ++i)
        if (zs[i] < zs[imin])
            imin = i;
    const double a = ts[std::max(0, imin - 1)];
    const double b = ts[std::min(n_pts - 1, imin + 1)];
    const double s_n = num::golden_min([&](double tt) { return solve_Z(coeffs, tt); },
                                       a, b, opts.golden_rel_tol);
    return {Case::B, s_n};
}

double compute_y_n(const GCoefficients& coeffs, double s_n, double T,
                   const AlgoOptions& opts)
{
    const double y_n = solve_Z(coeffs, s_n) / std::sqrt(s_n);
    if (!(y_n > 0.0))
        throw std::runtime_error("compute_y_n: nonpositive y_n");

    GCoefficients next = coeffs;
    next.pairs.push_back({s_n, y_n});

    const double res = eval_G(next, s_n) + 1.0;
    if (std::abs(res) > opts.residual_tol)
        throw std::runtime_error("compute_y_n: G_{n+1}(s_n)+1 residual " +
                                 std::to_string(res));
    const double hi = std::max(T, 4.0 * s_n);
    const double ratio = std::pow(hi / (s_n * (1.0 + 1e-9)), 1.0 / 511.0);
    double t = s_n * (1.0 + 1e-9);
    for (int i = 0; i < 512; ++i, t *= ratio)
        if (eval_G(next, t) + 1.0 <= -opts.residual_tol)
            throw std::runtime_error("compute_y_n: G_{n+1}+1 dips negative past s_n");
    return y_n;
}

GCoefficients Schedule::coefficients(int k) const
{
    GCoefficients c;
    for (int j = 0; j < k; ++j) {
        const auto& r = records[j];
        if (r.kase == Case::Terminated)
            break;
        c.pairs.push_back({r.s, r.y});
    }
    return c;
}

int Schedule::produced() const
{
    int k = 0;
    for (const auto& r : records)
        if (r.kase != Case::Terminated)
            ++k;
    return k;
}

Schedule run_algorithm(double x_lo, double x_hi, double T, int n_max,
                       const AlgoOptions& opts)
{
    if (!(x_lo > 0.0 && x_lo < x_hi && x_hi < 0.5))
        throw std::invalid_argument("run_algorithm: need 0 < x_lo < x_hi < 1/2");
    const double fb = f_bar(x_hi);
    if (!(T > fb))
        throw std::invalid_argument("run_algorithm: horizon must exceed F_bar");
    if (n_max < 1)
        throw std::invalid_argument("run_algorithm: need n_max >= 1");

    Schedule sched;
    sched.x_lo = x_lo;
    sched.x_hi = x_hi;
    sched.T = T;
    sched.f_bar = fb;
    sched.s_half_const = s_half(x_lo, x_hi);

    // basis: s_1 = F_bar, y_1 the root of 2E(y) = 1; the half-interval
    // checkpoint solves the same equation with the smaller right-hand side
    GCoefficients coeffs;
    const double y_1 = erf_e_inv(0.5);
    sched.records.push_back({1, Case::A, fb, fb, y_1, sched.s_half_const});
    coeffs.pairs.push_back({fb, y_1});

    for (int n = 2; n <= n_max; ++n) {
        if (coeffs.s_prev() >= T)
            break;

        const auto half_lhs = [&](double s) {
            if (s <= coeffs.s_prev())
                return -sched.s_half_const;
            return adaptive_simpson([&](double t) { return eval_G(coeffs, t) + 1.0; },
                                    coeffs.s_prev(), s, opts.quad_abs_tol,
                                    opts.quad_max_intervals) - sched.s_half_const;
        };
        const double cap = opts.bracket_cap_factor * std::max(T, coeffs.s_prev());
        const double s_half_n = num::bisect_root_growing(half_lhs, coeffs.s_prev(),
                                                         coeffs.s_prev(), cap,
                                                         opts.root_rel_tol);

        const double s_tilde = solve_s_tilde(coeffs, x_hi, T, opts);
        const auto cls = classify_and_solve_s_n(coeffs, s_tilde, T, opts);
        if (cls.kase == Case::Terminated) {
            sched.records.push_back({n, Case::Terminated, s_tilde,
                                     std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN(),
                                     s_half_n});
            break;
        }
        const double y_n = compute_y_n(coeffs, cls.s_n, T, opts);
        sched.records.push_back({n, cls.kase, s_tilde, cls.s_n, y_n, s_half_n});
        coeffs.pairs.push_back({cls.s_n, y_n});
    }
    return sched;
}

std::vector<FrontPrediction> predict_fronts(const Schedule& schedule, double D)
{
    if (!(D > 0.0))
        throw std::invalid_argument("predict_fronts: need D > 0");
    if (schedule.records.empty())
        throw std::invalid_argument("predict_fronts: empty schedule");

    const double width = schedule.x_hi - schedule.x_lo;
    std::vector<FrontPrediction> out;
    double prev_x = schedule.x_hi;
    for (const auto& r : schedule.records) {
        if (r.kase == Case::Terminated)
            break;
        const double q = 2.0 * r.y * std::sqrt(D * r.s);
        if (q >= width)
            throw std::runtime_error(
                "predict_fronts: q_" + std::to_string(r.n) +
                " reaches the domain width; D too large for the asymptotic regime");
        const double x = schedule.x_hi - q;
        if (!(x < prev_x))
            throw std::runtime_error("predict_fronts: front ordering violated");
        out.push_back({r.n, r.s, q, x});
        prev_x = x;
    }
    return out;
}

} // namespace frontlab::asym
