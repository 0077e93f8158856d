#include "frontlab/pde.hpp"

#include "frontlab/asymptotics.hpp"
#include "frontlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frontlab::pde {

using relay::SimpleConfiguration;
using relay::ThresholdDensity;

double ModelParams::nan_default()
{
    return std::numeric_limits<double>::quiet_NaN();
}

DensityProfile density_profile_from_string(const std::string& name)
{
    if (name == "gaussian")
        return DensityProfile::Gaussian;
    if (name == "uniform")
        return DensityProfile::Uniform;
    throw std::invalid_argument("unknown density profile: " + name);
}

std::string to_string(DensityProfile profile)
{
    return profile == DensityProfile::Gaussian ? "gaussian" : "uniform";
}

ModelParams ModelParams::resolved() const
{
    ModelParams p = *this;
    if (std::isnan(p.v0))
        p.v0 = std::sqrt(p.D);
    if (std::isnan(p.w0))
        p.w0 = p.x_hi - std::pow(p.D, 0.25);
    if (std::isnan(p.u0_sigma))
        p.u0_sigma = std::sqrt(p.D);
    if (std::isnan(p.dt_max)) {
        const double h = (p.x_hi - p.x_lo) / p.M;
        p.dt_max = std::min(0.2 * h * h / p.D, 1e-2);
    }
    if (std::isnan(p.sample_dt))
        p.sample_dt = p.T / 2000.0;
    return p;
}

void ModelParams::validate() const
{
    if (!(x_lo > 0.0 && x_lo < x_hi && x_hi < 0.5))
        throw std::invalid_argument("params: need 0 < x_lo < x_hi < 1/2");
    if (!(D > 0.0))
        throw std::invalid_argument("params: need D > 0");
    if (!(T > 0.0))
        throw std::invalid_argument("params: need T > 0");
    if (M < 4)
        throw std::invalid_argument("params: need at least 4 grid cells");
    if (!(v0 >= 0.0))
        throw std::invalid_argument("params: need v0 >= 0");
    if (!(std::abs(w0) <= x_hi))
        throw std::invalid_argument("params: need |w0| <= x_hi");
    if (!(u0_sigma > 0.0))
        throw std::invalid_argument("params: need u0_sigma > 0");
    if (!(dt_max > 0.0))
        throw std::invalid_argument("params: need dt_max > 0");
    if (!(sample_dt > 0.0))
        throw std::invalid_argument("params: need sample_dt > 0");
    SimpleConfiguration::deserialize(r0, x_lo, x_hi); // throws if malformed
}

SystemState initial_state(const ModelParams& raw)
{
    const ModelParams p = raw.resolved();
    p.validate();

    std::vector<double> u(p.M + 1);
    const double h = (p.x_hi - p.x_lo) / p.M;
    for (int i = 0; i <= p.M; ++i) {
        const double x = p.x_lo + h * i;
        u[i] = p.u0_profile == DensityProfile::Gaussian
                   ? std::exp(-0.5 * std::pow((x - p.x_hi) / p.u0_sigma, 2))
                   : 1.0;
    }
    ThresholdDensity density(p.x_lo, p.x_hi, std::move(u));
    const double mass = relay::total_mass(density);
    for (double& v : density.values())
        v /= mass;

    SystemState st{0.0, std::move(density), p.v0, p.w0,
                   SimpleConfiguration::deserialize(p.r0, p.x_lo, p.x_hi),
                   0.0, 0};
    const double P = relay::preisach_moment(st.density, st.config);
    st.w_rate = -(0.25 - st.w * st.w) * P;
    st.direction = st.w_rate > 0.0 ? 1 : (st.w_rate < 0.0 ? -1 : 0);
    return st;
}

namespace {

constexpr double kEventTimeTol = 1e-10;
constexpr double kUnderflow = 1e-300;

/// Crank-Nicolson diffusion with ghost-node Neumann closure plus an explicit
/// reaction source: solves (I - r L) u' = (I + r L) u + dt * react.
std::vector<double> diffuse(const std::vector<double>& u,
                            const std::vector<double>& react, double dt,
                            double D, double h)
{
    const std::size_t n = u.size();
    const double r = D * dt / (2.0 * h * h);

    std::vector<double> rhs(n);
    rhs[0] = u[0] + r * (2.0 * u[1] - 2.0 * u[0]) + dt * react[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        rhs[i] = u[i] + r * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + dt * react[i];
    rhs[n - 1] = u[n - 1] + r * (2.0 * u[n - 2] - 2.0 * u[n - 1]) + dt * react[n - 1];

    std::vector<double> sub(n, -r), sup(n, -r), diag(n, 1.0 + 2.0 * r);
    sup[0] = -2.0 * r;
    sub[n - 1] = -2.0 * r;
    num::solve_tridiagonal(sub, std::move(diag), sup, rhs);
    return rhs;
}

/// Transformed system (u, v, w): the production formulation.
struct TransformedStepper {
    SystemState s;
    const ModelParams* p;
    std::vector<double> removed; // fronts swallowed by the last advance

    double t() const { return s.t; }
    double w() const { return s.w; }
    double v() const { return s.v; }
    double w_rate() const { return s.w_rate; }
    const SimpleConfiguration& config() const { return s.config; }

    TransformedStepper advanced(double dt) const
    {
        if (!(dt > 0.0))
            throw std::invalid_argument("step: need dt > 0");
        const double u_total = relay::total_mass(s.density);
        const double P = relay::preisach_moment(s.density, s.config);
        const double h = s.density.h();

        const bool frozen = s.v < kUnderflow;
        std::vector<double> react(s.density.values().size(), 0.0);
        if (!frozen)
            for (std::size_t i = 0; i < react.size(); ++i) {
                const int ri = s.config.sign_at(s.density.node(int(i)));
                react[i] = (0.5 + s.w * ri) * s.density.values()[i] * s.v;
            }

        TransformedStepper next{s, p, {}};
        next.s.density = ThresholdDensity(
            s.density.x_lo(), s.density.x_hi(),
            diffuse(s.density.values(), react, dt, p->D, h));
        next.s.t = s.t + dt;
        if (!frozen) {
            next.s.v = s.v * (1.0 - dt * (0.5 * u_total + s.w * P));
            next.s.w = s.w - dt * (0.25 - s.w * s.w) * P;
            auto ev = relay::config_evolve(s.config, s.w, next.s.w);
            next.s.config = std::move(ev.config);
            next.removed = std::move(ev.removed_fronts);
        }
        const double P_new = relay::preisach_moment(next.s.density, next.s.config);
        next.s.w_rate = frozen ? 0.0 : -(0.25 - next.s.w * next.s.w) * P_new;
        next.s.direction = s.direction;
        return next;
    }
};

/// Original two-nutrient system (u, f1, fm1); v and w are derived outputs.
struct OriginalStepper {
    double t_ = 0.0;
    ThresholdDensity density;
    double f1, fm1;
    SimpleConfiguration cfg;
    const ModelParams* p;
    double frozen_w; // reported once f1 + fm1 underflows
    bool frozen = false;
    std::vector<double> removed;

    double t() const { return t_; }
    double v() const { return f1 + fm1; }
    double w() const { return frozen ? frozen_w : f1 / (f1 + fm1) - 0.5; }
    const SimpleConfiguration& config() const { return cfg; }

    double w_rate() const
    {
        if (frozen)
            return 0.0;
        const double ww = w();
        return -(0.25 - ww * ww) * relay::preisach_moment(density, cfg);
    }

    OriginalStepper advanced(double dt) const
    {
        if (!(dt > 0.0))
            throw std::invalid_argument("step: need dt > 0");
        const double u_total = relay::total_mass(density);
        const double P = relay::preisach_moment(density, cfg);
        const double a1 = 0.5 * (u_total + P);
        const double am1 = 0.5 * (u_total - P);

        std::vector<double> react(density.values().size(), 0.0);
        if (!frozen)
            for (std::size_t i = 0; i < react.size(); ++i) {
                const int ri = cfg.sign_at(density.node(int(i)));
                react[i] = 0.5 * density.values()[i] *
                           ((1 + ri) * f1 + (1 - ri) * fm1);
            }

        OriginalStepper next = *this;
        next.removed.clear();
        next.density = ThresholdDensity(density.x_lo(), density.x_hi(),
                                        diffuse(density.values(), react, dt,
                                                p->D, density.h()));
        next.t_ = t_ + dt;
        if (!frozen) {
            const double w_old = w();
            next.f1 = f1 * (1.0 - dt * a1);
            next.fm1 = fm1 * (1.0 - dt * am1);
            if (next.f1 + next.fm1 < kUnderflow) {
                next.frozen = true;
                next.frozen_w = w_old;
            } else {
                auto ev = relay::config_evolve(cfg, w_old, next.w());
                next.cfg = std::move(ev.config);
                next.removed = std::move(ev.removed_fronts);
            }
        }
        return next;
    }
};

/// Crossing targets for a monotone w segment: relay thresholds, the zero
/// line and live front positions (+f when rising, -f when falling).
template <class Stepper>
std::vector<double> crossing_targets(const Stepper& cur, bool rising,
                                     const ModelParams& p)
{
    std::vector<double> targets = {-p.x_hi, -p.x_lo, 0.0, p.x_lo, p.x_hi};
    for (double f : cur.config().fronts())
        targets.push_back(rising ? f : -f);
    return targets;
}

template <class Stepper>
struct Attempt {
    Stepper next;
    bool event = false;
    std::vector<io::Event> log;
};

/// Takes one trial step of size dt, localizing the first event inside it
/// (threshold/front crossing or a dw/dt sign change) by bisection on the
/// sub-step length.
template <class Stepper>
Attempt<Stepper> attempt_step(const Stepper& cur, double dt, const ModelParams& p)
{
    Attempt<Stepper> out{cur.advanced(dt)};
    const double w0 = cur.w();
    const double w1 = out.next.w();

    if (w1 != w0) {
        const bool rising = w1 > w0;
        double theta = std::numeric_limits<double>::quiet_NaN();
        for (double cand : crossing_targets(cur, rising, p)) {
            const bool inside = rising ? (cand > w0 && cand <= w1)
                                       : (cand < w0 && cand >= w1);
            if (inside && (std::isnan(theta) ||
                           (rising ? cand < theta : cand > theta)))
                theta = cand;
        }
        if (!std::isnan(theta)) {
            double lo = 0.0, hi = dt;
            Stepper at_hi = out.next;
            while (hi - lo > kEventTimeTol) {
                const double mid = 0.5 * (lo + hi);
                Stepper sm = cur.advanced(mid);
                const bool crossed = rising ? sm.w() >= theta : sm.w() <= theta;
                if (crossed) {
                    hi = mid;
                    at_hi = std::move(sm);
                } else {
                    lo = mid;
                }
            }
            out.next = std::move(at_hi);
            out.event = true;
            if ((rising && theta == p.x_lo) || (!rising && theta == -p.x_lo))
                out.log.push_back({io::EventKind::SwitchStart, out.next.t(), p.x_lo});
        }
    }

    // direction change: the sign of dw/dt flipped across the (possibly
    // truncated) step
    const double r0 = cur.w_rate(), r1 = out.next.w_rate();
    if (r0 != 0.0 && r1 != 0.0 && (r0 > 0.0) != (r1 > 0.0)) {
        double lo = 0.0, hi = out.next.t() - cur.t();
        Stepper at_hi = out.next;
        while (hi - lo > kEventTimeTol) {
            const double mid = 0.5 * (lo + hi);
            Stepper sm = cur.advanced(mid);
            const bool flipped = (sm.w_rate() > 0.0) != (r0 > 0.0) || sm.w_rate() == 0.0;
            if (flipped) {
                hi = mid;
                at_hi = std::move(sm);
            } else {
                lo = mid;
            }
        }
        out.next = std::move(at_hi);
        out.event = true;
        out.log.clear(); // any crossing the truncated step no longer reaches
        const double wx = std::abs(out.next.w());
        out.log.push_back({io::EventKind::DirectionChange, out.next.t(), wx});
        for (double f : out.next.config().fronts())
            if (std::abs(f - wx) <= 1e-9) {
                out.log.push_back({io::EventKind::FrontSteady, out.next.t(), f});
                break;
            }
    }

    // swallowed fronts; the front sitting at the segment start is the moving
    // one being pushed, not a disappearance
    const double mover = std::abs(w0);
    for (double f : out.next.removed)
        if (std::abs(f - mover) > 1e-12)
            out.log.push_back({io::EventKind::FrontDisappear, out.next.t(), f});
    return out;
}

template <class Stepper>
io::Trace run_integration(Stepper cur, const ModelParams& p)
{
    io::Trace trace;
    const auto record = [&](const Stepper& s) {
        const double ut = relay::total_mass(s.density);
        const double pm = relay::preisach_moment(s.density, s.config());
        trace.rows.push_back({s.t(), s.v(), s.w(), ut, pm, s.config().serialize()});
    };
    const auto snapshot = [&](const Stepper& s) {
        io::Snapshot snap;
        snap.t = s.t();
        for (int i = 0; i <= p.M; ++i) {
            snap.x.push_back(s.density.node(i));
            snap.u.push_back(s.density.values()[i]);
        }
        trace.snapshots.push_back(std::move(snap));
    };

    record(cur);
    auto pending_snapshots = p.snapshot_times;
    std::sort(pending_snapshots.begin(), pending_snapshots.end());
    std::size_t next_snap = 0;
    while (next_snap < pending_snapshots.size() && pending_snapshots[next_snap] <= 0.0) {
        snapshot(cur);
        ++next_snap;
    }

    double next_sample = p.sample_dt;
    double dt_try = p.dt_max;
    int dir = cur.w_rate() > 0.0 ? 1 : (cur.w_rate() < 0.0 ? -1 : 0);

    while (cur.t() < p.T) {
        const double dt = std::min(dt_try, p.T - cur.t());
        auto att = attempt_step(cur, dt, p);
        cur = std::move(att.next);

        for (const auto& ev : att.log)
            trace.events.push_back(ev);

        if (std::abs(cur.w()) > p.x_hi + 1e-8)
            throw std::runtime_error("integrate: |w| exceeded x_hi beyond tolerance");
        if (cur.v() < -1e-15)
            throw std::runtime_error("integrate: nutrient total went negative");

        const int new_dir = cur.w_rate() > 0.0 ? 1 : (cur.w_rate() < 0.0 ? -1 : 0);
        if (new_dir != 0)
            dir = new_dir;
        (void)dir;

        if (att.event || cur.t() >= next_sample) {
            record(cur);
            while (next_sample <= cur.t())
                next_sample += p.sample_dt;
        }
        while (next_snap < pending_snapshots.size() &&
               cur.t() >= pending_snapshots[next_snap]) {
            snapshot(cur);
            ++next_snap;
        }

        dt_try = att.event ? std::max(0.5 * dt_try, 16.0 * kEventTimeTol)
                           : std::min(1.2 * dt_try, p.dt_max);
    }
    if (trace.rows.back().t < cur.t())
        record(cur);
    return trace;
}

} // namespace

SystemState step(const SystemState& state, double dt, const ModelParams& raw)
{
    const ModelParams p = raw.resolved();
    if (!(dt > 0.0))
        throw std::invalid_argument("step: need dt > 0");
    if (dt > p.dt_max * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt exceeds dt_max");
    auto att = attempt_step(TransformedStepper{state, &p, {}}, dt, p);
    return att.next.s;
}

io::Trace integrate(const ModelParams& raw)
{
    const ModelParams p = raw.resolved();
    p.validate();
    TransformedStepper s0{initial_state(p), &p, {}};
    return run_integration(std::move(s0), p);
}

io::Trace simulate_original(const ModelParams& raw)
{
    const ModelParams p = raw.resolved();
    p.validate();
    const SystemState st = initial_state(p);
    OriginalStepper s0{0.0,
                       st.density,
                       (0.5 + p.w0) * p.v0,
                       (0.5 - p.w0) * p.v0,
                       st.config,
                       &p,
                       p.w0,
                       p.v0 < kUnderflow,
                       {}};
    return run_integration(std::move(s0), p);
}

TailDiagnostic gaussian_tail_diagnostic(const SystemState& state,
                                        const ModelParams& raw)
{
    const ModelParams p = raw.resolved();
    const double window_start = 0.5 * asym::s_half(p.x_lo, p.x_hi);
    TailDiagnostic diag{0.0, state.t >= window_start};
    if (!(state.t > 0.0))
        throw std::invalid_argument("gaussian_tail_diagnostic: need t > 0");
    const double denom = 2.0 * std::sqrt(p.D * state.t);
    for (int i = 0; i <= state.density.cells(); ++i) {
        const double x = state.density.node(i);
        const double expected = num::erf_e((p.x_hi - x) / denom);
        diag.sup_error = std::max(diag.sup_error,
                                  std::abs(relay::tail_mass(state.density, x) - expected));
    }
    return diag;
}

} // namespace frontlab::pde
