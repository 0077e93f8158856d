#pragma once

#include "frontlab/relay.hpp"
#include "frontlab/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace frontlab::pde {

enum class DensityProfile { Gaussian, Uniform };

DensityProfile density_profile_from_string(const std::string& name);
std::string to_string(DensityProfile profile);

/// Parameters of one run. Fields defaulted to NaN are derived from D by
/// resolve_defaults(): v0 = sqrt(D), w0 = x_hi - D^{1/4}, sigma = sqrt(D),
/// dt_max = 0.2 (x_hi-x_lo)^2 / (M^2 D) capped at 1e-2.
struct ModelParams {
    double x_lo = 0.01;
    double x_hi = 0.25;
    double D = 1e-4;
    double v0 = nan_default();
    double w0 = nan_default();
    DensityProfile u0_profile = DensityProfile::Gaussian;
    double u0_sigma = nan_default();
    std::string r0 = "+1;"; // serialized initial configuration
    double T = 10.0;
    int M = 400;
    double dt_max = nan_default();
    double sample_dt = nan_default(); // default T/2000
    std::vector<double> snapshot_times;

    static double nan_default();

    ModelParams resolved() const; // fills derived defaults
    void validate() const;        // throws on contract violations
};

struct SystemState {
    double t;
    relay::ThresholdDensity density;
    double v;
    double w;
    relay::SimpleConfiguration config;
    double w_rate;   // dw/dt at this state with the configuration frozen
    int direction;   // sign of the current monotone w segment, 0 before motion
};

/// Initial state from validated params (density normalized to unit mass).
SystemState initial_state(const ModelParams& params);

/// One IMEX step of the transformed system: Crank-Nicolson diffusion with
/// zero-flux boundaries, explicit reaction and scalar equations, relay
/// configuration updated along the monotone w segment. The step must already
/// be event-free; integrate() handles event localization.
SystemState step(const SystemState& state, double dt, const ModelParams& params);

/// Full integration of the transformed system on [0, T] with adaptive
/// stepping and event localization (threshold/front crossings and dw/dt sign
/// changes bisected to 1e-10 in t).
io::Trace integrate(const ModelParams& params);

/// Integration of the original two-nutrient system with identical
/// discretization choices; the trace reports v = f1 + f-1 and
/// w = f1/(f1+f-1) - 1/2.
io::Trace simulate_original(const ModelParams& params);

struct TailDiagnostic {
    double sup_error; // sup_x |U(x,t) - E((x_hi-x)/(2 sqrt(D t)))|
    bool in_window;   // t >= s_half/2, where the approximation is meaningful
};

TailDiagnostic gaussian_tail_diagnostic(const SystemState& state,
                                        const ModelParams& params);

} // namespace frontlab::pde
