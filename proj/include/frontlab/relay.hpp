#pragma once

#include <string>
#include <vector>

namespace frontlab::relay {

/// Two-state relay with symmetric thresholds +-x. The state flips to +1 as
/// soon as the input reaches x and to -1 as soon as it reaches -x (threshold
/// equality counts as a switch); inputs strictly inside (-x, x) leave it
/// unchanged.
struct ScalarRelay {
    double x = 0.1;
    int state = 1;
};

ScalarRelay relay_update(ScalarRelay relay, double w);

/// Relay state over a threshold interval [x_lo, x_hi], stored as the list of
/// interior fronts (sign-change positions) plus the sign on the rightmost
/// interval. Signs alternate across fronts; fronts are strictly increasing
/// and strictly inside (x_lo, x_hi).
class SimpleConfiguration {
public:
    SimpleConfiguration(double x_lo, double x_hi, int rightmost_sign = 1,
                        std::vector<double> fronts = {});

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    int rightmost_sign() const { return rightmost_sign_; }
    const std::vector<double>& fronts() const { return fronts_; }

    /// Sign of the relay at threshold x. Intervals are right-closed: the
    /// sign at a front belongs to the interval below it.
    int sign_at(double x) const;

    bool operator==(const SimpleConfiguration& other) const = default;

    /// `signR;x1,x2,...` with 17 significant digits per front.
    std::string serialize() const;
    static SimpleConfiguration deserialize(const std::string& text,
                                           double x_lo, double x_hi);

private:
    double x_lo_, x_hi_;
    int rightmost_sign_;
    std::vector<double> fronts_;

    void validate() const;
};

/// Result of one monotone input move: the new configuration plus the fronts
/// the move swallowed (absorbed by the moving switch boundary).
struct ConfigEvolution {
    SimpleConfiguration config;
    std::vector<double> removed_fronts;
};

/// Applies a monotone input segment w_old -> w_new to every relay in the
/// configuration: on an increasing segment all thresholds x <= w_new end up
/// at +1, on a decreasing one all x <= -w_new end up at -1. The caller is
/// responsible for splitting input paths at direction changes.
ConfigEvolution config_evolve(const SimpleConfiguration& config,
                              double w_old, double w_new);

/// Density of relays over the threshold interval, sampled on a uniform grid
/// of cells+1 nodes. Integrals use the trapezoid rule, exact for
/// piecewise-linear samples.
class ThresholdDensity {
public:
    ThresholdDensity(double x_lo, double x_hi, std::vector<double> values);
    static ThresholdDensity uniform(double x_lo, double x_hi, int cells,
                                    double total = 1.0);

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    double h() const { return h_; }
    int cells() const { return static_cast<int>(values_.size()) - 1; }
    double node(int i) const { return x_lo_ + h_ * i; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Linear interpolation of the sampled density at x.
    double value_at(double x) const;

private:
    double x_lo_, x_hi_, h_;
    std::vector<double> values_;
};

/// Total mass Integral u dx over the whole interval.
double total_mass(const ThresholdDensity& density);

/// Tail mass U(x) = Integral_x^{x_hi} u dy; x need not be a grid node.
double tail_mass(const ThresholdDensity& density, double x);

/// Signed moment Integral u(x) r(x) dx for the given configuration, with
/// cells containing a front split at the front position.
double preisach_moment(const ThresholdDensity& density,
                       const SimpleConfiguration& config);

} // namespace frontlab::relay
