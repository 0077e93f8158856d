#include "frontlab/relay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace frontlab::relay {

ScalarRelay relay_update(ScalarRelay relay, double w)
{
    if (!std::isfinite(w))
        throw std::invalid_argument("relay_update: non-finite input");
    if (w >= relay.x)
        relay.state = 1;
    else if (w <= -relay.x)
        relay.state = -1;
    return relay;
}

SimpleConfiguration::SimpleConfiguration(double x_lo, double x_hi,
                                         int rightmost_sign,
                                         std::vector<double> fronts)
    : x_lo_(x_lo), x_hi_(x_hi), rightmost_sign_(rightmost_sign),
      fronts_(std::move(fronts))
{
    validate();
}

void SimpleConfiguration::validate() const
{
    if (!(x_lo_ > 0.0 && x_lo_ < x_hi_ && x_hi_ < 0.5))
        throw std::invalid_argument("SimpleConfiguration: need 0 < x_lo < x_hi < 1/2");
    if (rightmost_sign_ != 1 && rightmost_sign_ != -1)
        throw std::invalid_argument("SimpleConfiguration: rightmost sign must be +-1");
    double prev = x_lo_;
    for (double f : fronts_) {
        if (!(f > prev && f < x_hi_))
            throw std::invalid_argument(
                "SimpleConfiguration: fronts must be strictly increasing inside the domain");
        prev = f;
    }
}

int SimpleConfiguration::sign_at(double x) const
{
    if (x < x_lo_ || x > x_hi_)
        throw std::invalid_argument("sign_at: threshold outside the domain");
    // count fronts at or above x: intervals are right-closed, so x exactly
    // on a front takes the sign of the interval below
    const auto it = std::lower_bound(fronts_.begin(), fronts_.end(), x);
    const auto above = fronts_.end() - it;
    return (above % 2 == 0) ? rightmost_sign_ : -rightmost_sign_;
}

std::string SimpleConfiguration::serialize() const
{
    std::string out = rightmost_sign_ > 0 ? "+1;" : "-1;";
    char buf[40];
    for (std::size_t i = 0; i < fronts_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", fronts_[i]);
        if (i)
            out += ',';
        out += buf;
    }
    return out;
}

SimpleConfiguration SimpleConfiguration::deserialize(const std::string& text,
                                                     double x_lo, double x_hi)
{
    const auto semi = text.find(';');
    if (semi == std::string::npos)
        throw std::invalid_argument("SimpleConfiguration: missing ';' in \"" + text + "\"");
    const std::string sign_part = text.substr(0, semi);
    int sign;
    if (sign_part == "+1" || sign_part == "1")
        sign = 1;
    else if (sign_part == "-1")
        sign = -1;
    else
        throw std::invalid_argument("SimpleConfiguration: bad sign \"" + sign_part + "\"");
    std::vector<double> fronts;
    std::stringstream ss(text.substr(semi + 1));
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            fronts.push_back(std::stod(tok));
    return SimpleConfiguration(x_lo, x_hi, sign, std::move(fronts));
}

ConfigEvolution config_evolve(const SimpleConfiguration& config,
                              double w_old, double w_new)
{
    if (!std::isfinite(w_old) || !std::isfinite(w_new))
        throw std::invalid_argument("config_evolve: non-finite input");

    ConfigEvolution out{config, {}};
    if (w_new == w_old)
        return out;

    // on a rising segment thresholds x <= w_new switch to +1; on a falling
    // one thresholds x <= -w_new switch to -1
    const bool rising = w_new > w_old;
    const double level = rising ? w_new : -w_new;
    const int sign = rising ? 1 : -1;

    const double x_lo = config.x_lo(), x_hi = config.x_hi();
    const double merge_tol = 1e-14 * (x_hi - x_lo);
    if (level < x_lo)
        return out;

    if (level >= x_hi - merge_tol) {
        out.removed_fronts = config.fronts();
        out.config = SimpleConfiguration(x_lo, x_hi, sign, {});
        return out;
    }

    std::vector<double> kept;
    for (double f : config.fronts()) {
        if (f <= level + merge_tol)
            out.removed_fronts.push_back(f);
        else
            kept.push_back(f);
    }

    // sign just above the switch level in what remains of the old profile
    const int above = kept.empty()
                          ? config.rightmost_sign()
                          : (kept.size() % 2 == 0 ? config.rightmost_sign()
                                                  : -config.rightmost_sign());
    if (above != sign)
        kept.insert(kept.begin(), level);
    out.config = SimpleConfiguration(x_lo, x_hi,
                                     kept.empty() ? sign : config.rightmost_sign(),
                                     std::move(kept));
    return out;
}

ThresholdDensity::ThresholdDensity(double x_lo, double x_hi,
                                   std::vector<double> values)
    : x_lo_(x_lo), x_hi_(x_hi), values_(std::move(values))
{
    if (!(x_lo > 0.0 && x_lo < x_hi && x_hi < 0.5))
        throw std::invalid_argument("ThresholdDensity: need 0 < x_lo < x_hi < 1/2");
    if (values_.size() < 2)
        throw std::invalid_argument("ThresholdDensity: need at least two nodes");
    for (double v : values_)
        if (!(v >= -1e-12))
            throw std::invalid_argument("ThresholdDensity: negative sample");
    h_ = (x_hi_ - x_lo_) / (values_.size() - 1);
}

ThresholdDensity ThresholdDensity::uniform(double x_lo, double x_hi, int cells,
                                           double total)
{
    std::vector<double> v(cells + 1, total / (x_hi - x_lo));
    return ThresholdDensity(x_lo, x_hi, std::move(v));
}

double ThresholdDensity::value_at(double x) const
{
    if (x < x_lo_ - 1e-15 || x > x_hi_ + 1e-15)
        throw std::invalid_argument("ThresholdDensity: position outside the domain");
    const double s = std::clamp((x - x_lo_) / h_, 0.0, double(cells()));
    const int i = std::min(static_cast<int>(s), cells() - 1);
    const double frac = s - i;
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double total_mass(const ThresholdDensity& density)
{
    const auto& u = density.values();
    double sum = 0.5 * (u.front() + u.back());
    for (std::size_t i = 1; i + 1 < u.size(); ++i)
        sum += u[i];
    return sum * density.h();
}

double tail_mass(const ThresholdDensity& density, double x)
{
    if (x < density.x_lo() - 1e-15 || x > density.x_hi() + 1e-15)
        throw std::invalid_argument("tail_mass: position outside the domain");
    x = std::clamp(x, density.x_lo(), density.x_hi());
    const auto& u = density.values();
    const int n = density.cells();
    const double s = (x - density.x_lo()) / density.h();
    const int i = std::min(static_cast<int>(s), n - 1);

    // partial cell [x, node(i+1)], trapezoid on the linear interpolant
    const double xr = density.node(i + 1);
    double sum = 0.5 * (density.value_at(x) + u[i + 1]) * (xr - x);
    for (int k = i + 1; k < n; ++k)
        sum += 0.5 * (u[k] + u[k + 1]) * density.h();
    return sum;
}

double preisach_moment(const ThresholdDensity& density,
                       const SimpleConfiguration& config)
{
    if (std::abs(density.x_lo() - config.x_lo()) > 1e-12 ||
        std::abs(density.x_hi() - config.x_hi()) > 1e-12)
        throw std::invalid_argument("preisach_moment: domain mismatch");

    const auto& fronts = config.fronts();
    const auto& u = density.values();
    double sum = 0.0;
    std::size_t fi = 0;
    for (int k = 0; k < density.cells(); ++k) {
        double xl = density.node(k);
        const double xr = density.node(k + 1);
        double ul = u[k];
        while (fi < fronts.size() && fronts[fi] <= xr) {
            const double xf = fronts[fi];
            const double uf = density.value_at(xf);
            // sign on (prev front, xf] is the sign at xf itself
            sum += config.sign_at(xf) * 0.5 * (ul + uf) * (xf - xl);
            xl = xf;
            ul = uf;
            ++fi;
        }
        if (xr > xl)
            sum += config.sign_at(xr) * 0.5 * (ul + u[k + 1]) * (xr - xl);
    }
    return sum;
}

} // namespace frontlab::relay
