#include "ksup/pl.hpp"

#include <algorithm>
#include <cmath>

#include "ksup/errors.hpp"

namespace ksup {

namespace {

double lerp_at(const std::vector<double>& xs, const std::vector<double>& vs, double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return vs.front();
    if (x >= xs.back()) return vs.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    double x0 = xs[j - 1], x1 = xs[j];
    double t = (x - x0) / (x1 - x0);
    return vs[j - 1] + t * (vs[j] - vs[j - 1]);
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> vs)
    : xs_(std::move(xs)), vs_(std::move(vs)) {
    if (xs_.size() != vs_.size()) throw InvariantError("PL: size mismatch");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i - 1] < xs_[i])) throw InvariantError("PL: breakpoints not strictly increasing");
    for (double v : vs_)
        if (!std::isfinite(v)) throw InvariantError("PL: non-finite value");
}

double PiecewiseLinear::eval(double x) const { return lerp_at(xs_, vs_, x); }

double PiecewiseLinear::sup_norm() const {
    double m = 0.0;
    for (double v : vs_) m = std::max(m, std::abs(v));
    return m;
}

void PiecewiseLinear::range_on(double a, double b, double& lo, double& hi) const {
    lo = std::min(eval(a), eval(b));
    hi = std::max(eval(a), eval(b));
    auto lo_it = std::lower_bound(xs_.begin(), xs_.end(), a);
    auto hi_it = std::upper_bound(xs_.begin(), xs_.end(), b);
    for (auto it = lo_it; it != hi_it; ++it) {
        double v = vs_[static_cast<std::size_t>(it - xs_.begin())];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
}

void PiecewiseLinear::set_node(double x, double v) {
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    if (it != xs_.end() && *it == x) {
        vs_[j] = v;
        return;
    }
    xs_.insert(it, x);
    vs_.insert(vs_.begin() + static_cast<std::ptrdiff_t>(j), v);
}

double PiecewiseLinear::node_value_at(double x, bool& found) const {
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (it != xs_.end() && *it == x) {
        found = true;
        return vs_[static_cast<std::size_t>(it - xs_.begin())];
    }
    found = false;
    return 0.0;
}

void PiecewiseLinear::clamp(double bound) {
    for (double& v : vs_) v = std::max(-bound, std::min(bound, v));
}

PiecewiseLinear PiecewiseLinear::sum(const PiecewiseLinear& a, const PiecewiseLinear& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    std::vector<double> xs;
    xs.reserve(a.size() + b.size());
    std::merge(a.xs_.begin(), a.xs_.end(), b.xs_.begin(), b.xs_.end(), std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> vs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = a.eval(xs[i]) + b.eval(xs[i]);
    return PiecewiseLinear(std::move(xs), std::move(vs));
}

MonotonePL::MonotonePL() : xs_{0.0, 1.0}, vs_{0.0, 1.0} {}

MonotonePL::MonotonePL(std::vector<double> xs, std::vector<double> vs)
    : xs_(std::move(xs)), vs_(std::move(vs)) {
    if (xs_.size() != vs_.size() || xs_.size() < 2)
        throw InvariantError("MonotonePL: need matching lists with >= 2 nodes");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i - 1] < xs_[i])) throw InvariantError("MonotonePL: breakpoints not increasing");
        if (!(vs_[i - 1] < vs_[i])) throw InvariantError("MonotonePL: values not increasing");
    }
    if (xs_.front() != 0.0 || xs_.back() != 1.0 || vs_.front() != 0.0 || vs_.back() != 1.0)
        throw InvariantError("MonotonePL: endpoints must map 0->0, 1->1");
}

double MonotonePL::eval(double x) const { return lerp_at(xs_, vs_, x); }

double MonotonePL::max_slope() const {
    double m = 0.0;
    for (std::size_t i = 1; i < xs_.size(); ++i)
        m = std::max(m, (vs_[i] - vs_[i - 1]) / (xs_[i] - xs_[i - 1]));
    return m;
}

}  // namespace ksup
