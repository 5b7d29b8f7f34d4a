#pragma once

#include <cstddef>
#include <vector>

namespace ksup {

// Continuous piecewise-linear function on the real line given by strictly
// increasing breakpoints; constant extension beyond the first/last node.
// The extension makes the sup norm attained at breakpoints.
class PiecewiseLinear {
  public:
    PiecewiseLinear() = default;
    PiecewiseLinear(std::vector<double> xs, std::vector<double> vs);

    bool empty() const { return xs_.empty(); }
    std::size_t size() const { return xs_.size(); }
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return vs_; }

    double eval(double x) const;

    // Exact sup of |f|; 0 for the empty function.
    double sup_norm() const;
    // max/min of f over [a, b], exact (breakpoints + endpoint values).
    void range_on(double a, double b, double& lo, double& hi) const;

    // Insert a node at x with the given value. If a node at x exists its value
    // is replaced. Inserting with the interpolated value leaves f unchanged.
    void set_node(double x, double v);

    double node_value_at(double x, bool& found) const;

    void clamp(double bound);  // clamp all values to [-bound, bound]

    // Pointwise sum; breakpoints are merged exactly (shared positions add).
    static PiecewiseLinear sum(const PiecewiseLinear& a, const PiecewiseLinear& b);

  private:
    std::vector<double> xs_;
    std::vector<double> vs_;
};

// Strictly increasing PL map of [0,1] onto [0,1] with endpoints pinned:
// psi(0) = 0, psi(1) = 1.
class MonotonePL {
  public:
    MonotonePL();  // identity
    MonotonePL(std::vector<double> xs, std::vector<double> vs);

    double eval(double x) const;
    double max_slope() const;
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return vs_; }

  private:
    std::vector<double> xs_;
    std::vector<double> vs_;
};

}  // namespace ksup
