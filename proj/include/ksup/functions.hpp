#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ksup/dyadic.hpp"
#include "ksup/pl.hpp"

namespace ksup {

// Continuous real function on the domain X, stored as samples on a dyadic
// lattice and interpreted as the PL (n=1) / bilinear (n=2) interpolant. All
// norms and residuals are measured on the sample lattice, where the
// interpolant is exact.
class GridFunction {
  public:
    struct Block {
        Dyadic lo, hi;
    };

    // [0,1]^1 sampled at step h.
    static GridFunction line(const Dyadic& h, const std::function<double(double)>& f,
                             std::optional<double> lipschitz = std::nullopt);
    // union of disjoint 1-D blocks, each sampled at step h.
    static GridFunction blocks1d(std::vector<Block> blocks, const Dyadic& h,
                                 const std::function<double(double)>& f,
                                 std::optional<double> lipschitz = std::nullopt);
    // [0,1]^2 sampled at step h per axis.
    static GridFunction square(const Dyadic& h, const std::function<double(double, double)>& f,
                               std::optional<double> lipschitz = std::nullopt);

    int dim() const { return n_; }
    const Dyadic& step() const { return h_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }
    std::optional<double> lipschitz() const { return lip_; }
    void set_lipschitz(std::optional<double> l) { lip_ = l; }

    std::size_t num_samples() const { return samples_.size(); }
    // position of sample i (n coordinates)
    std::vector<double> position(std::size_t i) const;
    void positions(std::vector<std::vector<double>>& out) const;

    double eval(std::span<const double> x) const;
    double eval1(double x) const;
    double eval2(double x, double y) const;

    // sup of |f| over the domain (attained at samples).
    double sup_norm() const;

    // Exact min/max of the interpolant over box [lo, hi] intersected with the
    // domain. Returns false if the box misses the domain entirely.
    bool range_on_box(std::span<const Dyadic> lo, std::span<const Dyadic> hi, double& mn,
                      double& mx) const;

    GridFunction with_samples(std::vector<double> samples) const;

  private:
    int n_ = 1;
    Dyadic h_;
    std::vector<Block> blocks_;       // n == 1
    std::vector<std::size_t> offset_; // per-block sample offset (n == 1)
    std::vector<std::size_t> count_;  // per-block sample count  (n == 1)
    std::size_t nside_ = 0;           // n == 2: samples per axis
    std::vector<double> samples_;
    std::optional<double> lip_;
};

// Real function on Z = disjoint union of factor components, one PL function
// per component.
struct ZFunction {
    std::vector<PiecewiseLinear> components;

    double eval(int comp, double y) const { return components.at(static_cast<std::size_t>(comp)).eval(y); }
    double sup_norm() const;
    static ZFunction zeros(int k) { return ZFunction{std::vector<PiecewiseLinear>(static_cast<std::size_t>(k))}; }
    static ZFunction sum(const ZFunction& a, const ZFunction& b);
};

// Coordinate maps of an embedding X c Y_1 x ... x Y_k: y_i = p_i(x).
class Projector {
  public:
    virtual ~Projector() = default;
    virtual int num_components() const = 0;
    virtual double project(int comp, std::span<const double> x) const = 0;
};

// L(g)(x) = g(y_1) + ... + g(y_k).
double apply_L(const Projector& p, const ZFunction& g, std::span<const double> x);

// max over f's sample lattice of |f - L(g)|.
double residual_norm(const GridFunction& f, const Projector& p, const ZFunction& g);
std::vector<double> residual_samples(const GridFunction& f, const Projector& p,
                                     const ZFunction& g);

// PL interpolation through (position, value) nodes per component, constant
// beyond the extreme nodes, clamped to [-bound, bound]. Throws BoundViolation
// if a node exceeds the bound.
ZFunction extend_partial(const std::vector<std::vector<std::pair<double, double>>>& nodes,
                         double bound);

struct TraceRow {
    int t = 0;
    double g_norm = 0, g_envelope = 0;
    double residual = 0, residual_envelope = 0;
    int scale_index = -1;
    bool relaxed = false;  // cover chosen by exhaustion fallback
};

struct DecompositionTrace {
    int n = 1;
    int k = 3;        // number of summands (2n+1 or n+1)
    double c = 0;
    double ratio = 0; // 2n/(2n+1) or n/(n+1)
    std::vector<TraceRow> rows;

    // both measured values strictly below their envelopes at every t
    void verify() const;
    std::string to_csv() const;  // columns: t,g_norm,g_envelope,residual,residual_envelope
};

// Tiny expression evaluator for CLI inputs: variables x, y; operators
// + - * / ^ and parentheses; functions sin, cos, exp; numeric literals.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace ksup
