#include "ksup/functions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ksup/errors.hpp"

namespace ksup {

namespace {

std::size_t steps_between(const Dyadic& lo, const Dyadic& hi, const Dyadic& h) {
    Dyadic w = hi - lo;
    // w / h must be a nonnegative integer
    double q = w.to_double() / h.to_double();
    auto k = static_cast<std::size_t>(std::llround(q));
    if (std::abs(q - static_cast<double>(k)) > 1e-12)
        throw ConfigError("block width is not a multiple of the sample step");
    return k;
}

}  // namespace

GridFunction GridFunction::line(const Dyadic& h, const std::function<double(double)>& f,
                                std::optional<double> lipschitz) {
    return blocks1d({Block{Dyadic(0, 0), Dyadic(1, 0)}}, h, f, lipschitz);
}

GridFunction GridFunction::blocks1d(std::vector<Block> blocks, const Dyadic& h,
                                    const std::function<double(double)>& f,
                                    std::optional<double> lipschitz) {
    GridFunction g;
    g.n_ = 1;
    g.h_ = h;
    g.blocks_ = std::move(blocks);
    g.lip_ = lipschitz;
    for (std::size_t b = 0; b < g.blocks_.size(); ++b) {
        if (b > 0 && !(g.blocks_[b - 1].hi < g.blocks_[b].lo))
            throw ConfigError("blocks must be disjoint and sorted");
        std::size_t k = steps_between(g.blocks_[b].lo, g.blocks_[b].hi, h);
        g.offset_.push_back(g.samples_.size());
        g.count_.push_back(k + 1);
        double lo = g.blocks_[b].lo.to_double();
        double hd = h.to_double();
        for (std::size_t j = 0; j <= k; ++j) g.samples_.push_back(f(lo + static_cast<double>(j) * hd));
    }
    return g;
}

GridFunction GridFunction::square(const Dyadic& h, const std::function<double(double, double)>& f,
                                  std::optional<double> lipschitz) {
    GridFunction g;
    g.n_ = 2;
    g.h_ = h;
    g.lip_ = lipschitz;
    std::size_t k = steps_between(Dyadic(0, 0), Dyadic(1, 0), h);
    g.nside_ = k + 1;
    double hd = h.to_double();
    g.samples_.resize(g.nside_ * g.nside_);
    for (std::size_t i = 0; i < g.nside_; ++i)
        for (std::size_t j = 0; j < g.nside_; ++j)
            g.samples_[i * g.nside_ + j] = f(static_cast<double>(i) * hd, static_cast<double>(j) * hd);
    return g;
}

std::vector<double> GridFunction::position(std::size_t i) const {
    double hd = h_.to_double();
    if (n_ == 1) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (i < offset_[b] + count_[b])
                return {blocks_[b].lo.to_double() + static_cast<double>(i - offset_[b]) * hd};
        }
        throw InvariantError("sample index out of range");
    }
    return {static_cast<double>(i / nside_) * hd, static_cast<double>(i % nside_) * hd};
}

void GridFunction::positions(std::vector<std::vector<double>>& out) const {
    out.clear();
    out.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) out.push_back(position(i));
}

double GridFunction::eval1(double x) const {
    if (n_ != 1) throw PreconditionError("eval1 on 2-D function");
    double hd = h_.to_double();
    // locate block (clamp to nearest)
    std::size_t b = 0;
    for (; b < blocks_.size(); ++b) {
        if (x <= blocks_[b].hi.to_double() + 1e-15) break;
    }
    if (b == blocks_.size()) b = blocks_.size() - 1;
    double lo = blocks_[b].lo.to_double();
    double t = (x - lo) / hd;
    if (t <= 0) return samples_[offset_[b]];
    std::size_t last = count_[b] - 1;
    if (t >= static_cast<double>(last)) return samples_[offset_[b] + last];
    auto j = static_cast<std::size_t>(t);
    double fr = t - static_cast<double>(j);
    return samples_[offset_[b] + j] * (1 - fr) + samples_[offset_[b] + j + 1] * fr;
}

double GridFunction::eval2(double x, double y) const {
    if (n_ != 2) throw PreconditionError("eval2 on 1-D function");
    double hd = h_.to_double();
    auto clamp01 = [](double v) { return std::max(0.0, std::min(1.0, v)); };
    double tx = clamp01(x) / hd, ty = clamp01(y) / hd;
    std::size_t last = nside_ - 1;
    auto ix = static_cast<std::size_t>(std::min(tx, static_cast<double>(last - 1)));
    auto iy = static_cast<std::size_t>(std::min(ty, static_cast<double>(last - 1)));
    double fx = tx - static_cast<double>(ix), fy = ty - static_cast<double>(iy);
    const double* s = samples_.data();
    double v00 = s[ix * nside_ + iy], v01 = s[ix * nside_ + iy + 1];
    double v10 = s[(ix + 1) * nside_ + iy], v11 = s[(ix + 1) * nside_ + iy + 1];
    return v00 * (1 - fx) * (1 - fy) + v01 * (1 - fx) * fy + v10 * fx * (1 - fy) + v11 * fx * fy;
}

double GridFunction::eval(std::span<const double> x) const {
    return n_ == 1 ? eval1(x[0]) : eval2(x[0], x[1]);
}

double GridFunction::sup_norm() const {
    double m = 0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::range_on_box(std::span<const Dyadic> lo, std::span<const Dyadic> hi, double& mn,
                                double& mx) const {
    bool any = false;
    mn = 1e300;
    mx = -1e300;
    double hd = h_.to_double();
    if (n_ == 1) {
        double a = lo[0].to_double(), b = hi[0].to_double();
        for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
            double blo = blocks_[blk].lo.to_double(), bhi = blocks_[blk].hi.to_double();
            double ca = std::max(a, blo), cb = std::min(b, bhi);
            if (ca > cb + 1e-15) continue;
            any = true;
            // endpoint values of the clipped segment
            for (double e : {ca, cb}) {
                double v = eval1(e);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            // samples strictly inside
            auto j0 = static_cast<std::size_t>(std::ceil((ca - blo) / hd - 1e-12));
            double jb = std::floor((cb - blo) / hd + 1e-12);
            if (jb >= static_cast<double>(j0)) {
                auto j1 = static_cast<std::size_t>(jb);
                j1 = std::min(j1, count_[blk] - 1);
                for (std::size_t j = j0; j <= j1; ++j) {
                    double v = samples_[offset_[blk] + j];
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
            }
        }
        return any;
    }
    // n == 2: bilinear extremes over an axis-aligned box occur at corners of
    // the box clipped to each lattice cell.
    double a0 = std::max(0.0, lo[0].to_double()), b0 = std::min(1.0, hi[0].to_double());
    double a1 = std::max(0.0, lo[1].to_double()), b1 = std::min(1.0, hi[1].to_double());
    if (a0 > b0 + 1e-15 || a1 > b1 + 1e-15) return false;
    std::size_t last = nside_ - 1;
    auto c0 = static_cast<std::size_t>(std::min(std::floor(a0 / hd + 1e-12), static_cast<double>(last - 1)));
    auto c1 = static_cast<std::size_t>(std::min(std::floor(a1 / hd + 1e-12), static_cast<double>(last - 1)));
    auto d0 = static_cast<std::size_t>(std::min(std::ceil(b0 / hd - 1e-12), static_cast<double>(last)));
    auto d1 = static_cast<std::size_t>(std::min(std::ceil(b1 / hd - 1e-12), static_cast<double>(last)));
    for (std::size_t i = c0; i < std::max(d0, c0 + 1); ++i) {
        double xlo = std::max(a0, static_cast<double>(i) * hd);
        double xhi = std::min(b0, static_cast<double>(i + 1) * hd);
        if (xlo > xhi + 1e-15) continue;
        for (std::size_t j = c1; j < std::max(d1, c1 + 1); ++j) {
            double ylo = std::max(a1, static_cast<double>(j) * hd);
            double yhi = std::min(b1, static_cast<double>(j + 1) * hd);
            if (ylo > yhi + 1e-15) continue;
            any = true;
            for (double xx : {xlo, xhi})
                for (double yy : {ylo, yhi}) {
                    double v = eval2(xx, yy);
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
        }
    }
    return any;
}

GridFunction GridFunction::with_samples(std::vector<double> samples) const {
    if (samples.size() != samples_.size()) throw InvariantError("sample count mismatch");
    GridFunction g = *this;
    g.samples_ = std::move(samples);
    return g;
}

double ZFunction::sup_norm() const {
    double m = 0;
    for (const auto& c : components) m = std::max(m, c.sup_norm());
    return m;
}

ZFunction ZFunction::sum(const ZFunction& a, const ZFunction& b) {
    if (a.components.size() != b.components.size())
        throw InvariantError("ZFunction::sum: component count mismatch");
    ZFunction out;
    out.components.reserve(a.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i)
        out.components.push_back(PiecewiseLinear::sum(a.components[i], b.components[i]));
    return out;
}

double apply_L(const Projector& p, const ZFunction& g, std::span<const double> x) {
    double s = 0;
    for (int i = 0; i < p.num_components(); ++i) s += g.eval(i, p.project(i, x));
    return s;
}

std::vector<double> residual_samples(const GridFunction& f, const Projector& p,
                                     const ZFunction& g) {
    std::vector<double> out(f.num_samples());
    for (std::size_t i = 0; i < f.num_samples(); ++i) {
        auto pos = f.position(i);
        out[i] = f.samples()[i] - apply_L(p, g, pos);
    }
    return out;
}

double residual_norm(const GridFunction& f, const Projector& p, const ZFunction& g) {
    double m = 0;
    for (std::size_t i = 0; i < f.num_samples(); ++i) {
        auto pos = f.position(i);
        m = std::max(m, std::abs(f.samples()[i] - apply_L(p, g, pos)));
    }
    return m;
}

ZFunction extend_partial(const std::vector<std::vector<std::pair<double, double>>>& nodes,
                         double bound) {
    ZFunction g;
    for (const auto& comp : nodes) {
        auto sorted = comp;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].first == sorted[i - 1].first)
                throw PreconditionError("extend_partial: duplicate positions on one component");
        std::vector<double> xs, vs;
        for (auto& [x, v] : sorted) {
            if (std::abs(v) > bound) throw BoundViolation("extend_partial: |value| exceeds bound");
            xs.push_back(x);
            vs.push_back(v);
        }
        g.components.emplace_back(std::move(xs), std::move(vs));
    }
    return g;
}

void DecompositionTrace::verify() const {
    for (const auto& r : rows) {
        if (!(r.g_norm < r.g_envelope))
            throw InvariantError("trace: ||g^(t)|| envelope violated at t=" + std::to_string(r.t));
        if (!(r.residual < r.residual_envelope))
            throw InvariantError("trace: residual envelope violated at t=" + std::to_string(r.t));
    }
}

std::string DecompositionTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,g_norm,g_envelope,residual,residual_envelope\n";
    for (const auto& r : rows)
        os << r.t << "," << r.g_norm << "," << r.g_envelope << "," << r.residual << ","
           << r.residual_envelope << "\n";
    return os.str();
}

namespace {

// minimal recursive-descent expression parser
struct Parser {
    const std::string& s;
    std::size_t i = 0;
    explicit Parser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    using Fn = std::function<double(double, double)>;

    Fn parse() {
        Fn e = expr();
        skip();
        if (i != s.size()) throw ConfigError("expression: trailing input at '" + s.substr(i) + "'");
        return e;
    }

    Fn expr() {
        Fn a = term();
        for (;;) {
            if (eat('+')) {
                Fn b = term();
                a = [a, b](double x, double y) { return a(x, y) + b(x, y); };
            } else if (eat('-')) {
                Fn b = term();
                a = [a, b](double x, double y) { return a(x, y) - b(x, y); };
            } else {
                return a;
            }
        }
    }

    Fn term() {
        Fn a = power();
        for (;;) {
            if (eat('*')) {
                Fn b = power();
                a = [a, b](double x, double y) { return a(x, y) * b(x, y); };
            } else if (eat('/')) {
                Fn b = power();
                a = [a, b](double x, double y) { return a(x, y) / b(x, y); };
            } else {
                return a;
            }
        }
    }

    Fn power() {
        Fn a = atom();
        if (eat('^')) {
            Fn b = power();
            return [a, b](double x, double y) { return std::pow(a(x, y), b(x, y)); };
        }
        return a;
    }

    Fn atom() {
        skip();
        if (eat('(')) {
            Fn a = expr();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return a;
        }
        if (eat('-')) {
            Fn a = atom();
            return [a](double x, double y) { return -a(x, y); };
        }
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' || s[j] == 'e' ||
                    s[j] == 'E' || ((s[j] == '+' || s[j] == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
                ++j;
            double v = std::stod(s.substr(i, j - i));
            i = j;
            return [v](double, double) { return v; };
        }
        std::size_t j = i;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
        std::string name = s.substr(i, j - i);
        i = j;
        if (name == "x") return [](double x, double) { return x; };
        if (name == "y") return [](double, double y) { return y; };
        if (name == "pi") return [](double, double) { return 3.14159265358979323846; };
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!eat('(')) throw ConfigError("expression: expected '(' after " + name);
            Fn a = expr();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            if (name == "sin") return [a](double x, double y) { return std::sin(a(x, y)); };
            if (name == "cos") return [a](double x, double y) { return std::cos(a(x, y)); };
            return [a](double x, double y) { return std::exp(a(x, y)); };
        }
        throw ConfigError("expression: unknown token '" + name + "'");
    }
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
    Parser p(text);
    return p.parse();
}

}  // namespace ksup
