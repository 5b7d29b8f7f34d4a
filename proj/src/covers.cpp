#include "ksup/covers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ksup/errors.hpp"
#include "ksup/functions.hpp"

namespace ksup {

Dyadic Brick::diameter() const {
    Dyadic d(0, 0);
    for (std::size_t j = 0; j < lo.size(); ++j) d = Dyadic::max(d, hi[j] - lo[j]);
    return d;
}

bool Brick::contains(const std::vector<Dyadic>& p) const {
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (p[j] < lo[j] || p[j] > hi[j]) return false;
    return true;
}

namespace {

struct Iv {
    Dyadic lo, hi;
};

// Diagonal Ostrand system on one axis: period (2n+1) cells of width h,
// intervals spanning 2n cells starting at cell offset i, clipped to [0,1].
std::vector<Iv> base_axis_system(int n, int i, const Dyadic& h) {
    std::vector<Iv> out;
    int period = 2 * n + 1;
    Dyadic one(1, 0);
    for (std::int64_t m = -1;; ++m) {
        Dyadic lo = h * (period * m + i);
        Dyadic hi = h * (period * m + i + 2 * n);
        if (lo >= one) break;
        Dyadic clo = Dyadic::max(lo, Dyadic(0, 0));
        Dyadic chi = Dyadic::min(hi, one);
        if (clo < chi) out.push_back({clo, chi});
    }
    return out;
}

// Split at accumulated coarser boundaries and trim one fine cell wherever a
// piece touches a boundary (domain edges excepted), so finer systems nest
// strictly inside single coarser regions.
std::vector<Iv> split_and_trim(const std::vector<Iv>& ivs, const std::set<Dyadic>& bounds,
                               const Dyadic& hf) {
    Dyadic zero(0, 0), one(1, 0);
    auto trim = [&](Dyadic a, Dyadic b) -> std::optional<Iv> {
        if (bounds.count(a) && a > zero) a = a + hf;
        if (bounds.count(b) && b < one) b = b - hf;
        if (b - a >= hf) return Iv{a, b};
        return std::nullopt;
    };
    std::vector<Iv> out;
    for (const auto& iv : ivs) {
        std::vector<Dyadic> cuts;
        for (auto it = bounds.upper_bound(iv.lo); it != bounds.end() && *it < iv.hi; ++it)
            cuts.push_back(*it);
        std::vector<Iv> pieces;
        Dyadic cur = iv.lo;
        for (const auto& p : cuts) {
            if (p - cur >= hf) pieces.push_back({cur, p});
            cur = p + hf;
        }
        if (iv.hi - cur >= hf) pieces.push_back({cur, iv.hi});
        for (const auto& pc : pieces)
            if (auto t = trim(pc.lo, pc.hi)) out.push_back(*t);
    }
    return out;
}

int ceil_log2(int v) {
    int p = 0;
    while ((1 << p) < v) ++p;
    return p;
}

}  // namespace

CoverFamily build_ostrand_family(int n, const std::vector<Dyadic>& scales) {
    if (n < 0) throw ConfigError("dimension must be >= 0");
    if (scales.empty()) throw ConfigError("need at least one scale");
    for (std::size_t s = 0; s < scales.size(); ++s) {
        if (scales[s].sign() <= 0) throw ConfigError("scales must be positive");
        if (s > 0 && !(scales[s] < scales[s - 1]))
            throw ConfigError("scales must be strictly decreasing");
    }

    CoverFamily fam;
    fam.n = n;

    if (n == 0) {
        for (std::size_t s = 0; s < scales.size(); ++s) {
            KolmogorovCover c;
            c.scale_index = static_cast<int>(s);
            c.mesh = Dyadic(0, 0);
            ColorFamily cf;
            cf.index = 1;
            cf.bricks.push_back(Brick{0, {}, {}});
            c.families.push_back(std::move(cf));
            fam.covers.push_back(std::move(c));
        }
        return fam;
    }

    int k = 2 * n + 1;
    int shift = ceil_log2(2 * n);  // h = scale / 2^shift so that 2n*h <= scale
    // accumulated same-family boundaries, for nesting (n >= 2 only)
    std::vector<std::set<Dyadic>> bounds(static_cast<std::size_t>(k));

    for (std::size_t s = 0; s < scales.size(); ++s) {
        Dyadic h = scales[s];
        for (int t = 0; t < shift; ++t) h = h.half();
        KolmogorovCover cover;
        cover.scale_index = static_cast<int>(s);
        Dyadic mesh(0, 0);
        int next_id = 0;
        for (int i = 0; i < k; ++i) {
            auto ivs = base_axis_system(n, i, h);
            if (n >= 2 && s > 0) ivs = split_and_trim(ivs, bounds[static_cast<std::size_t>(i)], h);
            for (const auto& iv : ivs) {
                bounds[static_cast<std::size_t>(i)].insert(iv.lo);
                bounds[static_cast<std::size_t>(i)].insert(iv.hi);
            }
            ColorFamily cf;
            cf.index = i + 1;
            // bricks = product of the same axis system on every axis
            std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
            if (!ivs.empty()) {
                for (;;) {
                    Brick b;
                    b.id = next_id++;
                    for (int j = 0; j < n; ++j) {
                        b.lo.push_back(ivs[idx[static_cast<std::size_t>(j)]].lo);
                        b.hi.push_back(ivs[idx[static_cast<std::size_t>(j)]].hi);
                    }
                    mesh = Dyadic::max(mesh, b.diameter());
                    cf.bricks.push_back(std::move(b));
                    int j = n - 1;
                    for (; j >= 0; --j) {
                        if (++idx[static_cast<std::size_t>(j)] < ivs.size()) break;
                        idx[static_cast<std::size_t>(j)] = 0;
                    }
                    if (j < 0) break;
                }
            }
            cover.families.push_back(std::move(cf));
        }
        cover.mesh = mesh;
        if (!(mesh <= scales[s])) throw InvariantError("generated mesh exceeds requested scale");
        fam.covers.push_back(std::move(cover));
    }
    return fam;
}

CoverFamily build_ostrand_family(int n, const std::vector<double>& scales) {
    std::vector<Dyadic> ds;
    for (double s : scales) {
        auto d = Dyadic::from_double(s, 50);
        if (!d) throw ConfigError("scale is not dyadic-representable: " + std::to_string(s));
        ds.push_back(*d);
    }
    return build_ostrand_family(n, ds);
}

CoverCertificate verify_cover(const KolmogorovCover& cover, int n, const Dyadic& grid_resolution,
                              const std::vector<std::vector<Dyadic>>& sample_override) {
    CoverCertificate cert;
    cert.measured_mesh = Dyadic(0, 0);

    auto fail = [&](const std::string& why, const std::string& wit) -> CoverCertificate& {
        cert.pass = false;
        cert.failure = why;
        cert.witness = wit;
        return cert;
    };

    // brick well-formedness and measured mesh
    for (const auto& cf : cover.families) {
        for (const auto& b : cf.bricks) {
            if (static_cast<int>(b.lo.size()) != n || static_cast<int>(b.hi.size()) != n) {
                fail("brick dimension mismatch", "brick " + std::to_string(b.id));
                return cert;
            }
            for (int j = 0; j < n; ++j)
                if (b.hi[j] < b.lo[j]) {
                    fail("brick with hi < lo", "brick " + std::to_string(b.id));
                    return cert;
                }
            cert.measured_mesh = Dyadic::max(cert.measured_mesh, b.diameter());
        }
    }
    if (cert.measured_mesh != cover.mesh) {
        fail("declared mesh differs from measured mesh", cert.measured_mesh.to_decimal_string());
        return cert;
    }

    // disjointness within each family: some axis must separate every pair with
    // a positive gap (touching forbidden); margin = min over pairs of the
    // largest axis gap
    bool have_gap = false;
    Dyadic min_gap(0, 0);
    for (const auto& cf : cover.families) {
        bool fam_has_pairs = false;
        Dyadic fam_margin(0, 0);
        for (std::size_t a = 0; a < cf.bricks.size(); ++a) {
            for (std::size_t b = a + 1; b < cf.bricks.size(); ++b) {
                Dyadic best(0, 0);
                bool sep = false;
                for (int j = 0; j < n; ++j) {
                    const auto& A = cf.bricks[a];
                    const auto& B = cf.bricks[b];
                    Dyadic gap1 = B.lo[j] - A.hi[j];
                    Dyadic gap2 = A.lo[j] - B.hi[j];
                    Dyadic g = Dyadic::max(gap1, gap2);
                    if (g.sign() > 0) {
                        sep = true;
                        best = Dyadic::max(best, g);
                    }
                }
                if (!sep) {
                    fail("two bricks of one family intersect or touch",
                         "family " + std::to_string(cf.index) + " bricks " +
                             std::to_string(cf.bricks[a].id) + "," + std::to_string(cf.bricks[b].id));
                    return cert;
                }
                fam_margin = fam_has_pairs ? Dyadic::min(fam_margin, best) : best;
                fam_has_pairs = true;
            }
        }
        cert.family_margins.push_back(fam_has_pairs ? fam_margin : Dyadic(1, 0));
        if (fam_has_pairs) {
            min_gap = have_gap ? Dyadic::min(min_gap, fam_margin) : fam_margin;
            have_gap = true;
        }
    }
    if (have_gap && n >= 1 && sample_override.empty() && !(grid_resolution < min_gap) &&
        !(grid_resolution == min_gap))
        throw PreconditionError("verify_cover: grid resolution coarser than the smallest gap");

    // multiplicity >= n+1
    if (n == 0) {
        cert.min_multiplicity = static_cast<int>(cover.families.size());
        cert.pass = cert.min_multiplicity >= 1;
        if (!cert.pass) fail("point of the 0-cube uncovered", "()");
        return cert;
    }

    int need = n + 1;
    if (!sample_override.empty()) {
        int mn = 1 << 30;
        for (const auto& p : sample_override) {
            int cnt = 0;
            for (const auto& cf : cover.families) {
                bool in = false;
                for (const auto& b : cf.bricks)
                    if (b.contains(p)) {
                        in = true;
                        break;
                    }
                if (in) ++cnt;
            }
            if (cnt < need) {
                std::ostringstream w;
                for (const auto& c : p) w << c.to_decimal_string() << " ";
                fail("multiplicity below n+1 at fixture point", w.str());
                return cert;
            }
            mn = std::min(mn, cnt);
        }
        cert.min_multiplicity = mn;
        cert.pass = true;
        return cert;
    }

    // check every brick coordinate is a multiple of the grid resolution; the
    // half-resolution raster then samples every membership class exactly
    int g = grid_resolution.exp();
    if (grid_resolution.num() != 1) throw PreconditionError("grid resolution must be a power of two");
    for (const auto& cf : cover.families)
        for (const auto& b : cf.bricks)
            for (int j = 0; j < n; ++j)
                if (b.lo[j].exp() > g || b.hi[j].exp() > g)
                    throw PreconditionError("grid resolution does not divide brick coordinates");

    const std::int64_t half_n = (std::int64_t(1) << (g + 1));  // cells at half resolution
    auto to_idx = [&](const Dyadic& d) {
        return d.num() << (g + 1 - d.exp());
    };
    if (n == 1) {
        std::vector<std::uint8_t> counts(static_cast<std::size_t>(half_n + 1), 0);
        for (const auto& cf : cover.families) {
            std::vector<std::uint8_t> mark(static_cast<std::size_t>(half_n + 1), 0);
            for (const auto& b : cf.bricks) {
                auto i0 = to_idx(b.lo[0]), i1 = to_idx(b.hi[0]);
                for (auto i = i0; i <= i1; ++i) mark[static_cast<std::size_t>(i)] = 1;
            }
            for (std::int64_t i = 0; i <= half_n; ++i) counts[static_cast<std::size_t>(i)] += mark[static_cast<std::size_t>(i)];
        }
        int mn = 1 << 30;
        std::int64_t worst = 0;
        for (std::int64_t i = 0; i <= half_n; ++i)
            if (counts[static_cast<std::size_t>(i)] < mn) {
                mn = counts[static_cast<std::size_t>(i)];
                worst = i;
            }
        cert.min_multiplicity = mn;
        if (mn < need) {
            fail("multiplicity below n+1", Dyadic(worst, g + 1).to_decimal_string());
            return cert;
        }
    } else if (n == 2) {
        std::size_t side = static_cast<std::size_t>(half_n + 1);
        std::vector<std::uint8_t> counts(side * side, 0);
        std::vector<std::uint8_t> mark(side * side);
        for (const auto& cf : cover.families) {
            std::fill(mark.begin(), mark.end(), 0);
            for (const auto& b : cf.bricks) {
                auto i0 = to_idx(b.lo[0]), i1 = to_idx(b.hi[0]);
                auto j0 = to_idx(b.lo[1]), j1 = to_idx(b.hi[1]);
                for (auto i = i0; i <= i1; ++i) {
                    auto* row = &mark[static_cast<std::size_t>(i) * side];
                    for (auto j = j0; j <= j1; ++j) row[static_cast<std::size_t>(j)] = 1;
                }
            }
            for (std::size_t t = 0; t < counts.size(); ++t) counts[t] += mark[t];
        }
        int mn = 1 << 30;
        std::size_t worst = 0;
        for (std::size_t t = 0; t < counts.size(); ++t)
            if (counts[t] < mn) {
                mn = counts[t];
                worst = t;
            }
        cert.min_multiplicity = mn;
        if (mn < need) {
            auto wi = static_cast<std::int64_t>(worst / side);
            auto wj = static_cast<std::int64_t>(worst % side);
            fail("multiplicity below n+1", Dyadic(wi, g + 1).to_decimal_string() + "," +
                                               Dyadic(wj, g + 1).to_decimal_string());
            return cert;
        }
    } else {
        throw ConfigError("verify_cover supports n <= 2 grids (use sample_override beyond)");
    }

    cert.pass = true;
    return cert;
}

double f_mesh(const KolmogorovCover& cover, const GridFunction& f) {
    double mesh = 0.0;
    for (const auto& cf : cover.families) {
        for (const auto& b : cf.bricks) {
            double mn, mx;
            if (f.range_on_box(b.lo, b.hi, mn, mx)) mesh = std::max(mesh, mx - mn);
        }
    }
    return mesh;
}

const KolmogorovCover& select_cover(const CoverFamily& family, const GridFunction& f, double eps) {
    if (!(eps > 0)) throw PreconditionError("select_cover: eps must be positive");
    double lip = f.lipschitz().value_or(0.0);
    for (const auto& cover : family.covers) {
        double slack = 2.0 * lip * std::min(f.step().to_double(), cover.mesh.to_double());
        if (f_mesh(cover, f) + slack < eps) return cover;
    }
    throw NoCoverFineEnough("no cover with f_mesh below " + std::to_string(eps) +
                            "; regenerate the family with smaller scales");
}

}  // namespace ksup
