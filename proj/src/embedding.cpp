#include "ksup/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "ksup/errors.hpp"

namespace ksup {

double Embedding::project(int comp, std::span<const double> x) const {
    const auto& psi = psis.at(static_cast<std::size_t>(comp));
    double s = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * psi.eval(x[j]);
    return s;
}

CertEntry Embedding::brick_image(int scale, int family, int brick_id) const {
    const auto& list = certs.at(static_cast<std::size_t>(scale)).at(static_cast<std::size_t>(family));
    for (const auto& e : list)
        if (e.brick_id == brick_id) return e;
    throw UnknownBrick("scale " + std::to_string(scale) + " family " + std::to_string(family) +
                       " brick " + std::to_string(brick_id));
}

std::optional<CertEntry> Embedding::fiber_hits(int scale, int family, double z) const {
    const auto& list = certs.at(static_cast<std::size_t>(scale)).at(static_cast<std::size_t>(family));
    auto it = std::upper_bound(list.begin(), list.end(), z,
                               [](double v, const CertEntry& e) { return v < e.lo; });
    if (it == list.begin()) return std::nullopt;
    --it;
    if (z >= it->lo && z <= it->hi) return *it;
    return std::nullopt;
}

namespace {

struct Region {
    double xa = 0, xb = 1;
    bool interval = false;
    int level = -1;  // scale index; -1 for the root
    double va = 0, vb = 1;
    std::vector<std::unique_ptr<Region>> children;
};

// beta(r) = (n^r - 1)/(n - 1): rank lattice exponents (1, n+1, n^2+n+1, ...)
long long beta_rank(int n, int r) {
    long long b = 0;
    for (int i = 0; i < r; ++i) b = n * b + 1;
    return b;
}

constexpr double kGamma = 32.0;
constexpr int kKappa = 2;  // min anchor spacing in lattice units

// per-family axis system per scale, recovered from the cover's bricks
std::vector<std::vector<std::pair<double, double>>> axis_systems(const CoverFamily& fam,
                                                                 int family) {
    std::vector<std::vector<std::pair<double, double>>> out;
    for (const auto& cover : fam.covers) {
        const auto& cf = cover.families.at(static_cast<std::size_t>(family));
        std::vector<std::pair<double, double>> ivs;
        for (const auto& b : cf.bricks)
            ivs.emplace_back(b.lo[0].to_double(), b.hi[0].to_double());
        std::sort(ivs.begin(), ivs.end());
        ivs.erase(std::unique(ivs.begin(), ivs.end()), ivs.end());
        // diagonal product structure: brick count must equal K^n
        std::size_t kn = 1;
        for (int j = 0; j < fam.n; ++j) kn *= ivs.size();
        if (kn != cf.bricks.size())
            throw SeparationFailure("cover is not a diagonal product family; cannot allocate psi");
        out.push_back(std::move(ivs));
    }
    return out;
}

void build_region_tree(Region& root,
                       const std::vector<std::vector<std::pair<double, double>>>& systems) {
    std::vector<Region*> frontier{&root};
    for (std::size_t s = 0; s < systems.size(); ++s) {
        std::vector<Region*> next;
        for (Region* r : frontier) {
            std::vector<std::pair<double, double>> inside;
            for (const auto& iv : systems[s])
                if (iv.first >= r->xa - 1e-15 && iv.second <= r->xb + 1e-15) inside.push_back(iv);
            std::sort(inside.begin(), inside.end());
            double cur = r->xa;
            for (const auto& iv : inside) {
                if (iv.first < cur - 1e-15)
                    throw SeparationFailure("axis systems are not nested across scales");
                if (iv.first > cur + 1e-15) {
                    auto g = std::make_unique<Region>();
                    g->xa = cur;
                    g->xb = iv.first;
                    g->interval = false;
                    g->level = static_cast<int>(s);
                    r->children.push_back(std::move(g));
                }
                auto nd = std::make_unique<Region>();
                nd->xa = iv.first;
                nd->xb = iv.second;
                nd->interval = true;
                nd->level = static_cast<int>(s);
                r->children.push_back(std::move(nd));
                cur = iv.second;
            }
            if (r->xb > cur + 1e-15) {
                auto g = std::make_unique<Region>();
                g->xa = cur;
                g->xb = r->xb;
                g->interval = false;
                g->level = static_cast<int>(s);
                r->children.push_back(std::move(g));
            }
            for (auto& c : r->children) next.push_back(c.get());
        }
        frontier = std::move(next);
        // sanity: every interval of scale s must be inside exactly one region
        std::size_t got = 0;
        for (Region* r : frontier)
            if (r->interval && r->level == static_cast<int>(s)) ++got;
        if (got != systems[s].size())
            throw SeparationFailure("axis interval missing from the nesting tree at scale " +
                                    std::to_string(s));
    }
}

void allocate_values(Region& r, int n) {
    std::vector<Region*> iv_kids;
    for (auto& c : r.children)
        if (c->interval) iv_kids.push_back(c.get());
    if (r.children.empty()) return;
    if (iv_kids.empty()) {
        for (auto& c : r.children) {
            c->va = r.va;
            c->vb = r.vb;
            allocate_values(*c, n);
        }
        return;
    }
    int level = iv_kids.front()->level;
    double u = std::pow(kGamma, -static_cast<double>(beta_rank(n, level + 1)));
    double pw = u / kGamma;
    auto k = static_cast<long long>(iv_kids.size());
    auto lo_idx = static_cast<long long>(std::floor(r.va / u)) + 1;
    auto hi_idx = static_cast<long long>(std::ceil((r.vb - pw) / u)) - 1;
    long long avail = hi_idx - lo_idx + 1;
    if (avail < (k - 1) * kKappa + 1)
        throw SeparationFailure("value budget exhausted at rank " + std::to_string(level + 1) +
                                " (scales too aggressive for double precision)");
    std::vector<long long> idxs(static_cast<std::size_t>(k));
    for (long long j = 0; j < k; ++j)
        idxs[static_cast<std::size_t>(j)] =
            lo_idx + static_cast<long long>(std::llround((static_cast<double>(j) + 0.5) *
                                                         static_cast<double>(avail) /
                                                         static_cast<double>(k)));
    for (std::size_t j = 1; j < idxs.size(); ++j)
        if (idxs[j] < idxs[j - 1] + kKappa) idxs[j] = idxs[j - 1] + kKappa;
    if (idxs.back() > hi_idx) {
        long long over = idxs.back() - hi_idx;
        for (std::size_t j = 0; j < idxs.size(); ++j)
            idxs[j] = std::max(lo_idx + static_cast<long long>(j) * kKappa, idxs[j] - over);
        if (idxs.back() > hi_idx)
            throw SeparationFailure("anchor placement failed at rank " + std::to_string(level + 1));
    }
    std::size_t which = 0;
    double cur_v = r.va;
    bool moved = false;
    for (auto& c : r.children) {
        if (!c->interval) continue;
        if (std::abs(c->xa - r.xa) < 1e-15) {  // touches the region start (domain edge chain)
            c->va = r.va;
            c->vb = r.va + pw;
        } else if (std::abs(c->xb - r.xb) < 1e-15) {
            c->va = r.vb - pw;
            c->vb = r.vb;
        } else {
            double a = static_cast<double>(idxs[which]) * u;
            c->va = a;
            c->vb = a + pw;
        }
        if (moved && c->va <= cur_v)
            throw SeparationFailure("plateau order collision at rank " + std::to_string(level + 1));
        cur_v = c->vb;
        moved = true;
        ++which;
    }
    // gaps fill the space between plateaus
    double prev = r.va;
    for (std::size_t j = 0; j < r.children.size(); ++j) {
        auto& c = r.children[j];
        if (c->interval) {
            prev = c->vb;
            continue;
        }
        c->va = prev;
        c->vb = (j + 1 < r.children.size()) ? r.children[j + 1]->va : r.vb;
        if (c->vb < c->va) throw SeparationFailure("negative riser during allocation");
    }
    for (auto& c : r.children) allocate_values(*c, n);
}

void collect_breakpoints(const Region& r, std::map<double, double>& bp) {
    if (r.children.empty()) {
        bp[r.xa] = r.va;
        bp[r.xb] = r.vb;
        return;
    }
    for (const auto& c : r.children) collect_breakpoints(*c, bp);
}

}  // namespace

Embedding build_embedding(const CoverFamily& fam) {
    Embedding e;
    e.n = fam.n;
    int k = fam.num_families();
    e.certs.assign(fam.covers.size(), {});
    e.sigmas.assign(fam.covers.size(), {});

    if (fam.n == 0) {
        e.weights = {};
        e.psis.assign(1, MonotonePL());
        for (std::size_t s = 0; s < fam.covers.size(); ++s) {
            e.certs[s].push_back({CertEntry{0, 0.0, 0.0}});
            e.sigmas[s].push_back(1.0);
        }
        e.moduli = {0.0};
        return e;
    }

    if (fam.n == 1) {
        e.weights = {0.5};
        e.psis.assign(static_cast<std::size_t>(k), MonotonePL());
    } else {
        // weights lambda_1 = 1/2, lambda_j = (1/2) sum_r gamma^{-(j-1) beta(r)}
        int S = static_cast<int>(fam.covers.size());
        e.weights.assign(static_cast<std::size_t>(fam.n), 0.0);
        e.weights[0] = 0.5;
        for (int j = 2; j <= fam.n; ++j) {
            double w = 0;
            for (int r = 1; r <= S; ++r)
                w += std::pow(kGamma, -static_cast<double>(j - 1) * static_cast<double>(beta_rank(fam.n, r)));
            e.weights[static_cast<std::size_t>(j - 1)] = 0.5 * w;
        }
        double total = 0;
        for (double w : e.weights) total += w;
        if (total > 1.0) throw SeparationFailure("weights exceed 1");
        e.psis.clear();
        for (int i = 0; i < k; ++i) {
            auto systems = axis_systems(fam, i);
            Region root;
            build_region_tree(root, systems);
            allocate_values(root, fam.n);
            std::map<double, double> bp;
            collect_breakpoints(root, bp);
            std::vector<double> xs, vs;
            for (auto& [x, v] : bp) {
                xs.push_back(x);
                vs.push_back(v);
            }
            e.psis.emplace_back(std::move(xs), std::move(vs));
        }
    }

    // certificates by monotone corner evaluation, checked pairwise
    for (std::size_t s = 0; s < fam.covers.size(); ++s) {
        const auto& cover = fam.covers[s];
        for (int i = 0; i < k; ++i) {
            const auto& cf = cover.families[static_cast<std::size_t>(i)];
            const auto& psi = e.psis[static_cast<std::size_t>(i)];
            std::vector<CertEntry> list;
            list.reserve(cf.bricks.size());
            for (const auto& b : cf.bricks) {
                double lo = 0, hi = 0;
                for (int j = 0; j < fam.n; ++j) {
                    lo += e.weights[static_cast<std::size_t>(j)] * psi.eval(b.lo[static_cast<std::size_t>(j)].to_double());
                    hi += e.weights[static_cast<std::size_t>(j)] * psi.eval(b.hi[static_cast<std::size_t>(j)].to_double());
                }
                list.push_back({b.id, lo, hi});
            }
            std::sort(list.begin(), list.end(),
                      [](const CertEntry& a, const CertEntry& b) { return a.lo < b.lo; });
            double sigma = 1.0;
            for (std::size_t t = 1; t < list.size(); ++t) {
                double gap = list[t].lo - list[t - 1].hi;
                sigma = std::min(sigma, gap);
            }
            if (list.size() >= 2 && sigma <= 1e-13)
                throw SeparationFailure("family " + std::to_string(i + 1) + " scale " +
                                        std::to_string(s) + ": certified margin " +
                                        std::to_string(sigma));
            e.certs[s].push_back(std::move(list));
            e.sigmas[s].push_back(list.size() >= 2 ? sigma : 1.0);
        }
    }

    double wsum = 0;
    for (double w : e.weights) wsum += w;
    for (int i = 0; i < k; ++i)
        e.moduli.push_back(wsum * e.psis[static_cast<std::size_t>(i)].max_slope());
    return e;
}

double SternfeldEmbedding::project(int comp, std::span<const double> x) const {
    // coords are PL in the arc parameter
    double t = x[0];
    if (samples.empty()) throw PreconditionError("empty fixture");
    if (t <= samples.front().param) return samples.front().coords[static_cast<std::size_t>(comp)];
    if (t >= samples.back().param) return samples.back().coords[static_cast<std::size_t>(comp)];
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const Sample& s) { return v < s.param; });
    const Sample& b = *it;
    const Sample& a = *(it - 1);
    double fr = (t - a.param) / (b.param - a.param);
    return a.coords[static_cast<std::size_t>(comp)] * (1 - fr) + b.coords[static_cast<std::size_t>(comp)] * fr;
}

const SternfeldEmbedding::Sample* SternfeldEmbedding::nearest_sample(double param) const {
    if (samples.empty()) return nullptr;
    auto it = std::lower_bound(samples.begin(), samples.end(), param,
                               [](const Sample& s, double v) { return s.param < v; });
    if (it == samples.end()) return &samples.back();
    if (it == samples.begin()) return &samples.front();
    auto prev = it - 1;
    return (param - prev->param) <= (it->param - param) ? &*prev : &*it;
}

void SternfeldEmbedding::validate() const {
    for (const auto& s : samples) {
        if (s.label < 1 || s.label > n + 1) throw InvariantError("fixture label out of range");
        if (!(s.radius > 0)) throw InvariantError("fixture radius must be positive");
        if (static_cast<int>(s.coords.size()) != n + 1)
            throw InvariantError("fixture sample coordinate count mismatch");
        for (int i = 0; i <= n; ++i) {
            const auto& dom = factor_domains[static_cast<std::size_t>(i)];
            double c = s.coords[static_cast<std::size_t>(i)];
            if (c < dom.lo.to_double() - 1e-12 || c > dom.hi.to_double() + 1e-12)
                throw InvariantError("fixture coordinate outside its factor domain");
        }
    }
    // fiber injectivity on the labeled sample set: for x in A_i, no other
    // sample within the radius shares the p_i coordinate
    for (const auto& s : samples) {
        int i = s.label - 1;
        for (const auto& o : samples) {
            if (&o == &s) continue;
            if (std::abs(o.param - s.param) < s.radius &&
                o.coords[static_cast<std::size_t>(i)] == s.coords[static_cast<std::size_t>(i)])
                throw InvariantError("fixture fiber injectivity violated at param " +
                                     std::to_string(s.param));
        }
    }
}

}  // namespace ksup
