#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ksup/dyadic.hpp"

namespace ksup {

class GridFunction;

// Closed axis-aligned box in [0,1]^n with exact dyadic corners. Singleton
// boxes (lo == hi) are allowed for finite-fixture covers; the Ostrand
// generator only emits boxes with lo < hi on every axis.
struct Brick {
    int id = 0;
    std::vector<Dyadic> lo;
    std::vector<Dyadic> hi;

    Dyadic diameter() const;  // sup metric
    bool contains(const std::vector<Dyadic>& p) const;
};

struct ColorFamily {
    int index = 1;  // 1 .. 2n+1
    std::vector<Brick> bricks;
};

struct KolmogorovCover {
    int scale_index = 0;
    Dyadic mesh;
    std::vector<ColorFamily> families;
};

struct CoverFamily {
    int n = 1;
    std::vector<KolmogorovCover> covers;
    int num_families() const { return 2 * n + 1; }
};

struct CoverCertificate {
    bool pass = false;
    std::string failure;                     // empty when pass
    std::string witness;                     // first violation
    std::vector<Dyadic> family_margins;      // min pairwise gap per family
    int min_multiplicity = 0;
    Dyadic measured_mesh;
};

// Ostrand-style family of covers of [0,1]^n. Each cover splits into 2n+1
// disjoint brick families and covers every point at least n+1 times. For
// n >= 2 the finer axis systems are split and trimmed at all coarser
// same-family interval endpoints so the systems nest scale over scale.
// scales must be positive, strictly decreasing dyadics; each cover's mesh
// is <= its requested scale.
CoverFamily build_ostrand_family(int n, const std::vector<Dyadic>& scales);

// Convenience: doubles must be exactly dyadic or this throws ConfigError.
CoverFamily build_ostrand_family(int n, const std::vector<double>& scales);

// Exhaustive exact verification of the cover invariants. grid_resolution
// must divide every brick coordinate (so membership is piecewise constant
// between grid nodes and the check is exact). For mesh-0 covers of finite
// fixtures pass the fixture points as sample_override.
CoverCertificate verify_cover(const KolmogorovCover& cover, int n, const Dyadic& grid_resolution,
                              const std::vector<std::vector<Dyadic>>& sample_override = {});

// Maximal oscillation of f over any brick of the cover, computed exactly for
// the PL/bilinear interpolant of f's samples.
double f_mesh(const KolmogorovCover& cover, const GridFunction& f);

// First cover in family order whose f_mesh (plus the Lipschitz sampling
// slack, when f declares a constant) is < eps. Throws NoCoverFineEnough.
const KolmogorovCover& select_cover(const CoverFamily& family, const GridFunction& f, double eps);

}  // namespace ksup
