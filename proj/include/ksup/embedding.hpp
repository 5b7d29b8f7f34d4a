#pragma once

#include <optional>
#include <vector>

#include "ksup/covers.hpp"
#include "ksup/functions.hpp"
#include "ksup/pl.hpp"

namespace ksup {

// Certified image interval of one brick under p_i.
struct CertEntry {
    int brick_id = 0;
    double lo = 0, hi = 0;
};

// Separating maps p_i : [0,1]^n -> [0,1], p_i(x) = sum_j lambda_j psi_i(x_j),
// with per-(cover, family) certificates: every brick of F_i maps into its
// certified closed interval and the intervals are pairwise disjoint with
// recorded margin sigma > 0.
class Embedding : public Projector {
  public:
    int n = 1;
    std::vector<double> weights;                         // lambda_j, j = 1..n
    std::vector<MonotonePL> psis;                        // one per family, k = 2n+1
    // certs[scale][family] sorted by lo
    std::vector<std::vector<std::vector<CertEntry>>> certs;
    std::vector<std::vector<double>> sigmas;             // min pairwise gap
    std::vector<double> moduli;                          // per family: sum(lambda) * max slope

    int num_components() const override { return static_cast<int>(psis.size()); }
    double project(int comp, std::span<const double> x) const override;

    // certified interval of a brick; throws UnknownBrick
    CertEntry brick_image(int scale, int family, int brick_id) const;
    // at most one brick of F_i whose certified interval contains z
    std::optional<CertEntry> fiber_hits(int scale, int family, double z) const;
};

// Build an embedding whose certificates cover every (cover, family) pair of
// the family. n = 1 uses identity inner maps (monotone images of separated
// intervals are separated); n >= 2 allocates psi values on rank-interleaved
// lattices so the weighted sums separate brick products at every scale.
// Throws SeparationFailure when a margin cannot be made positive.
Embedding build_embedding(const CoverFamily& family);

// Sternfeld-type embedding fixture: X is a PL arc (or finite set) given by
// parameter samples; the factor coordinates are PL in the parameter. Labels
// partition the samples into A_1..A_{n+1} with singleton p_i-fibers on A_i
// within the declared radius.
class SternfeldEmbedding : public Projector {
  public:
    struct Sample {
        double param = 0;
        std::vector<double> coords;  // one per factor
        int label = 1;               // 1 .. n+1
        double radius = 0;
    };

    int n = 1;                       // dimension of X; n+1 factors
    std::vector<GridFunction::Block> factor_domains;  // one [lo,hi] per factor
    std::vector<Sample> samples;     // sorted by param

    int num_components() const override { return n + 1; }
    double project(int comp, std::span<const double> x) const override;

    const Sample* nearest_sample(double param) const;
    void validate() const;  // label partition, coords in factors, radii > 0,
                            // fiber injectivity on the sample set
};

}  // namespace ksup
