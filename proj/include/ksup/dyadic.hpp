#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ksup {

// Exact dyadic rational num / 2^exp, normalized so that num is odd or zero
// (zero has exp = 0). Brick coordinates and cover combinatorics use these so
// disjointness and multiplicity checks are float-free.
class Dyadic {
  public:
    Dyadic() : num_(0), exp_(0) {}
    Dyadic(std::int64_t num, int exp);

    static Dyadic from_int(std::int64_t v) { return Dyadic(v, 0); }
    // Exact conversion; nullopt if v is not a dyadic with exponent <= max_exp
    // or not finite.
    static std::optional<Dyadic> from_double(double v, int max_exp = 60);
    static Dyadic pow2(int e);  // 2^e, e may be negative

    std::int64_t num() const { return num_; }
    int exp() const { return exp_; }

    double to_double() const;
    // Exact decimal representation (dyadics terminate in decimal).
    std::string to_decimal_string() const;

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    Dyadic operator*(std::int64_t k) const;
    Dyadic half() const { return Dyadic(num_, exp_ + 1); }

    bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
    bool operator<(const Dyadic& o) const { return cmp(o) < 0; }
    bool operator<=(const Dyadic& o) const { return cmp(o) <= 0; }
    bool operator>(const Dyadic& o) const { return cmp(o) > 0; }
    bool operator>=(const Dyadic& o) const { return cmp(o) >= 0; }

    int cmp(const Dyadic& o) const;

    static Dyadic min(const Dyadic& a, const Dyadic& b) { return a <= b ? a : b; }
    static Dyadic max(const Dyadic& a, const Dyadic& b) { return a >= b ? a : b; }

  private:
    std::int64_t num_;
    int exp_;  // >= 0 after normalization
};

}  // namespace ksup
