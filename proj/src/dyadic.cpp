#include "ksup/dyadic.hpp"

#include <cmath>
#include <cstdlib>

#include "ksup/errors.hpp"

namespace ksup {

Dyadic::Dyadic(std::int64_t num, int exp) : num_(num), exp_(exp) {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
        num_ >>= 1;
        --exp_;
    }
    if (exp_ < 0) {
        // scale up to integer form
        while (exp_ < 0) {
            num_ <<= 1;
            ++exp_;
        }
    }
}

std::optional<Dyadic> Dyadic::from_double(double v, int max_exp) {
    if (!std::isfinite(v)) return std::nullopt;
    double scaled = v;
    for (int e = 0; e <= max_exp; ++e) {
        double r = std::nearbyint(scaled);
        if (r == scaled && std::abs(r) < 9.0e18) {
            return Dyadic(static_cast<std::int64_t>(r), e);
        }
        scaled *= 2.0;
    }
    return std::nullopt;
}

Dyadic Dyadic::pow2(int e) {
    if (e >= 0) return Dyadic(std::int64_t(1) << e, 0);
    return Dyadic(1, -e);
}

double Dyadic::to_double() const {
    return std::ldexp(static_cast<double>(num_), -exp_);
}

std::string Dyadic::to_decimal_string() const {
    if (num_ == 0) return "0";
    // num / 2^exp = num * 5^exp / 10^exp; exp <= 60 so use 128-bit product.
    __int128 scaled = num_;
    for (int i = 0; i < exp_; ++i) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits;
    if (scaled == 0) digits = "0";
    while (scaled > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(digits.size()) <= exp_) digits.insert(digits.begin(), '0');
    std::string out;
    if (neg) out += '-';
    out += digits.substr(0, digits.size() - exp_);
    if (exp_ > 0) {
        std::string frac = digits.substr(digits.size() - exp_);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    }
    return out;
}

int Dyadic::cmp(const Dyadic& o) const {
    int e = std::max(exp_, o.exp_);
    __int128 a = static_cast<__int128>(num_) << (e - exp_);
    __int128 b = static_cast<__int128>(o.num_) << (e - o.exp_);
    return a < b ? -1 : (a > b ? 1 : 0);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    int e = std::max(exp_, o.exp_);
    if (e > 62) throw InvariantError("dyadic exponent overflow in addition");
    std::int64_t a = num_ << (e - exp_);
    std::int64_t b = o.num_ << (e - o.exp_);
    return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(std::int64_t k) const { return Dyadic(num_ * k, exp_); }

}  // namespace ksup
