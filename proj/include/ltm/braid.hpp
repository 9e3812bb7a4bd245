#pragma once

// Three-strand stirring protocols and their reduced Burau action.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/linalg.hpp"

namespace ltm {

/// Generators sigma_1^{+-1}, sigma_2^{+-1} encoded as +-1, +-2. Read left to right.
class BraidWord {
public:
    explicit BraidWord(std::vector<int> letters) : letters_(std::move(letters)) {
        if (letters_.empty()) throw error(errc::empty_word, "braid word has no letters");
        for (int g : letters_) {
            if (g != 1 && g != -1 && g != 2 && g != -2) {
                throw error(errc::parse_error, "generator " + std::to_string(g) +
                                                   " is not in the 3-strand braid group");
            }
        }
    }

    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }

    BraidWord inverse() const {
        std::vector<int> inv(letters_.rbegin(), letters_.rend());
        for (int& g : inv) g = -g;
        return BraidWord(std::move(inv));
    }

    BraidWord power(int n) const {
        if (n < 1) throw error(errc::empty_word, "braid power must be positive");
        std::vector<int> out;
        out.reserve(letters_.size() * static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out.insert(out.end(), letters_.begin(), letters_.end());
        return BraidWord(std::move(out));
    }

    friend BraidWord operator*(const BraidWord& a, const BraidWord& b) {
        std::vector<int> out = a.letters_;
        out.insert(out.end(), b.letters_.begin(), b.letters_.end());
        return BraidWord(std::move(out));
    }

    bool operator==(const BraidWord&) const = default;

private:
    std::vector<int> letters_;
};

/// Parse "s1 s2^-1", "s1 s2^5": whitespace-separated s<i> or s<i>^<n>, n != 0.
inline BraidWord parse_braid_word(std::string_view text) {
    std::vector<int> letters;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || tok[0] != 's' || (tok[1] != '1' && tok[1] != '2')) {
            throw error(errc::parse_error, "bad token '" + tok + "' (expected s1, s2, s1^n, s2^n)");
        }
        const int gen = tok[1] - '0';
        long exponent = 1;
        if (tok.size() > 2) {
            if (tok[2] != '^' || tok.size() == 3) {
                throw error(errc::parse_error, "bad exponent in token '" + tok + "'");
            }
            const std::string digits = tok.substr(3);
            char* end = nullptr;
            exponent = std::strtol(digits.c_str(), &end, 10);
            if (end == digits.c_str() || *end != '\0' || exponent == 0) {
                throw error(errc::parse_error, "exponent must be a nonzero integer in '" + tok + "'");
            }
            if (std::labs(exponent) > 1000000) {
                throw error(errc::parse_error, "exponent too large in '" + tok + "'");
            }
        }
        const int letter = exponent > 0 ? gen : -gen;
        for (long i = 0; i < std::labs(exponent); ++i) letters.push_back(letter);
    }
    if (letters.empty()) throw error(errc::empty_word, "braid word has no letters");
    return BraidWord(std::move(letters));
}

inline std::string to_string(const BraidWord& w) {
    std::string out;
    const auto& ls = w.letters();
    for (std::size_t i = 0; i < ls.size();) {
        std::size_t j = i;
        while (j < ls.size() && ls[j] == ls[i]) ++j;
        const long run = static_cast<long>(j - i) * (ls[i] > 0 ? 1 : -1);
        if (!out.empty()) out += ' ';
        out += 's' + std::to_string(std::abs(ls[i]));
        if (run != 1) out += '^' + std::to_string(run);
        i = j;
    }
    return out;
}

/// Integer 2x2 matrix with overflow-checked products.
struct BurauMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return checked_sub(checked_mul(a, d), checked_mul(b, c)); }
    std::int64_t trace() const { return checked_add(a, d); }

    BurauMatrix operator*(const BurauMatrix& o) const {
        return {checked_add(checked_mul(a, o.a), checked_mul(b, o.c)),
                checked_add(checked_mul(a, o.b), checked_mul(b, o.d)),
                checked_add(checked_mul(c, o.a), checked_mul(d, o.c)),
                checked_add(checked_mul(c, o.b), checked_mul(d, o.d))};
    }

    Mat2 to_real() const {
        return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                static_cast<double>(d)};
    }

    bool operator==(const BurauMatrix&) const = default;

private:
    static std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_mul_overflow(x, y, &r)) throw error(errc::overflow, "Burau entry overflow");
        return r;
    }
    static std::int64_t checked_add(std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_add_overflow(x, y, &r)) throw error(errc::overflow, "Burau entry overflow");
        return r;
    }
    static std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_sub_overflow(x, y, &r)) throw error(errc::overflow, "Burau entry overflow");
        return r;
    }
};

inline BurauMatrix generator_matrix(int letter) {
    switch (letter) {
        case 1: return {1, 0, 1, 1};
        case -1: return {1, 0, -1, 1};
        case 2: return {1, -1, 0, 1};
        case -2: return {1, 1, 0, 1};
        default: break;
    }
    throw error(errc::parse_error, "not a 3-strand generator: " + std::to_string(letter));
}

/// Each successive letter multiplies on the left, so s1^k s2^-l gives
/// [[1 + k l, l], [k, 1]].
inline BurauMatrix burau_matrix(const BraidWord& word) {
    BurauMatrix m;
    for (int g : word.letters()) m = generator_matrix(g) * m;
    return m;
}

/// Exact spectral radius of a unimodular integer matrix, falling back to the
/// real closed form otherwise.
inline double spectral_radius(const BurauMatrix& m) {
    const std::int64_t det = m.det();
    const std::int64_t tr = m.trace();
    if ((det == 1 && std::llabs(tr) <= 2) || (det == -1 && tr == 0)) return 1.0;
    return spectral_radius(m.to_real());
}

enum class BraidClass { pseudo_anosov, finite_order_or_undetected };

inline const char* to_string(BraidClass c) {
    return c == BraidClass::pseudo_anosov ? "pseudo-Anosov" : "finite-order-or-undetected";
}

struct EntropyBound {
    double h_rods = 0.0;
    BraidClass classification = BraidClass::finite_order_or_undetected;
};

inline EntropyBound h_rods(const BraidWord& word) {
    const double rho = spectral_radius(burau_matrix(word));
    EntropyBound out;
    out.h_rods = std::max(0.0, std::log(rho));
    out.classification =
        out.h_rods > 0.0 ? BraidClass::pseudo_anosov : BraidClass::finite_order_or_undetected;
    return out;
}

/// The braid s1^k s2^-ell whose Burau matrix is the cat-map matrix of an LTM
/// with strengths (k, ell).
inline BraidWord ltm_braid(const LtmParams& p) {
    std::vector<int> letters;
    for (std::int64_t i = 0; i < std::llabs(p.k()); ++i) letters.push_back(p.k() > 0 ? 1 : -1);
    for (std::int64_t i = 0; i < std::llabs(p.ell()); ++i) letters.push_back(p.ell() > 0 ? -2 : 2);
    return BraidWord(std::move(letters));
}

/// Entropy of the generalized cat map [[1 + k ell, ell], [k, 1]], which the
/// LTM with the same strengths is semi-conjugate to.
inline double ltm_lower_bound(const LtmParams& p) {
    const BurauMatrix m{1 + p.k() * p.ell(), p.ell(), p.k(), 1};
    const double rho = spectral_radius(m);
    if (rho == 1.0) {
        throw error(errc::non_hyperbolic_bound, "cat-map matrix has spectral radius 1 (" +
                                                    describe(p) + ")");
    }
    return std::log(rho);
}

}  // namespace ltm
