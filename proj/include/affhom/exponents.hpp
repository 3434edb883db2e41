#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>

#include <affhom/errors.hpp>

namespace affhom {

inline constexpr int max_vars = 6;

// Multi-index of a monomial x1^e1 ... xk^ek.
class Exponents {
public:
    Exponents() = default;
    explicit Exponents(int num_vars) : n_(check_count(num_vars)) {}
    Exponents(std::initializer_list<int> entries) : n_(check_count(static_cast<int>(entries.size())))
    {
        int i = 0;
        for (int e : entries) {
            set(i++, e);
        }
    }

    static Exponents unit(int num_vars, int index)
    {
        Exponents e(num_vars);
        e.set(index, 1);
        return e;
    }

    int size() const noexcept { return n_; }
    int operator[](int i) const noexcept { return e_[i]; }
    void set(int i, int value)
    {
        if (value < 0 || value > 255) {
            throw PreconditionError("exponent out of range: " + std::to_string(value));
        }
        e_[i] = static_cast<std::uint8_t>(value);
    }

    int degree() const noexcept
    {
        return std::accumulate(e_.begin(), e_.begin() + n_, 0);
    }

    // Degree in all variables except the first.
    int transverse_degree() const noexcept { return degree() - (n_ > 0 ? e_[0] : 0); }

    bool divides(const Exponents& other) const noexcept
    {
        for (int i = 0; i < n_; ++i) {
            if (e_[i] > other.e_[i]) {
                return false;
            }
        }
        return true;
    }

    friend Exponents operator+(const Exponents& a, const Exponents& b)
    {
        Exponents r(a.n_);
        for (int i = 0; i < a.n_; ++i) {
            r.set(i, a.e_[i] + b.e_[i]);
        }
        return r;
    }

    friend Exponents operator-(const Exponents& a, const Exponents& b)
    {
        Exponents r(a.n_);
        for (int i = 0; i < a.n_; ++i) {
            r.set(i, a.e_[i] - b.e_[i]);
        }
        return r;
    }

    friend bool operator==(const Exponents& a, const Exponents& b) noexcept
    {
        return a.n_ == b.n_ && std::equal(a.e_.begin(), a.e_.begin() + a.n_, b.e_.begin());
    }

    // Plain lexicographic comparison (used for hashing-free containers).
    friend std::strong_ordering operator<=>(const Exponents& a, const Exponents& b) noexcept
    {
        if (auto c = a.n_ <=> b.n_; c != 0) {
            return c;
        }
        for (int i = 0; i < a.n_; ++i) {
            if (auto c = a.e_[i] <=> b.e_[i]; c != 0) {
                return c;
            }
        }
        return std::strong_ordering::equal;
    }

    // "[2,1]" style.
    std::string index_string() const
    {
        std::string s = "[";
        for (int i = 0; i < n_; ++i) {
            if (i != 0) {
                s += ',';
            }
            s += std::to_string(e_[i]);
        }
        return s + "]";
    }

    // "2 1" style, used by the series text format.
    std::string spaced() const
    {
        std::string s;
        for (int i = 0; i < n_; ++i) {
            if (i != 0) {
                s += ' ';
            }
            s += std::to_string(e_[i]);
        }
        return s;
    }

private:
    static std::uint8_t check_count(int n)
    {
        if (n < 0 || n > max_vars) {
            throw PreconditionError("unsupported variable count " + std::to_string(n));
        }
        return static_cast<std::uint8_t>(n);
    }

    std::array<std::uint8_t, max_vars> e_{};
    std::uint8_t n_ = 0;
};

// Degree ascending, then lexicographically descending: x^2, xy, y^2, x^3, ...
struct GradedOrder {
    bool operator()(const Exponents& a, const Exponents& b) const noexcept
    {
        const int da = a.degree();
        const int db = b.degree();
        if (da != db) {
            return da < db;
        }
        return b < a;
    }
};

// Calls fn(e) for every exponent vector of the given total degree, in graded order.
template <class Fn>
void for_each_of_degree(int num_vars, int degree, Fn&& fn)
{
    Exponents e(num_vars);
    if (num_vars == 0) {
        if (degree == 0) {
            fn(e);
        }
        return;
    }
    // recursive fill: first variable takes the largest share first
    auto rec = [&](auto&& self, int index, int remaining) -> void {
        if (index == num_vars - 1) {
            e.set(index, remaining);
            fn(static_cast<const Exponents&>(e));
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            e.set(index, k);
            self(self, index + 1, remaining - k);
        }
    };
    rec(rec, 0, degree);
}

} // namespace affhom
