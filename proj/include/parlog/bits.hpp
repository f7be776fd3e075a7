#ifndef PARLOG_BITS_HPP
#define PARLOG_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace parlog {

// Dynamic bitset sized at construction; node sets of Kripke models and
// rep sets of banks.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    void set(std::size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    bool any() const {
        for (std::uint64_t x : w_)
            if (x)
                return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t x : w_)
            c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }

    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i)
            w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i)
            w_[i] &= o.w_[i];
        return *this;
    }

    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

    Bits operator~() const {
        Bits r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i)
            r.w_[i] = ~w_[i];
        r.trim();
        return r;
    }

    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i])
                return false;
        return true;
    }

    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i])
                return true;
        return false;
    }

    bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bits& o) const { return !(*this == o); }
    bool operator<(const Bits& o) const { return w_ < o.w_; } // same-size order

    // Iterate set bits in increasing order.
    template <class F> void for_each(F f) const {
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t x = w_[wi];
            while (x) {
                int b = __builtin_ctzll(x);
                f(wi * 64 + static_cast<std::size_t>(b));
                x &= x - 1;
            }
        }
    }

    std::size_t hash() const {
        std::size_t h = n_;
        for (std::uint64_t x : w_)
            h = h * 1099511628211ull + static_cast<std::size_t>(x);
        return h;
    }

private:
    void trim() {
        if (n_ & 63)
            w_.back() &= (1ull << (n_ & 63)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

} // namespace parlog

#endif
