#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace waypath {

// Fixed-capacity bitset sized at runtime. Backs reachability matrices and
// printed-set tracking; word-parallel ops keep pairwise set arithmetic cheap.
class DynamicBitset {
public:
    DynamicBitset() = default;
    explicit DynamicBitset(std::size_t bits)
        : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    DynamicBitset& operator|=(const DynamicBitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    DynamicBitset& operator&=(const DynamicBitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    // this &= ~o
    DynamicBitset& and_not(const DynamicBitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend bool operator==(const DynamicBitset& a, const DynamicBitset& b) {
        return a.bits_ == b.bits_ && a.words_ == b.words_;
    }

    // |a & b| without materializing the intersection.
    static std::size_t intersection_count(const DynamicBitset& a, const DynamicBitset& b) {
        std::size_t c = 0;
        for (std::size_t k = 0; k < a.words_.size(); ++k)
            c += static_cast<std::size_t>(std::popcount(a.words_[k] & b.words_[k]));
        return c;
    }

    // Calls f(index) for every set bit in ascending order.
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                unsigned bit = static_cast<unsigned>(std::countr_zero(w));
                f(k * 64 + bit);
                w &= w - 1;
            }
        }
    }

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace waypath
