#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pareto {

/// Square boolean matrix stored as packed 64-bit rows.
class BitMatrix {
public:
    using Word = std::uint64_t;

    BitMatrix() = default;
    explicit BitMatrix(std::size_t n)
        : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    std::size_t size() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool test(std::size_t r, std::size_t c) const {
        return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U;
    }
    void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= Word{1} << (c % 64); }
    void reset(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] &= ~(Word{1} << (c % 64)); }

    std::span<Word> row(std::size_t r) { return {bits_.data() + r * words_, words_}; }
    std::span<const Word> row(std::size_t r) const { return {bits_.data() + r * words_, words_}; }

    std::size_t row_count(std::size_t r) const {
        std::size_t total = 0;
        for (Word w : row(r)) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    bool row_any(std::size_t r) const {
        for (Word w : row(r))
            if (w) return true;
        return false;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<Word> bits_;
};

/// Calls fn(index) for every set bit of a packed row, in increasing order.
template <typename Fn>
void for_each_bit(std::span<const std::uint64_t> words, Fn&& fn) {
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = words[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            fn(w * 64 + static_cast<std::size_t>(b));
            bits &= bits - 1;
        }
    }
}

}  // namespace pareto
