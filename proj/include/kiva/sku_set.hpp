#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace kiva {

using SkuId = std::uint32_t;

/// Fixed-width bitset over the SKU universe of one instance.
///
/// All sets taking part in one binary operation must share the same width;
/// the width is fixed when the set is created from the universe size.
class SkuSet {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    SkuSet() = default;
    explicit SkuSet(std::size_t universe)
        : universe_(universe), words_(words_for(universe), 0) {}
    SkuSet(std::size_t universe, std::initializer_list<SkuId> ids) : SkuSet(universe) {
        for (SkuId id : ids) insert(id);
    }
    SkuSet(std::size_t universe, std::span<const SkuId> ids) : SkuSet(universe) {
        for (SkuId id : ids) insert(id);
    }

    static std::size_t words_for(std::size_t universe) {
        return (universe + word_bits - 1) / word_bits;
    }

    std::size_t universe() const noexcept { return universe_; }
    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }

    void insert(SkuId id) { words_[id / word_bits] |= Word{1} << (id % word_bits); }
    void erase(SkuId id) { words_[id / word_bits] &= ~(Word{1} << (id % word_bits)); }
    bool contains(SkuId id) const {
        return id < universe_ && (words_[id / word_bits] >> (id % word_bits)) & 1U;
    }

    std::size_t size() const noexcept {
        std::size_t n = 0;
        for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const noexcept {
        for (Word w : words_)
            if (w) return false;
        return true;
    }

    bool intersects(const SkuSet& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }
    bool is_subset_of(const SkuSet& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }
    std::size_t intersection_size(const SkuSet& other) const noexcept {
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return n;
    }

    SkuSet& operator|=(const SkuSet& other) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    SkuSet& operator&=(const SkuSet& other) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }
    /// Set difference (this \ other).
    SkuSet& operator-=(const SkuSet& other) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
        return *this;
    }
    friend SkuSet operator|(SkuSet a, const SkuSet& b) { return a |= b; }
    friend SkuSet operator&(SkuSet a, const SkuSet& b) { return a &= b; }
    friend SkuSet operator-(SkuSet a, const SkuSet& b) { return a -= b; }

    std::vector<SkuId> to_vector() const {
        std::vector<SkuId> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            Word bits = words_[w];
            while (bits) {
                out.push_back(static_cast<SkuId>(w * word_bits + std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    friend bool operator==(const SkuSet& a, const SkuSet& b) = default;

private:
    std::size_t universe_ = 0;
    std::vector<Word> words_;
};

} // namespace kiva
