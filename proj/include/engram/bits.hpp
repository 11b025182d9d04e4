#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "engram/errors.hpp"

namespace engram {

/// Fixed-width bit vector backing the short-term-memory bus.
///
/// Bit 0 is the least significant bit of field 0. Unused bits in the last
/// block are kept zero so whole-vector comparison works.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t width)
        : width_(width), blocks_((width + 63) / 64, 0) {}

    std::size_t size() const { return width_; }

    bool test(std::size_t i) const {
        assert(i < width_);
        return (blocks_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v = true) {
        assert(i < width_);
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            blocks_[i >> 6] |= mask;
        else
            blocks_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) {
        assert(i < width_);
        blocks_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    bool any() const {
        for (auto b : blocks_)
            if (b) return true;
        return false;
    }

    bool none() const { return !any(); }

    void clear() {
        for (auto& b : blocks_) b = 0;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.width_ == b.width_ && a.blocks_ == b.blocks_;
    }

    /// b is a subset of a.
    friend bool contains_all(const BitVec& a, const BitVec& b) {
        assert(a.width_ == b.width_);
        for (std::size_t i = 0; i < a.blocks_.size(); ++i)
            if (b.blocks_[i] & ~a.blocks_[i]) return false;
        return true;
    }

    /// a and b agree on every bit selected by mask.
    friend bool masked_equal(const BitVec& a, const BitVec& b, const BitVec& mask) {
        assert(a.width_ == b.width_ && a.width_ == mask.width_);
        for (std::size_t i = 0; i < a.blocks_.size(); ++i)
            if ((a.blocks_[i] ^ b.blocks_[i]) & mask.blocks_[i]) return false;
        return true;
    }

    std::uint64_t to_ullong() const {
        assert(width_ <= 64);
        return blocks_.empty() ? 0 : blocks_[0];
    }

    static BitVec from_ullong(std::uint64_t value, std::size_t width) {
        assert(width <= 64);
        BitVec v(width);
        if (!v.blocks_.empty()) {
            if (width < 64) value &= (std::uint64_t{1} << width) - 1;
            v.blocks_[0] = value;
        }
        return v;
    }

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> blocks_;
};

} // namespace engram
