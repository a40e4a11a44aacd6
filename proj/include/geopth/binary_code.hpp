#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "geopth/errors.hpp"

namespace geopth {

/// Fixed-length bit string packed into 64-bit words for XOR+popcount.
///
/// Bit positions are counted from the left: position 0 is the most
/// significant bit of the code (the first bit of the first sub-hash block).
/// Position q lives in word q/64 at word bit 63 - q%64, so trailing padding
/// bits of the last word sit below the valid bits and are kept at zero.
class BinaryCode {
public:
    BinaryCode() = default;

    explicit BinaryCode(std::uint32_t length)
        : length_(length), words_((length + 63) / 64, 0ULL) {}

    std::uint32_t length() const { return length_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool bit(std::uint32_t q) const {
        check_pos(q);
        return (words_[q >> 6] >> (63 - (q & 63))) & 1ULL;
    }

    void set_bit(std::uint32_t q, bool value = true) {
        check_pos(q);
        const std::uint64_t mask = 1ULL << (63 - (q & 63));
        if (value) {
            words_[q >> 6] |= mask;
        } else {
            words_[q >> 6] &= ~mask;
        }
    }

    /// Writes `width` bits of `value` (big-endian, MSB first) starting at
    /// bit position `offset`.
    void set_block(std::uint32_t offset, std::uint32_t width, std::uint64_t value) {
        for (std::uint32_t i = 0; i < width; ++i) {
            set_bit(offset + i, (value >> (width - 1 - i)) & 1ULL);
        }
    }

    /// Hex rendering, most significant nibble first. Bit positions past the
    /// code length read as zero, so lengths that are not a multiple of four
    /// pad the final nibble at its low end.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        const std::uint32_t nibbles = (length_ + 3) / 4;
        std::string out;
        out.reserve(nibbles);
        for (std::uint32_t n = 0; n < nibbles; ++n) {
            const std::uint32_t shift = 60 - 4 * (n & 15);
            out.push_back(digits[(words_[n >> 4] >> shift) & 0xF]);
        }
        return out;
    }

    bool operator==(const BinaryCode& other) const {
        return length_ == other.length_ && words_ == other.words_;
    }
    bool operator!=(const BinaryCode& other) const { return !(*this == other); }

private:
    void check_pos(std::uint32_t q) const {
        if (q >= length_) {
            throw InputError("bit position " + std::to_string(q) + " out of range for code length " +
                             std::to_string(length_));
        }
    }

    std::uint32_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing bits. Throws InputError on length mismatch.
inline std::uint32_t hamming_distance(const BinaryCode& a, const BinaryCode& b) {
    if (a.length() != b.length()) {
        throw InputError("hamming_distance: code length mismatch (" + std::to_string(a.length()) +
                         " vs " + std::to_string(b.length()) + ")");
    }
    std::uint32_t dist = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        dist += static_cast<std::uint32_t>(std::popcount(wa[i] ^ wb[i]));
    }
    return dist;
}

/// Fraction of matching bits, in [0, 1]. Computed as 1 - d/L, which is the
/// form downstream identities rely on bit-for-bit.
inline double hamming_similarity(const BinaryCode& a, const BinaryCode& b) {
    const std::uint32_t d = hamming_distance(a, b);
    return 1.0 - static_cast<double>(d) / static_cast<double>(a.length());
}

}  // namespace geopth
