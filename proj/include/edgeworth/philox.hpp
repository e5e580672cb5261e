#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace edgeworth {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type block(counter_type c, key_type k)
    {
        for (int r = 0; r < 10; ++r) {
            c = round(c, k);
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        return c;
    }

private:
    static counter_type round(const counter_type& c, const key_type& k)
    {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Independent substream `stream` under `seed`; draws are a pure function of (seed, stream, index).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
    {
    }

    std::uint32_t next_u32()
    {
        if (pos_ == 4) {
            buf_ = Philox4x32::block(ctr_, key_);
            if (++ctr_[0] == 0)
                ++ctr_[1];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform()
    {
        const std::uint64_t hi = next_u32(), lo = next_u32();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

private:
    Philox4x32::key_type key_;
    Philox4x32::counter_type ctr_;
    Philox4x32::counter_type buf_{};
    int pos_ = 4;
};

} // namespace edgeworth
