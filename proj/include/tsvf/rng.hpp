#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace tsvf {

// Counter-based random stream: Philox4x32-10 (Salmon et al. 2011) keyed per
// stream. The key is derived from (master seed, stream id) with SplitMix64,
// every trial owns stream id == its trial index, and blocks advance a local
// 64-bit counter. Draws therefore depend only on (seed, stream, draw index),
// never on execution order, which is what makes parallel Monte Carlo runs
// bit-identical to serial ones.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id) {
        const std::uint64_t k = splitmix64(splitmix64(master_seed) ^ stream_id);
        key_[0] = static_cast<std::uint32_t>(k);
        key_[1] = static_cast<std::uint32_t>(k >> 32);
    }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        if (block_pos_ >= 4) refill();
        const std::uint32_t lo = block_[block_pos_++];
        if (block_pos_ >= 4) refill();
        const std::uint32_t hi = block_[block_pos_++];
        return (static_cast<std::uint64_t>(hi) << 32) | lo;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // in (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

  private:
    void refill() {
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block_index_),
            static_cast<std::uint32_t>(block_index_ >> 32),
            static_cast<std::uint32_t>(stream_id_),
            static_cast<std::uint32_t>(stream_id_ >> 32),
        };
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            const std::array<std::uint32_t, 4> next = {
                static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(p0),
            };
            ctr = next;
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        block_ = ctr;
        block_pos_ = 0;
        ++block_index_;
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4; // force refill on first draw
    std::uint64_t block_index_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace tsvf
