#pragma once

// Counter-based pseudo-random stream.
//
// Every draw is a pure function of (seed, stream id, counter), so two streams
// with the same (seed, id) produce identical sequences no matter how other
// streams are consumed or on which thread they run. The output function is
// the SplitMix64 finalizer applied to a Weyl sequence offset by a per-stream
// key; keyed access (`unit_at`) lets loss generators stay oblivious to how
// many rounds a consumer has already pulled.

#include <cstdint>

namespace icb {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer (Stafford mix13 variant).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed),
          stream_(stream_id),
          key_(detail::mix64(detail::mix64(seed) + detail::kGolden * detail::mix64(stream_id + 1))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64() { return u64_at(counter_++); }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return unit_at(counter_++); }

    // Keyed access: draw #index independent of the stream position.
    std::uint64_t u64_at(std::uint64_t index) const {
        return detail::mix64(key_ + detail::kGolden * (index + 1));
    }
    double unit_at(std::uint64_t index) const {
        return static_cast<double>(u64_at(index) >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

    // Derived stream; disjoint from this one for any child id.
    RngStream substream(std::uint64_t child_id) const {
        return RngStream(key_, detail::mix64(child_id + 0x5117ull));
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace icb
