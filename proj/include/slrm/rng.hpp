#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace slrm {

// splitmix64, used for seeding and for combining seed components.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t p : parts) {
        state ^= splitmix64(state) + p;
        state = splitmix64(state);
    }
    return splitmix64(state);
}

inline std::uint64_t hash_str(std::uint64_t seed, std::string_view s) {
    std::uint64_t state = seed ^ 0xd6e8feb86659fd93ULL;
    for (char c : s) {
        state ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        state = splitmix64(state);
    }
    return splitmix64(state);
}

// xoshiro256++; self-contained so that draws are identical across platforms
// and standard-library versions (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1) with 53 bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // index into a probability vector; fp slack goes to the last positive entry
    int sample(const std::vector<double>& probs) {
        double u = next_double();
        double acc = 0.0;
        int last_positive = -1;
        for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
            if (probs[i] <= 0.0) continue;
            last_positive = i;
            acc += probs[i];
            if (u < acc) return i;
        }
        return last_positive;
    }

    Rng fork(std::uint64_t salt) { return Rng(hash_mix({next_u64(), salt})); }

private:
    std::uint64_t s_[4];
};

}  // namespace slrm
