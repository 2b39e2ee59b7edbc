// Copyright 2026 The MCCD Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace mccd {

enum class ErrorCode : int32_t {
    ok = 0,
    invalid_argument = 1,
    io = 2,
    format = 3,
    mismatch = 4,
    unsupported = 5,
    too_large = 6,
    internal = 7,
};

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string &msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string &msg) {
    throw Error(c, msg);
}

inline void require(bool cond, ErrorCode c, const std::string &msg) {
    if (!cond) fail(c, msg);
}

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic xoshiro256++ generator. All randomness in the project goes
/// through this class so that results are bit-reproducible across platforms
/// (std:: distributions are implementation-defined and never used).
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto &w : s_) {
            x = splitmix64(x);
            w = x;
        }
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) via 128-bit multiply-shift.
    uint64_t next_index(uint64_t n) {
        return uint64_t((__uint128_t(next_u64()) * n) >> 64);
    }

    bool next_bool() { return next_u64() >> 63; }

  private:
    uint64_t s_[4];
};

/// Stream-splitting rule: the stream for (master seed, purpose tag, index) is
/// seeded with splitmix64(splitmix64(master ^ splitmix64(tag)) + index).
inline uint64_t derive_seed(uint64_t master, uint64_t tag, uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(tag)) + index);
}

namespace stream_tag {
constexpr uint64_t shot = 0x73686F74ULL;        // noisy shot sampling
constexpr uint64_t circuit = 0x63697263ULL;     // random circuit sampling
constexpr uint64_t model_init = 0x696E6974ULL;  // parameter initialization
constexpr uint64_t meas_tape = 0x74617065ULL;   // tableau random-measurement tape
constexpr uint64_t eval = 0x6576616CULL;        // evaluation shots
}  // namespace stream_tag

/// Packed bit vector over 64-bit words.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    void resize(size_t n) {
        n_ = n;
        w_.assign((n + 63) / 64, 0);
    }
    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    BitVec &operator^=(const BitVec &o) {
        for (size_t k = 0; k < w_.size(); k++) w_[k] ^= o.w_[k];
        return *this;
    }
    bool operator==(const BitVec &o) const { return n_ == o.n_ && w_ == o.w_; }
    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }
    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : w_) c += size_t(__builtin_popcountll(w));
        return c;
    }
    /// Parity of the AND with another vector of equal length.
    bool parity_and(const BitVec &o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < w_.size(); k++) acc ^= w_[k] & o.w_[k];
        return __builtin_parityll(acc);
    }
    const std::vector<uint64_t> &words() const { return w_; }
    std::vector<uint64_t> &words() { return w_; }

    std::vector<size_t> ones() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < n_; i++)
            if (get(i)) out.push_back(i);
        return out;
    }

  private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace mccd
