/*
 * Copyright 2026 The cylindric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylindric {

inline constexpr const char* kVersion = "0.1.0";

/// Thrown when a caller violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a construction or search would exceed a configured cap.
class ResourceLimit : public std::runtime_error {
  public:
    ResourceLimit(const std::string& cap, std::size_t limit)
        : std::runtime_error("resource limit exceeded: " + cap + " (cap " + std::to_string(limit) + ")"),
          cap_(cap), limit_(limit) {}

    const std::string& cap() const noexcept { return cap_; }
    std::size_t limit() const noexcept { return limit_; }

  private:
    std::string cap_;
    std::size_t limit_;
};

using Atom = std::uint32_t;

/**
 * Fixed-width bitset whose width is chosen at runtime. Elements of finite
 * Boolean algebras are stored as sets of atoms in this form.
 */
class AtomSet {
  public:
    AtomSet() = default;
    explicit AtomSet(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

    static AtomSet full(std::size_t width) {
        AtomSet s(width);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    static AtomSet singleton(std::size_t width, std::size_t bit) {
        AtomSet s(width);
        s.set(bit);
        return s;
    }

    std::size_t width() const noexcept { return width_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    bool none() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }
    bool any() const { return !none(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Index of the lowest set bit, or width() when empty.
    std::size_t first() const { return next(0); }

    /// Index of the lowest set bit >= from, or width() when none.
    std::size_t next(std::size_t from) const {
        if (from >= width_) return width_;
        std::size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w != 0) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++wi >= words_.size()) return width_;
            w = words_[wi];
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                f((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<Atom> members() const {
        std::vector<Atom> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<Atom>(i)); });
        return out;
    }

    AtomSet& operator|=(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    AtomSet& operator&=(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    AtomSet& subtract(const AtomSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    AtomSet complement() const {
        AtomSet r(width_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }

    bool subset_of(const AtomSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const AtomSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    friend bool operator==(const AtomSet&, const AtomSet&) = default;
    friend bool operator<(const AtomSet& a, const AtomSet& b) {
        if (a.width_ != b.width_) return a.width_ < b.width_;
        return a.words_ < b.words_;
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    std::size_t hash() const noexcept {
        std::size_t h = width_;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    /// Bits as "0101..." in atom order; used for readable witnesses.
    std::string to_string() const {
        std::string s(width_, '0');
        for_each([&](std::size_t i) { s[i] = '1'; });
        return s;
    }

  private:
    void trim() {
        if (width_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (width_ % 64)) - 1;
    }

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

struct AtomSetHash {
    std::size_t operator()(const AtomSet& s) const noexcept { return s.hash(); }
};

/// FNV-1a, used where output must be stable across runs and platforms.
inline std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

/// All set partitions of {0..n-1} as restricted growth strings, in lexicographic order.
inline std::vector<std::vector<std::uint8_t>> kernel_partitions(std::size_t n) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> cur(n, 0);
    if (n == 0) return {{}};
    cur[0] = 0;
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int maxc) {
        if (pos == n) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= maxc + 1; ++c) {
            cur[pos] = static_cast<std::uint8_t>(c);
            rec(pos + 1, std::max(maxc, c));
        }
    };
    rec(1, 0);
    return out;
}

}  // namespace cylindric
