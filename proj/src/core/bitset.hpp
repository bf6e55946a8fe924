#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace spi {

// Subset of a fixed ground set, packed into 64-bit words.  Element indices
// are 0-based; all binary operations require equal ground sizes.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), w_(words(n), 0) {}

  // Low 64 bits given directly; requires n <= 64.
  static Bitset from_mask(int n, std::uint64_t mask) {
    require(n <= 64, Errc::subset_too_large, "mask constructor needs n <= 64");
    Bitset s(n);
    if (n > 0) s.w_[0] = (n == 64) ? mask : (mask & ((std::uint64_t{1} << n) - 1));
    return s;
  }

  static Bitset full(int n) {
    Bitset s(n);
    for (int i = 0; i < n; ++i) s.set(i);
    return s;
  }

  int size() const { return n_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(int i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  int count() const {
    int c = 0;
    for (auto w : w_) c += __builtin_popcountll(w);
    return c;
  }
  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  bool subset_of(const Bitset& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  Bitset& operator|=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Bitset& operator-=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

  Bitset with(int i) const {
    Bitset s = *this;
    s.set(i);
    return s;
  }
  Bitset without(int i) const {
    Bitset s = *this;
    s.reset(i);
    return s;
  }

  bool operator==(const Bitset& o) const = default;

  std::vector<int> to_vector() const {
    std::vector<int> v;
    v.reserve(count());
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t w = w_[k];
      while (w) {
        int b = __builtin_ctzll(w);
        f(static_cast<int>(k * 64 + b));
        w &= w - 1;
      }
    }
  }

  // First word; meaningful only when n <= 64.
  std::uint64_t low_mask() const { return w_.empty() ? 0 : w_[0]; }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](int i) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    });
    return s + "}";
  }

  struct Hash {
    size_t operator()(const Bitset& s) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (std::uint64_t)s.n_;
      for (auto w : s.w_) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return static_cast<size_t>(h);
    }
  };

 private:
  static size_t words(int n) { return static_cast<size_t>((n + 63) / 64); }
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace spi
