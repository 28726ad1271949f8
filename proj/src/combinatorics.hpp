#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sosmin/errors.hpp"
#include "sosmin/polytope.hpp"

namespace sosmin {

/// Visits every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Packs bounded local points into one integer key.
class PointCodec {
 public:
  PointCodec(std::vector<std::int64_t> lo, const std::vector<std::int64_t>& hi) : lo_(std::move(lo)) {
    unsigned __int128 total = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      radix_.push_back(static_cast<std::uint64_t>(hi[i] - lo_[i] + 1));
      total *= radix_.back();
      if (total > (static_cast<unsigned __int128>(1) << 62))
        throw Error(ErrorKind::Validation, "polytope too large for sum-set enumeration");
    }
  }

  [[nodiscard]] std::uint64_t encode(std::span<const std::int64_t> y) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < y.size(); ++i) key = key * radix_[i] + static_cast<std::uint64_t>(y[i] - lo_[i]);
    return key;
  }

  [[nodiscard]] std::vector<std::int64_t> decode(std::uint64_t key) const {
    std::vector<std::int64_t> y(radix_.size());
    for (std::size_t i = radix_.size(); i-- > 0;) {
      y[i] = static_cast<std::int64_t>(key % radix_[i]) + lo_[i];
      key /= radix_[i];
    }
    return y;
  }

 private:
  std::vector<std::int64_t> lo_;
  std::vector<std::uint64_t> radix_;
};


/// h*_j = sum_i (-1)^i C(m+1, i) L(j - i) from the counts L(0..m).
HStar h_star_from_counts(const std::vector<Integer>& counts);

}  // namespace sosmin
