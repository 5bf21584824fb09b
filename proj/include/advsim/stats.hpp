#pragma once

#include <cstdint>
#include <vector>

#include "advsim/tracking.hpp"

namespace advsim {

/// Standard normal CDF, accurate to better than 1e-7 everywhere.
double normal_cdf(double x);

/// Fixed-width histogram over [lo, hi]; out-of-range samples clamp to the
/// edge bins so bin sums always equal the sample count.
class Histogram {
public:
  Histogram(double lo, double hi, int bins);

  void add(double x);
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  double bin_lo(int i) const { return lo_ + i * width_; }
  double bin_hi(int i) const { return lo_ + (i + 1) * width_; }
  int bins() const { return static_cast<int>(counts_.size()); }
  std::vector<double> normalized() const;

private:
  double lo_;
  double width_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Reference automaton for the (H, R) track lifecycle: status after each
/// hit(true)/miss(false) event. Used to cross-check the tracker.
std::vector<TrackStatus> lifecycle_oracle(const std::vector<bool>& hit_miss_sequence,
                                          int hits_to_confirm, int misses_to_delete);

/// Two-sided Fisher exact test on a 2x2 table (violations vs trials); offered
/// as an alternative to the pooled z-test.
double fisher_exact_two_sided(int violations_a, int trials_a, int violations_b, int trials_b);

}  // namespace advsim
