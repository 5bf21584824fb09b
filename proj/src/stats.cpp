#include "advsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advsim {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Histogram::Histogram(double lo, double hi, int bins) : lo_(lo) {
  if (bins < 1) throw std::domain_error("histogram: bins must be >= 1");
  if (!(hi > lo)) throw std::domain_error("histogram: hi must exceed lo");
  width_ = (hi - lo) / bins;
  counts_.assign(static_cast<std::size_t>(bins), 0);
}

void Histogram::add(double x) {
  int idx = static_cast<int>(std::floor((x - lo_) / width_));
  idx = std::clamp(idx, 0, bins() - 1);
  ++counts_[static_cast<std::size_t>(idx)];
  ++total_;
}

std::vector<double> Histogram::normalized() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (total_ == 0) return out;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    out[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
  return out;
}

std::vector<TrackStatus> lifecycle_oracle(const std::vector<bool>& hit_miss_sequence,
                                          int hits_to_confirm, int misses_to_delete) {
  if (hits_to_confirm < 1 || misses_to_delete < 1)
    throw std::domain_error("lifecycle_oracle: H and R must be >= 1");

  std::vector<TrackStatus> out;
  out.reserve(hit_miss_sequence.size());
  TrackStatus status = TrackStatus::empty;
  int hits = 0, misses = 0;
  for (bool hit : hit_miss_sequence) {
    if (hit) {
      if (status == TrackStatus::empty) status = TrackStatus::tentative;
      ++hits;
      misses = 0;
      if (status == TrackStatus::tentative && hits >= hits_to_confirm)
        status = TrackStatus::confirmed;
    } else if (status != TrackStatus::empty) {
      ++misses;
      hits = 0;
      if (misses >= misses_to_delete) {
        status = TrackStatus::empty;
        misses = 0;
      }
    }
    out.push_back(status);
  }
  return out;
}

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double fisher_exact_two_sided(int violations_a, int trials_a, int violations_b, int trials_b) {
  if (trials_a < 1 || trials_b < 1)
    throw std::domain_error("fisher_exact: trials must be >= 1");
  const int k = violations_a + violations_b;
  const int n = trials_a + trials_b;
  const double denom = log_choose(n, k);
  const auto table_log_p = [&](int a) {
    return log_choose(trials_a, a) + log_choose(trials_b, k - a) - denom;
  };
  const double observed = table_log_p(violations_a);
  double p = 0.0;
  const int lo = std::max(0, k - trials_b);
  const int hi = std::min(k, trials_a);
  for (int a = lo; a <= hi; ++a) {
    const double lp = table_log_p(a);
    if (lp <= observed + 1e-12) p += std::exp(lp);
  }
  return std::min(p, 1.0);
}

}  // namespace advsim
