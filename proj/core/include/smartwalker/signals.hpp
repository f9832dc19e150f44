#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace walker {

/// A value observed at an absolute trial time (seconds from trial start).
template <typename V>
struct Timestamped {
  double t = 0.0;
  V value{};
};

struct SampleRate {
  double hz = 50.0;

  double dt() const { return 1.0 / hz; }
};

/// Uniformly sampled scalar series.
struct Series {
  SampleRate rate{};
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Number of ticks covering [0, duration) at the given rate.
std::size_t tick_count(SampleRate rate, double duration_s);

/// Causal moving average with ramp-in: sample i is the mean of the last
/// min(i + 1, window) input samples. Output length and rate equal the input's.
Series moving_average(const Series& s, std::size_t window);

/// Zero-order-hold resampling of asynchronous events onto a fixed-rate grid.
/// Each tick carries the most recent event value at or before the tick time;
/// ticks before the first event carry the first event's value.
Series resample_zoh(std::span<const Timestamped<double>> events, SampleRate rate,
                    double duration_s);

/// Streaming counterpart of moving_average for online consumers.
class RollingMean {
 public:
  explicit RollingMean(std::size_t window);

  /// Pushes one sample and returns the causal ramp-in mean.
  double push(double x);
  double mean() const;
  std::size_t count() const { return count_; }
  void reset();

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  double sum_ = 0.0;
};

}  // namespace walker
