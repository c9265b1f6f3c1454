#pragma once

// Single-channel feedforward active noise control: a reference sensor picks
// up the noise upstream, an adaptive FIR controller synthesises anti-noise
// that reaches the listener through a secondary (speaker) path, and the
// residual at the listener drives the weight update.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anckit/common.hpp"

namespace anckit::anc {

inline constexpr double kAttenuationCapDb = 120.0;
inline constexpr double kDefaultSampleRateHz = 8000.0;
inline constexpr double kDefaultWindowSeconds = 0.25;
inline constexpr std::size_t kDefaultFilterLength = 128;
inline constexpr std::size_t kBroadbandFilterOrder = 255;
inline constexpr double kNlmsRegularizer = 1e-8;
inline constexpr double kDivergencePowerRatio = 10.0;

class SampleBuffer {
 public:
  SampleBuffer() = default;

  SampleBuffer(std::vector<double> samples, double sample_rate_hz)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    require(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0, "sample_rate_hz",
            "must be finite and > 0");
    for (double s : samples_) require_finite(s, "samples");
  }

  std::span<const double> samples() const { return samples_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  friend bool operator==(const SampleBuffer&, const SampleBuffer&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_ = kDefaultSampleRateHz;
};

/// Impulse response of an acoustic path, taps[0] applying to the current sample.
class FirPath {
 public:
  explicit FirPath(std::vector<double> taps) : taps_(std::move(taps)) {
    require(!taps_.empty(), "taps", "path needs at least one tap");
    for (double t : taps_) require_finite(t, "taps");
  }

  static FirPath identity() { return FirPath({1.0}); }

  std::span<const double> taps() const { return taps_; }
  std::size_t size() const { return taps_.size(); }

  friend bool operator==(const FirPath&, const FirPath&) = default;

 private:
  std::vector<double> taps_;
};

/// Exponentially decaying, oscillating impulse response starting after
/// `delay` samples: gain * exp(-(k-delay)/decay) * cos(2*pi*cycles*(k-delay)).
/// `cycles` is in cycles per sample. A compact stand-in for a room response.
inline FirPath damped_path(std::size_t length, std::size_t delay, double decay_samples,
                           double cycles_per_sample, double gain) {
  require(length >= 1, "length", "must be >= 1");
  require(delay < length, "delay", "must be shorter than the path");
  require(std::isfinite(decay_samples) && decay_samples > 0.0, "decay", "must be > 0");
  require_finite(cycles_per_sample, "freq");
  require_finite(gain, "gain");
  std::vector<double> taps(length, 0.0);
  for (std::size_t k = delay; k < length; ++k) {
    const double m = static_cast<double>(k - delay);
    taps[k] = gain * std::exp(-m / decay_samples) *
              std::cos(2.0 * std::numbers::pi * cycles_per_sample * m);
  }
  return FirPath(std::move(taps));
}

// ---------------------------------------------------------------------------
// Signals

inline SampleBuffer generate_tone(double freq_hz, double amplitude, double phase_rad,
                                  std::size_t n, double fs) {
  require_finite(freq_hz, "freq_hz");
  require_finite(amplitude, "amplitude");
  require_finite(phase_rad, "phase_rad");
  require(std::isfinite(fs) && fs > 0.0, "sample_rate_hz", "must be finite and > 0");
  require(freq_hz > 0.0 && freq_hz < fs / 2.0, "freq_hz", "must lie in (0, fs/2)");

  std::vector<double> out(n);
  const double step = 2.0 * std::numbers::pi * freq_hz / fs;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = amplitude * std::sin(step * static_cast<double>(k) + phase_rad);
  }
  return SampleBuffer(std::move(out), fs);
}

/// Hamming-windowed sinc band-pass with `order + 1` taps and unity passband gain.
inline FirPath design_bandpass(double low_hz, double high_hz, double fs,
                               std::size_t order = kBroadbandFilterOrder) {
  require(std::isfinite(fs) && fs > 0.0, "sample_rate_hz", "must be finite and > 0");
  require(std::isfinite(low_hz) && low_hz > 0.0, "low_hz", "must be > 0");
  require(std::isfinite(high_hz) && high_hz > low_hz, "high_hz", "must exceed low_hz");
  require(high_hz < fs / 2.0, "high_hz", "must lie below fs/2");
  require(order >= 1, "order", "must be >= 1");

  const std::size_t n_taps = order + 1;
  const double center = static_cast<double>(order) / 2.0;
  const double f1 = low_hz / fs;
  const double f2 = high_hz / fs;
  auto lowpass = [](double fc, double m) {
    if (m == 0.0) return 2.0 * fc;
    return std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
  };
  std::vector<double> taps(n_taps);
  for (std::size_t k = 0; k < n_taps; ++k) {
    const double m = static_cast<double>(k) - center;
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(order));
    taps[k] = (lowpass(f2, m) - lowpass(f1, m)) * window;
  }
  return FirPath(std::move(taps));
}

namespace detail {

// Uniform on [-sqrt(3), sqrt(3)): zero mean, unit variance. Built from raw
// 64-bit draws so the sequence is identical across standard libraries.
class WhiteNoise {
 public:
  explicit WhiteNoise(std::uint64_t seed) : state_(seed) {}

  double next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * std::numbers::sqrt3;
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

/// Seeded white noise shaped by `design_bandpass`. The filter is run over a
/// warm-up prefix so every returned sample sees a full filter state, and the
/// sample mean is removed.
inline SampleBuffer generate_broadband(std::uint64_t seed, double low_hz, double high_hz,
                                       std::size_t n, double fs) {
  const FirPath band = design_bandpass(low_hz, high_hz, fs);
  const auto h = band.taps();
  const std::size_t warmup = h.size() - 1;

  detail::WhiteNoise rng(seed);
  std::vector<double> white(n + warmup);
  for (double& w : white) w = rng.next();

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = k + warmup;
    double acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) acc += h[j] * white[t - j];
    out[k] = acc;
  }
  if (n > 0) {
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(n);
    for (double& v : out) v -= mean;
  }
  return SampleBuffer(std::move(out), fs);
}

inline SampleBuffer invert_phase(const SampleBuffer& x) {
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v = -v;
  return SampleBuffer(std::move(out), x.sample_rate_hz());
}

/// Elementwise sum of two equally long, equally sampled buffers.
inline SampleBuffer mix(const SampleBuffer& a, const SampleBuffer& b) {
  require(a.size() == b.size(), "samples", "buffers differ in length");
  require(a.sample_rate_hz() == b.sample_rate_hz(), "sample_rate_hz",
          "buffers differ in sample rate");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return SampleBuffer(std::move(out), a.sample_rate_hz());
}

inline SampleBuffer scale(const SampleBuffer& x, double gain) {
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v *= gain;
  return SampleBuffer(std::move(out), x.sample_rate_hz());
}

/// Causal convolution truncated to the input length.
inline SampleBuffer convolve_path(const FirPath& path, const SampleBuffer& x) {
  const auto h = path.taps();
  const auto in = x.samples();
  std::vector<double> out(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    double acc = 0.0;
    const std::size_t span = std::min(h.size(), k + 1);
    for (std::size_t j = 0; j < span; ++j) acc += h[j] * in[k - j];
    out[k] = acc;
  }
  return SampleBuffer(std::move(out), x.sample_rate_hz());
}

// ---------------------------------------------------------------------------
// Levels

/// Root mean square, scaled by the peak so huge-but-finite residuals do not
/// overflow when squared.
inline double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : x) {
    const double r = v / peak;
    acc += r * r;
  }
  return peak * std::sqrt(acc / static_cast<double>(x.size()));
}

inline double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

/// 20*log10(rms(original)/rms(residual)), capped at +120 dB.
inline double attenuation_db(std::span<const double> original, std::span<const double> residual) {
  require(!original.empty(), "original", "must contain at least one sample");
  require(original.size() == residual.size(), "residual", "length differs from original");
  const double ro = rms(original);
  require(ro > 0.0, "original", "has zero power");
  const double rr = rms(residual);
  if (rr == 0.0) return kAttenuationCapDb;
  return std::min(kAttenuationCapDb, 20.0 * (std::log10(ro) - std::log10(rr)));
}

inline double attenuation_db(const SampleBuffer& original, const SampleBuffer& residual) {
  return attenuation_db(original.samples(), residual.samples());
}

// ---------------------------------------------------------------------------
// Controller

enum class Algorithm { Lms, Nlms, Fxlms };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Lms: return "LMS";
    case Algorithm::Nlms: return "NLMS";
    case Algorithm::Fxlms: return "FXLMS";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "LMS") return Algorithm::Lms;
  if (s == "NLMS") return Algorithm::Nlms;
  if (s == "FXLMS") return Algorithm::Fxlms;
  throw ValidationError("algorithm", "expected one of LMS, NLMS, FXLMS, got '" + std::string(s) + "'");
}

inline double default_step_size(Algorithm a) { return a == Algorithm::Nlms ? 0.1 : 1e-3; }

struct AncConfig {
  Algorithm algorithm = Algorithm::Fxlms;
  std::size_t filter_length = kDefaultFilterLength;
  double step_size = default_step_size(Algorithm::Fxlms);
  double leak_factor = 0.0;
  /// Plant model used to filter the reference. nullopt means EXACT: use the
  /// true secondary path.
  std::optional<FirPath> secondary_estimate;
  std::size_t duration_samples = 0;
  std::uint64_t rng_seed = 0;
  double window_seconds = kDefaultWindowSeconds;
};

inline void validate(const AncConfig& cfg) {
  require(cfg.filter_length >= 1, "filter_length", "must be >= 1");
  require(std::isfinite(cfg.step_size) && cfg.step_size >= 0.0, "step_size",
          "must be finite and non-negative");
  require(std::isfinite(cfg.leak_factor) && cfg.leak_factor >= 0.0 && cfg.leak_factor < 1.0,
          "leak_factor", "must lie in [0, 1)");
  require(cfg.duration_samples >= 1, "duration_samples", "must be >= 1");
  require(cfg.filter_length <= cfg.duration_samples, "filter_length",
          "must not exceed duration_samples");
  require(std::isfinite(cfg.window_seconds) && cfg.window_seconds > 0.0, "window_seconds",
          "must be > 0");
}

namespace detail {

// Fixed-length history, newest sample first, always readable as one
// contiguous span (each value is stored twice).
class DelayLine {
 public:
  explicit DelayLine(std::size_t n) : buf_(2 * n, 0.0), n_(n) {}

  void push(double v) {
    head_ = (head_ == 0 ? n_ : head_) - 1;
    buf_[head_] = v;
    buf_[head_ + n_] = v;
  }

  std::span<const double> view() const { return {buf_.data() + head_, n_}; }

 private:
  std::vector<double> buf_;
  std::size_t n_;
  std::size_t head_ = 0;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace detail

/// One sample of the closed loop.
struct LoopSample {
  double disturbance = 0.0;  // primary-path noise at the listener
  double anti_noise = 0.0;   // controller output, before the secondary path
  double residual = 0.0;     // what the listener hears
};

/// The noise-reduction loop, advanced one sample at a time.
///
/// Per sample n with reference x[n] (the noise itself):
///   d[n]  = (primary * x)[n]
///   y[n]  = w . x_hist
///   e[n]  = d[n] - (secondary * y)[n]
///   x'[n] = x[n] for LMS, (secondary_estimate * x)[n] otherwise
///   w    <- (1 - mu*leak) w + mu_n e[n] x'_hist
/// with mu_n = mu / (|x'_hist|^2 + 1e-8) for NLMS and mu otherwise.
class AncLoop {
 public:
  AncLoop(const AncConfig& cfg, FirPath primary, FirPath secondary)
      : algorithm_(cfg.algorithm),
        step_size_(cfg.step_size),
        leak_factor_(cfg.leak_factor),
        primary_(std::move(primary)),
        secondary_(std::move(secondary)),
        estimate_(cfg.secondary_estimate.value_or(secondary_)),
        weights_(cfg.filter_length, 0.0),
        noise_hist_(std::max(cfg.filter_length, primary_.size())),
        est_hist_(estimate_.size()),
        filtered_hist_(cfg.filter_length),
        output_hist_(secondary_.size()) {
    require(cfg.filter_length >= 1, "filter_length", "must be >= 1");
    require(std::isfinite(cfg.step_size) && cfg.step_size >= 0.0, "step_size",
            "must be finite and non-negative");
    require(std::isfinite(cfg.leak_factor) && cfg.leak_factor >= 0.0 && cfg.leak_factor < 1.0,
            "leak_factor", "must lie in [0, 1)");
  }

  LoopSample step(double reference) {
    const std::size_t L = weights_.size();
    noise_hist_.push(reference);
    const auto x_all = noise_hist_.view();

    LoopSample s;
    s.disturbance = detail::dot(primary_.taps(), x_all.first(primary_.size()));

    const auto x = x_all.first(L);
    s.anti_noise = detail::dot(weights_, x);
    output_hist_.push(s.anti_noise);
    s.residual = s.disturbance - detail::dot(secondary_.taps(), output_hist_.view());

    std::span<const double> xf = x;
    if (algorithm_ != Algorithm::Lms) {
      est_hist_.push(reference);
      filtered_hist_.push(detail::dot(estimate_.taps(), est_hist_.view()));
      xf = filtered_hist_.view();
    }

    double mu = step_size_;
    if (algorithm_ == Algorithm::Nlms) mu /= detail::dot(xf, xf) + kNlmsRegularizer;
    const double g = mu * s.residual;
    const double keep = 1.0 - step_size_ * leak_factor_;
    for (std::size_t i = 0; i < L; ++i) weights_[i] = keep * weights_[i] + g * xf[i];
    return s;
  }

  std::span<const double> weights() const { return weights_; }

 private:
  Algorithm algorithm_;
  double step_size_;
  double leak_factor_;
  FirPath primary_;
  FirPath secondary_;
  FirPath estimate_;
  std::vector<double> weights_;
  detail::DelayLine noise_hist_;
  detail::DelayLine est_hist_;
  detail::DelayLine filtered_hist_;
  detail::DelayLine output_hist_;
};

struct AncResult {
  SampleBuffer disturbance;
  SampleBuffer residual;
  SampleBuffer anti_noise;
  std::vector<double> attenuation_trace_db;  // one value per full window
  double steady_state_attenuation_db = 0.0;  // final window
  bool diverged = false;
  std::size_t window_samples = 0;
  std::vector<double> final_weights;
};

/// Runs the loop over `noise`. Divergence (non-finite output, or a window
/// whose residual power exceeds 10x its disturbance power) stops the run;
/// traces are truncated so that every returned sample is finite.
inline AncResult anc_run(const AncConfig& cfg, const SampleBuffer& noise, const FirPath& primary,
                         const FirPath& secondary) {
  validate(cfg);
  require(noise.size() == cfg.duration_samples, "duration_samples",
          "noise length " + std::to_string(noise.size()) + " differs from duration_samples " +
              std::to_string(cfg.duration_samples));

  const double fs = noise.sample_rate_hz();
  const std::size_t n = noise.size();
  const auto window = std::max<std::size_t>(
      1, std::min(n, static_cast<std::size_t>(std::llround(cfg.window_seconds * fs))));

  AncLoop loop(cfg, primary, secondary);
  std::vector<double> d, e, y;
  d.reserve(n);
  e.reserve(n);
  y.reserve(n);

  // Trailing-window energies, updated per sample and recomputed exactly at
  // each window boundary so rounding drift cannot accumulate.
  double sum_d = 0.0, sum_e = 0.0;
  bool diverged = false;
  for (std::size_t k = 0; k < n; ++k) {
    const LoopSample s = loop.step(noise[k]);
    if (!std::isfinite(s.disturbance) || !std::isfinite(s.anti_noise) ||
        !std::isfinite(s.residual)) {
      diverged = true;
      break;
    }
    d.push_back(s.disturbance);
    y.push_back(s.anti_noise);
    e.push_back(s.residual);
    sum_d += s.disturbance * s.disturbance;
    sum_e += s.residual * s.residual;
    if (k >= window) {
      sum_d -= d[k - window] * d[k - window];
      sum_e -= e[k - window] * e[k - window];
    }
    if ((k + 1) % window == 0) {
      const auto start = d.size() - window;
      sum_d = mean_power(std::span<const double>(d).subspan(start)) * static_cast<double>(window);
      sum_e = mean_power(std::span<const double>(e).subspan(start)) * static_cast<double>(window);
    }
    if (!std::isfinite(sum_e) || sum_e > kDivergencePowerRatio * std::max(sum_d, 0.0)) {
      if (sum_e > 0.0 || !std::isfinite(sum_e)) {
        diverged = true;
        break;
      }
    }
  }

  AncResult r;
  r.diverged = diverged;
  r.window_samples = window;
  r.final_weights.assign(loop.weights().begin(), loop.weights().end());

  auto window_db = [](std::span<const double> dw, std::span<const double> ew) {
    if (rms(dw) == 0.0) return 0.0;
    return attenuation_db(dw, ew);
  };
  const std::span<const double> ds(d), es(e);
  for (std::size_t start = 0; start + window <= ds.size(); start += window) {
    r.attenuation_trace_db.push_back(
        window_db(ds.subspan(start, window), es.subspan(start, window)));
  }
  if (!r.attenuation_trace_db.empty()) {
    r.steady_state_attenuation_db = r.attenuation_trace_db.back();
  } else if (!ds.empty()) {
    r.steady_state_attenuation_db = window_db(ds, es);
  }

  if (!std::all_of(r.final_weights.begin(), r.final_weights.end(),
                   [](double w) { return std::isfinite(w); })) {
    r.final_weights.clear();
  }
  r.disturbance = SampleBuffer(std::move(d), fs);
  r.residual = SampleBuffer(std::move(e), fs);
  r.anti_noise = SampleBuffer(std::move(y), fs);
  return r;
}

}  // namespace anckit::anc
