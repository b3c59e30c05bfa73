// SPDX-License-Identifier: Apache-2.0
#include "srploc/srp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <tuple>
#include <utility>

#include "srploc/error.hpp"

namespace srploc {

namespace {

std::string_view axis_name(PoolAxis a) {
  switch (a) {
    case PoolAxis::kPairs: return "pairs";
    case PoolAxis::kFrequency: return "freq";
    case PoolAxis::kTime: return "time";
  }
  return "?";
}

std::string_view reducer_name(Reducer r) { return r == Reducer::kSum ? "sum" : "max"; }

Reducer parse_reducer(std::string_view s) {
  if (s == "sum") return Reducer::kSum;
  if (s == "max") return Reducer::kMax;
  throw ArgumentError("unknown pooling reducer '" + std::string(s) + "' (expected sum or max)");
}

PoolAxis parse_axis(std::string_view s) {
  if (s == "pairs" || s == "pair") return PoolAxis::kPairs;
  if (s == "freq" || s == "frequency") return PoolAxis::kFrequency;
  if (s == "time") return PoolAxis::kTime;
  throw ArgumentError("unknown pooling axis '" + std::string(s) +
                      "' (expected pairs, freq or time)");
}

void combine(double* dst, const double* src, std::size_t n, Reducer r) {
  if (r == Reducer::kSum) {
    for (std::size_t g = 0; g < n; ++g) dst[g] += src[g];
  } else {
    for (std::size_t g = 0; g < n; ++g) dst[g] = std::max(dst[g], src[g]);
  }
}

// Reduces one axis of a row-major 4-D tensor in place of a copy.
std::vector<double> reduce_axis(const std::vector<double>& data, std::array<std::size_t, 4>& dims,
                                std::size_t axis, Reducer r) {
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= dims[d];
  for (std::size_t d = axis + 1; d < 4; ++d) inner *= dims[d];
  const std::size_t n = dims[axis];
  std::vector<double> out(outer * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    double* dst = out.data() + o * inner;
    const double* base = data.data() + o * n * inner;
    std::copy(base, base + inner, dst);
    for (std::size_t a = 1; a < n; ++a) combine(dst, base + a * inner, inner, r);
  }
  dims[axis] = 1;
  return out;
}

}  // namespace

Reducer PoolingSpec::reducer(PoolAxis axis) const {
  switch (axis) {
    case PoolAxis::kPairs: return over_pairs;
    case PoolAxis::kFrequency: return over_freq;
    case PoolAxis::kTime: return over_time;
  }
  return over_pairs;
}

void PoolingSpec::validate() const {
  std::array<bool, 3> seen{};
  for (PoolAxis a : order) {
    const auto k = static_cast<std::size_t>(a);
    if (k > 2 || seen[k]) throw ArgumentError("pooling order must be a permutation of pairs, freq, time");
    seen[k] = true;
  }
}

PoolingSpec PoolingSpec::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::stringstream ss{std::string(text)};
  for (std::string tok; std::getline(ss, tok, ',');) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }),
              tok.end());
    tokens.push_back(tok);
  }
  if (tokens.size() != 3) {
    throw ArgumentError("pooling spec '" + std::string(text) + "' must have three comma-separated entries");
  }
  PoolingSpec spec;
  const bool explicit_order = tokens[0].find(':') != std::string::npos;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string& tok = tokens[k];
    const auto colon = tok.find(':');
    if ((colon != std::string::npos) != explicit_order) {
      throw ArgumentError("pooling spec '" + std::string(text) +
                          "' mixes axis:reducer and bare reducer entries");
    }
    PoolAxis axis = spec.order[k];
    Reducer r;
    if (explicit_order) {
      axis = parse_axis(std::string_view(tok).substr(0, colon));
      r = parse_reducer(std::string_view(tok).substr(colon + 1));
    } else {
      r = parse_reducer(tok);
    }
    spec.order[k] = axis;
    switch (axis) {
      case PoolAxis::kPairs: spec.over_pairs = r; break;
      case PoolAxis::kFrequency: spec.over_freq = r; break;
      case PoolAxis::kTime: spec.over_time = r; break;
    }
  }
  spec.validate();
  return spec;
}

std::string PoolingSpec::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k) s += ',';
    s += axis_name(order[k]);
    s += ':';
    s += reducer_name(reducer(order[k]));
  }
  return s;
}

AngularSpectrum pool(std::span<const GridSpectra> per_pair, const PoolingSpec& spec) {
  spec.validate();
  if (per_pair.empty()) throw ArgumentError("pool needs at least one pair");
  const GridSpectra& first = per_pair.front();
  for (std::size_t n = 0; n < per_pair.size(); ++n) {
    const GridSpectra& p = per_pair[n];
    if (p.frames != first.frames || p.bins != first.bins || p.points != first.points ||
        p.values.size() != first.frames * first.bins * first.points) {
      throw ArgumentError("pair " + std::to_string(n) + " has dimensions " +
                          std::to_string(p.frames) + "x" + std::to_string(p.bins) + "x" +
                          std::to_string(p.points) + ", expected " + std::to_string(first.frames) +
                          "x" + std::to_string(first.bins) + "x" + std::to_string(first.points));
    }
  }
  // [pair][frame][bin][point]
  std::array<std::size_t, 4> dims{per_pair.size(), first.frames, first.bins, first.points};
  std::vector<double> data;
  data.reserve(dims[0] * dims[1] * dims[2] * dims[3]);
  for (const GridSpectra& p : per_pair) data.insert(data.end(), p.values.begin(), p.values.end());

  for (PoolAxis a : spec.order) {
    const std::size_t axis = a == PoolAxis::kPairs ? 0 : a == PoolAxis::kTime ? 1 : 2;
    data = reduce_axis(data, dims, axis, spec.reducer(a));
  }
  return AngularSpectrum{std::move(data)};
}

double great_circle_deg(const Vec3& a, const Vec3& b) { return angle_between_deg(a, b); }

std::vector<Peak> find_peaks(const AngularSpectrum& spectrum, const DoaGrid& grid,
                             const PeakSpec& spec) {
  if (spectrum.values.empty()) throw ArgumentError("cannot search an empty angular spectrum");
  if (spectrum.size() != grid.size()) {
    throw ArgumentError("angular spectrum has " + std::to_string(spectrum.size()) +
                        " values but the grid has " + std::to_string(grid.size()) + " points");
  }
  if (spec.max_peaks < 1) throw ArgumentError("max_peaks must be at least 1");
  if (spec.min_separation_deg < 0.0) throw ArgumentError("min_separation must be non-negative");

  std::vector<char> suppressed(spectrum.size(), 0);
  std::vector<Peak> peaks;
  const auto dirs = grid.dirs();
  while (peaks.size() < spec.max_peaks) {
    std::size_t best = spectrum.size();
    for (std::size_t g = 0; g < spectrum.size(); ++g) {
      if (suppressed[g]) continue;
      if (best == spectrum.size() || spectrum.values[g] > spectrum.values[best]) best = g;
    }
    if (best == spectrum.size()) break;
    const double score = spectrum.values[best];
    if (spec.threshold && score < *spec.threshold) break;
    peaks.push_back({grid.azimuth_of(best), grid.elevation_of(best), score, best});
    suppressed[best] = 1;
    if (spec.min_separation_deg > 0.0) {
      for (std::size_t g = 0; g < spectrum.size(); ++g) {
        if (!suppressed[g] && great_circle_deg(dirs[g], dirs[best]) < spec.min_separation_deg) {
          suppressed[g] = 1;
        }
      }
    }
  }
  return peaks;
}

namespace {

// Reduces one axis of a [t][f] block. Returns the reduced dims.
std::pair<std::size_t, std::size_t> reduce_block(const double* in, std::size_t t_dim,
                                                 std::size_t f_dim, PoolAxis axis, Reducer r,
                                                 double* out) {
  if (axis == PoolAxis::kFrequency) {
    for (std::size_t t = 0; t < t_dim; ++t) {
      const double* row = in + t * f_dim;
      double v = row[0];
      if (r == Reducer::kSum) {
        for (std::size_t f = 1; f < f_dim; ++f) v += row[f];
      } else {
        for (std::size_t f = 1; f < f_dim; ++f) v = std::max(v, row[f]);
      }
      out[t] = v;
    }
    return {t_dim, 1};
  }
  std::copy(in, in + f_dim, out);
  for (std::size_t t = 1; t < t_dim; ++t) combine(out, in + t * f_dim, f_dim, r);
  return {1, f_dim};
}

}  // namespace

SrpPhatProcessor::SrpPhatProcessor(std::shared_ptr<const DoaGrid> grid, std::vector<MicPair> pairs,
                                   const SrpPhatOptions& options)
    : grid_(std::move(grid)), pairs_(std::move(pairs)), options_(options), axis_(options.aoa_step_deg) {
  if (!grid_) throw ArgumentError("processor needs a grid");
  if (pairs_.empty()) throw ArgumentError("processor needs at least one microphone pair");
  if (options_.n_fft < 4 || options_.n_fft % 2 != 0) {
    throw ArgumentError("FFT size must be even and at least 4");
  }
  if (!(options_.fs > 0.0)) throw ArgumentError("sampling rate must be positive");
  options_.pooling.validate();
  if (axis_.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ArgumentError("AOA resolution is too fine");
  }
  bins_ = analysis_bins(options_.n_fft, options_.fs, options_.band);
  if (bins_.empty()) throw ArgumentError("frequency band contains no FFT bins");

  const std::size_t n_ang = axis_.size();
  const std::size_t n_pts = grid_->size();
  plans_.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    PairPlan& plan = plans_[p];
    plan.steer_re.resize(bins_.size() * n_ang);
    plan.steer_im.resize(bins_.size() * n_ang);
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      for (std::size_t i = 0; i < n_ang; ++i) {
        const auto s = steering(bins_[b], pairs_[p].tau, axis_.angles()[i], options_.n_fft);
        plan.steer_re[b * n_ang + i] = s.real();
        plan.steer_im[b * n_ang + i] = s.imag();
      }
    }
    const AoaTable table = compute_aoa_table(*grid_, pairs_[p]);
    plan.knot.resize(n_pts);
    plan.weight.resize(n_pts);
    for (std::size_t g = 0; g < n_pts; ++g) {
      const auto [idx, w] = axis_.bracket(table.alpha_deg[g]);
      plan.knot[g] = static_cast<std::uint16_t>(idx);
      plan.weight[g] = w;
    }
  }
}

double SrpPhatProcessor::max_score(std::size_t frames) const {
  const PoolingSpec& pool = options_.pooling;
  double s = 1.0;
  if (pool.over_pairs == Reducer::kSum) s *= static_cast<double>(pairs_.size());
  if (pool.over_freq == Reducer::kSum) s *= static_cast<double>(bins_.size());
  if (pool.over_time == Reducer::kSum) s *= static_cast<double>(frames);
  return s;
}

AngularSpectrum SrpPhatProcessor::process(const Spectrogram& spec) const {
  if (spec.n_fft() != options_.n_fft) {
    throw ArgumentError("spectrogram FFT size " + std::to_string(spec.n_fft()) +
                        " differs from the processor's " + std::to_string(options_.n_fft));
  }
  if (spec.frames() == 0) throw ArgumentError("spectrogram has no frames");
  for (const MicPair& p : pairs_) {
    if (p.i >= spec.channels() || p.j >= spec.channels()) {
      throw ArgumentError("pair (" + std::to_string(p.i) + ", " + std::to_string(p.j) +
                          ") refers to a channel outside the " + std::to_string(spec.channels()) +
                          "-channel spectrogram");
    }
  }

  const PoolingSpec& pooling = options_.pooling;
  // Sums over frequency or time inside the leading run of sums move ahead of
  // interpolation.
  bool pre_freq = false;
  bool pre_time = false;
  for (PoolAxis a : pooling.order) {
    if (pooling.reducer(a) != Reducer::kSum) break;
    if (a == PoolAxis::kFrequency) pre_freq = true;
    if (a == PoolAxis::kTime) pre_time = true;
  }
  std::vector<PoolAxis> before_pairs;
  std::vector<PoolAxis> after_pairs;
  {
    bool seen_pairs = false;
    for (PoolAxis a : pooling.order) {
      if (a == PoolAxis::kPairs) {
        seen_pairs = true;
      } else if (!(a == PoolAxis::kFrequency && pre_freq) && !(a == PoolAxis::kTime && pre_time)) {
        (seen_pairs ? after_pairs : before_pairs).push_back(a);
      }
    }
  }

  const std::size_t n_t = spec.frames();
  const std::size_t n_b = bins_.size();
  const std::size_t n_ang = axis_.size();
  const std::size_t n_pts = grid_->size();
  const std::size_t t_dim = pre_time ? 1 : n_t;
  const std::size_t f_dim = pre_freq ? 1 : n_b;
  const std::size_t rows = t_dim * f_dim;

  // Local spectra on the AOA axis, [pair][angle][t'][f'].
  std::vector<double> local(pairs_.size() * n_ang * rows, 0.0);
  // Unit-modulus channel spectra: the PHAT product of two units is the
  // normalized cross-spectrum.
  const std::size_t n_ch = spec.channels();
  std::vector<double> ur(n_ch * n_t * n_b);
  std::vector<double> ui(n_ch * n_t * n_b);
  std::vector<double> mag(n_ch * n_t * n_b);
  for (std::size_t ch = 0; ch < n_ch; ++ch) {
    for (std::size_t t = 0; t < n_t; ++t) {
      const auto x = spec.frame(ch, t);
      const std::size_t base = (ch * n_t + t) * n_b;
      for (std::size_t b = 0; b < n_b; ++b) {
        const std::complex<double> v = x[bins_[b]];
        const double m = std::sqrt(std::norm(v));
        mag[base + b] = m;
        ur[base + b] = m > 0.0 ? v.real() / m : 0.0;
        ui[base + b] = m > 0.0 ? v.imag() / m : 0.0;
      }
    }
  }
  std::vector<double> cr(n_t * n_b);
  std::vector<double> ci(n_t * n_b);
  std::vector<double> row(n_ang);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const PairPlan& plan = plans_[p];
    const std::size_t oi = pairs_[p].i * n_t * n_b;
    const std::size_t oj = pairs_[p].j * n_t * n_b;
    for (std::size_t k = 0; k < n_t * n_b; ++k) {
      const bool live = mag[oi + k] * mag[oj + k] >= kPhatFloor;
      cr[k] = live ? ur[oi + k] * ur[oj + k] + ui[oi + k] * ui[oj + k] : 0.0;
      ci[k] = live ? ui[oi + k] * ur[oj + k] - ur[oi + k] * ui[oj + k] : 0.0;
    }
    if (pre_time) {
      for (std::size_t t = 1; t < n_t; ++t) {
        for (std::size_t b = 0; b < n_b; ++b) {
          cr[b] += cr[t * n_b + b];
          ci[b] += ci[t * n_b + b];
        }
      }
    }
    double* dst = local.data() + p * n_ang * rows;
    for (std::size_t t = 0; t < t_dim; ++t) {
      if (pre_freq) std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t b = 0; b < n_b; ++b) {
        const double re = cr[t * n_b + b];
        const double im = ci[t * n_b + b];
        const double* sr = plan.steer_re.data() + b * n_ang;
        const double* si = plan.steer_im.data() + b * n_ang;
        if (pre_freq) {
          for (std::size_t i = 0; i < n_ang; ++i) row[i] += re * sr[i] - im * si[i];
        } else {
          for (std::size_t i = 0; i < n_ang; ++i) dst[i * rows + t * f_dim + b] = re * sr[i] - im * si[i];
        }
      }
      if (pre_freq) {
        for (std::size_t i = 0; i < n_ang; ++i) dst[i * rows + t] = row[i];
      }
    }
  }

  // Shape of each grid point's block once the pre-pair reductions ran.
  std::size_t t1 = t_dim;
  std::size_t f1 = f_dim;
  for (PoolAxis a : before_pairs) (a == PoolAxis::kTime ? t1 : f1) = 1;
  const std::size_t rows1 = t1 * f1;

  const std::size_t chunk = std::clamp<std::size_t>(32768 / rows1, 16, n_pts);
  std::vector<double> acc(chunk * rows1);
  std::vector<double> block(rows);
  std::vector<double> scratch(rows);
  AngularSpectrum out;
  out.values.resize(n_pts);
  const Reducer pair_reducer = pooling.over_pairs;

  for (std::size_t g0 = 0; g0 < n_pts; g0 += chunk) {
    const std::size_t len = std::min(chunk, n_pts - g0);
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const PairPlan& plan = plans_[p];
      const double* lp = local.data() + p * n_ang * rows;
      for (std::size_t g = 0; g < len; ++g) {
        const double w = plan.weight[g0 + g];
        const double* a = lp + plan.knot[g0 + g] * rows;
        const double* b = a + rows;
        double* dst = acc.data() + g * rows1;
        if (before_pairs.empty()) {
          if (p == 0) {
            for (std::size_t r = 0; r < rows; ++r) dst[r] = (1.0 - w) * a[r] + w * b[r];
          } else if (pair_reducer == Reducer::kSum) {
            for (std::size_t r = 0; r < rows; ++r) dst[r] += (1.0 - w) * a[r] + w * b[r];
          } else {
            for (std::size_t r = 0; r < rows; ++r) dst[r] = std::max(dst[r], (1.0 - w) * a[r] + w * b[r]);
          }
          continue;
        }
        for (std::size_t r = 0; r < rows; ++r) block[r] = (1.0 - w) * a[r] + w * b[r];
        std::size_t td = t_dim;
        std::size_t fd = f_dim;
        for (PoolAxis ax : before_pairs) {
          std::tie(td, fd) = reduce_block(block.data(), td, fd, ax, pooling.reducer(ax), scratch.data());
          std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(td * fd), block.begin());
        }
        if (p == 0) {
          std::copy(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(rows1), dst);
        } else {
          combine(dst, block.data(), rows1, pair_reducer);
        }
      }
    }
    for (std::size_t g = 0; g < len; ++g) {
      const double* src = acc.data() + g * rows1;
      std::copy(src, src + rows1, block.begin());
      std::size_t td = t1;
      std::size_t fd = f1;
      for (PoolAxis ax : after_pairs) {
        std::tie(td, fd) = reduce_block(block.data(), td, fd, ax, pooling.reducer(ax), scratch.data());
        std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(td * fd), block.begin());
      }
      out.values[g0 + g] = block[0];
    }
  }
  return out;
}

}  // namespace srploc
