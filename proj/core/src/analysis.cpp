#include "cntpuf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cntpuf/errors.hpp"

namespace cntpuf {

LearnedRule learn_threshold(std::span<const double> magnitudes,
                            double min_centroid_ratio) {
  if (magnitudes.size() < 2)
    throw ConfigError("threshold learning needs at least 2 samples");
  for (double m : magnitudes)
    if (!(m > 0.0) || !std::isfinite(m))
      throw ConfigError("threshold learning needs positive finite magnitudes");

  std::vector<double> logs(magnitudes.size());
  std::transform(magnitudes.begin(), magnitudes.end(), logs.begin(),
                 [](double m) { return std::log10(m); });
  std::sort(logs.begin(), logs.end());
  const std::size_t n = logs.size();

  // Exact 1-D 2-means: the optimal clustering is a split of the sorted
  // values, so enumerate splits with prefix sums and keep the one with the
  // smallest within-cluster sum of squares.
  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + logs[i];
    prefix_sq[i + 1] = prefix_sq[i] + logs[i] * logs[i];
  }
  const auto wcss = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    const double count = static_cast<double>(hi - lo);
    const double sum = prefix[hi] - prefix[lo];
    return (prefix_sq[hi] - prefix_sq[lo]) - sum * sum / count;
  };

  std::size_t best_split = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    const double cost = wcss(0, k) + wcss(k, n);
    if (cost < best_cost) {
      best_cost = cost;
      best_split = k;
    }
  }

  const double centroid_lo = prefix[best_split] / static_cast<double>(best_split);
  const double centroid_hi =
      (prefix[n] - prefix[best_split]) / static_cast<double>(n - best_split);

  LearnedRule learned;
  learned.centroid_lo = std::pow(10.0, centroid_lo);
  learned.centroid_hi = std::pow(10.0, centroid_hi);
  learned.rule.threshold = std::pow(10.0, 0.5 * (centroid_lo + centroid_hi));
  learned.rule.above_is_one = true;
  learned.separable =
      (centroid_hi - centroid_lo) >= std::log10(min_centroid_ratio);
  return learned;
}

std::vector<double> cell_mean_magnitudes(const AttackTrace& trace) {
  std::vector<double> means;
  means.reserve(trace.samples.size());
  for (const auto& cell_samples : trace.samples) {
    double sum = 0.0;
    for (const MeasurementSample& s : cell_samples) sum += std::abs(s.reading);
    means.push_back(sum / static_cast<double>(cell_samples.size()));
  }
  return means;
}

std::vector<std::uint8_t> predict_bits(const AttackTrace& trace,
                                       const ThresholdRule& rule) {
  const std::vector<double> means = cell_mean_magnitudes(trace);
  std::vector<std::uint8_t> bits;
  bits.reserve(means.size());
  for (double m : means) bits.push_back(static_cast<std::uint8_t>(rule.classify(m)));
  return bits;
}

double attack_accuracy(const AttackTrace& trace, const ThresholdRule& rule,
                       const std::vector<std::uint8_t>& reference) {
  if (reference.size() != trace.samples.size())
    throw ConfigError("reference length does not match trace cell count");
  const std::vector<std::uint8_t> predicted = predict_bits(trace, rule);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == reference[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(predicted.size());
}

double distinguishability(std::span<const double> samples_one,
                          std::span<const double> samples_zero) {
  if (samples_one.empty() || samples_zero.empty())
    throw ConfigError("distinguishability needs samples in both groups");

  std::vector<double> ones(samples_one.begin(), samples_one.end());
  std::vector<double> zeros(samples_zero.begin(), samples_zero.end());
  std::sort(ones.begin(), ones.end());
  std::sort(zeros.begin(), zeros.end());

  std::vector<double> cuts;
  cuts.reserve(ones.size() + zeros.size());
  cuts.insert(cuts.end(), ones.begin(), ones.end());
  cuts.insert(cuts.end(), zeros.begin(), zeros.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const std::int64_t n_one = static_cast<std::int64_t>(ones.size());
  const std::int64_t n_zero = static_cast<std::int64_t>(zeros.size());

  // Classify "above cut reads 1" with strict comparison; placing the cut at
  // each distinct sample value (plus below the minimum) enumerates every
  // achievable partition of the data, which is equivalent to sweeping all
  // midpoints but immune to midpoint rounding. Balanced accuracy is kept as
  // an exact integer numerator over 2 * n_one * n_zero, so the result is
  // bit-identical under group swap (the flipped direction is the
  // complementary numerator).
  std::int64_t best = n_one * n_zero;  // cut below the minimum: chance level
  for (double cut : cuts) {
    const auto above = [cut](const std::vector<double>& v) {
      return static_cast<std::int64_t>(
          v.end() - std::upper_bound(v.begin(), v.end(), cut));
    };
    const std::int64_t numerator =
        above(ones) * n_zero + (n_zero - above(zeros)) * n_one;
    best = std::max({best, numerator, 2 * n_one * n_zero - numerator});
  }
  return static_cast<double>(best) / static_cast<double>(2 * n_one * n_zero);
}

double hamming_weight_fraction(const std::vector<std::uint8_t>& bits) {
  if (bits.empty()) throw ConfigError("hamming weight of an empty bit vector");
  const auto ones = std::count(bits.begin(), bits.end(), std::uint8_t{1});
  return static_cast<double>(ones) / static_cast<double>(bits.size());
}

double fractional_hd(const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b,
                     const std::vector<std::uint8_t>* mask) {
  if (a.size() != b.size())
    throw ConfigError("hamming distance needs equal-length bit vectors");
  if (a.empty()) throw ConfigError("hamming distance of empty bit vectors");
  if (mask && mask->size() != a.size())
    throw ConfigError("mask length does not match bit vectors");

  std::size_t used = 0, differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    ++used;
    if (a[i] != b[i]) ++differing;
  }
  if (used == 0) throw ConfigError("mask excludes every position");
  return static_cast<double>(differing) / static_cast<double>(used);
}

namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

}  // namespace

std::vector<double> per_bit_entropy(
    const std::vector<std::vector<std::uint8_t>>& responses) {
  if (responses.empty()) throw ConfigError("entropy needs at least one response");
  const std::size_t length = responses.front().size();
  for (const auto& r : responses)
    if (r.size() != length) throw ConfigError("responses differ in length");

  std::vector<double> entropy(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    std::size_t ones = 0;
    for (const auto& r : responses) ones += r[i];
    entropy[i] = binary_entropy(static_cast<double>(ones) /
                                static_cast<double>(responses.size()));
  }
  return entropy;
}

AttackReport build_attack_report(const AttackTrace& trace,
                                 const Response& legitimate,
                                 double min_centroid_ratio) {
  AttackReport report;
  report.kind = trace.kind;

  const std::vector<double> means = cell_mean_magnitudes(trace);
  report.learned = learn_threshold(means, min_centroid_ratio);
  report.predicted = predict_bits(trace, report.learned.rule);
  report.accuracy_vs_truth = attack_accuracy(trace, report.learned.rule, trace.truth);

  if (legitimate.bits.size() != trace.samples.size())
    throw ConfigError("legitimate response length does not match trace");
  std::size_t used = 0, matches = 0;
  for (std::size_t i = 0; i < report.predicted.size(); ++i) {
    if (!legitimate.mask.empty() && !legitimate.mask[i]) continue;
    ++used;
    if (report.predicted[i] == legitimate.bits[i]) ++matches;
  }
  report.accuracy_vs_response =
      used ? static_cast<double>(matches) / static_cast<double>(used) : 0.0;

  std::vector<double> group_one, group_zero;
  for (std::size_t i = 0; i < means.size(); ++i)
    (trace.truth[i] ? group_one : group_zero).push_back(means[i]);
  report.distinguishability =
      (group_one.empty() || group_zero.empty())
          ? 0.5
          : distinguishability(group_one, group_zero);
  return report;
}

double MetricsReport::mean_intra_hd() const {
  if (intra_hd.empty()) return 0.0;
  return std::accumulate(intra_hd.begin(), intra_hd.end(), 0.0) /
         static_cast<double>(intra_hd.size());
}

double MetricsReport::mean_bit_entropy() const {
  if (bit_entropy.empty()) return 0.0;
  return std::accumulate(bit_entropy.begin(), bit_entropy.end(), 0.0) /
         static_cast<double>(bit_entropy.size());
}

MetricsReport compute_metrics(const Response& reference,
                              const std::vector<Response>& rereads,
                              const std::vector<Response>& other_devices) {
  MetricsReport metrics;
  metrics.hamming_weight = hamming_weight_fraction(reference.bits);

  std::vector<std::vector<std::uint8_t>> all_reads;
  all_reads.push_back(reference.bits);
  for (const Response& r : rereads) {
    metrics.intra_hd.push_back(fractional_hd(reference.bits, r.bits, &reference.mask));
    all_reads.push_back(r.bits);
  }
  metrics.bit_entropy = per_bit_entropy(all_reads);

  for (const Response& other : other_devices)
    metrics.inter_hd.push_back(fractional_hd(reference.bits, other.bits));
  return metrics;
}

}  // namespace cntpuf
