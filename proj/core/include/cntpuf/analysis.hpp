#pragma once

#include <span>
#include <vector>

#include "cntpuf/procedures.hpp"

namespace cntpuf {

// Threshold learned by the attacker from unlabeled current magnitudes.
// separable is false when the two cluster centroids lie closer than the
// configured ratio; the rule is still populated with the centroid midpoint.
struct LearnedRule {
  ThresholdRule rule;
  bool separable = false;
  double centroid_lo = 0.0;  // A, geometric center of the lower cluster
  double centroid_hi = 0.0;  // A, geometric center of the upper cluster
};

// Exact 1-D 2-means on log10 magnitudes (globally optimal split of the
// sorted values); the threshold is the geometric mean of the two cluster
// centroids. Requires at least two samples, all positive and finite.
LearnedRule learn_threshold(std::span<const double> magnitudes,
                            double min_centroid_ratio = 2.0);

// Per-cell aggregate the attacker thresholds: mean of |reading| over the
// repetitions of each cell.
std::vector<double> cell_mean_magnitudes(const AttackTrace& trace);

std::vector<std::uint8_t> predict_bits(const AttackTrace& trace,
                                       const ThresholdRule& rule);

// Fraction of cells whose predicted bit matches the reference. The
// reference must cover every cell.
double attack_accuracy(const AttackTrace& trace, const ThresholdRule& rule,
                       const std::vector<std::uint8_t>& reference);

// Best balanced accuracy over every single-threshold classifier (both
// directions) separating the two groups; 0.5 means no attacker advantage.
double distinguishability(std::span<const double> samples_one,
                          std::span<const double> samples_zero);

double hamming_weight_fraction(const std::vector<std::uint8_t>& bits);

// Bit-difference fraction over the unmasked positions; mask, when given,
// applies to both operands and must not be all-zero.
double fractional_hd(const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b,
                     const std::vector<std::uint8_t>* mask = nullptr);

// Binary entropy of the empirical 1-frequency at each bit position.
std::vector<double> per_bit_entropy(
    const std::vector<std::vector<std::uint8_t>>& responses);

// Attack outcome for one trace: the learned rule, its predictions, and how
// well they match ground truth and the legitimate response (the latter
// compared over the response's unmasked positions).
struct AttackReport {
  SchemeKind kind = SchemeKind::DrainLeak;
  LearnedRule learned;
  std::vector<std::uint8_t> predicted;
  double accuracy_vs_truth = 0.0;
  double accuracy_vs_response = 0.0;
  double distinguishability = 0.5;  // 0.5 when a truth class is absent
};

AttackReport build_attack_report(const AttackTrace& trace,
                                 const Response& legitimate,
                                 double min_centroid_ratio = 2.0);

// Response-quality metrics. intra_hd holds one fractional distance per
// re-read, measured against the reference over its mask; inter_hd holds
// unmasked distances against other devices' responses.
struct MetricsReport {
  double hamming_weight = 0.0;
  std::vector<double> bit_entropy;
  std::vector<double> intra_hd;
  std::vector<double> inter_hd;

  double mean_intra_hd() const;
  double mean_bit_entropy() const;
};

MetricsReport compute_metrics(const Response& reference,
                              const std::vector<Response>& rereads,
                              const std::vector<Response>& other_devices = {});

}  // namespace cntpuf
