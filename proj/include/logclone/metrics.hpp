#pragma once

#include <optional>
#include <string>
#include <vector>

namespace logclone::metrics {

struct ConfusionMatrix {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    long total() const { return tp + tn + fp + fn; }
};

/// Derived statistics as fractions in [0,1]; a statistic with a zero
/// denominator is left unset rather than silently reported as 0.
struct ConfusionStats {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_measure;
    std::optional<double> balanced_accuracy;
};

ConfusionStats confusion_stats(const ConfusionMatrix& m);

struct BleuConfig {
    int max_order = 4;
    std::vector<double> weights; // empty = cumulative uniform 1/max_order

    static BleuConfig cumulative(int n) { return BleuConfig{n, {}}; }
};

using Tokens = std::vector<std::string>;

/// BLEU as a percentage in [0,100]. Clipped modified n-gram precision,
/// brevity penalty, zero if any positively-weighted p_n is zero.
/// End-marker tokens are excluded before scoring.
double bleu(const Tokens& candidate, const Tokens& reference, const BleuConfig& cfg);

/// ROUGE-N recall percentage; unset when the reference has no n-grams.
std::optional<double> rouge_n(const Tokens& candidate, const Tokens& reference, int n);

enum class RougeLForm { Recall, FMeasure };
double rouge_l(const Tokens& candidate, const Tokens& reference,
               RougeLForm form = RougeLForm::Recall);

/// Token-level longest common subsequence length.
std::size_t lcs_length(const Tokens& a, const Tokens& b);

inline constexpr const char* kEndMarker = "<eos>";

} // namespace logclone::metrics
