#include "logclone/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace logclone::metrics {

ConfusionStats confusion_stats(const ConfusionMatrix& m) {
    if (m.tp < 0 || m.tn < 0 || m.fp < 0 || m.fn < 0)
        throw std::runtime_error("confusion counts must be nonnegative");
    ConfusionStats s;
    if (m.tp + m.fp > 0)
        s.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    if (m.tp + m.fn > 0)
        s.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    if (s.precision && s.recall && *s.precision + *s.recall > 0.0)
        s.f_measure = 2.0 * *s.precision * *s.recall / (*s.precision + *s.recall);
    if (m.tp + m.fn > 0 && m.tn + m.fp > 0)
        s.balanced_accuracy =
            0.5 * (static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) +
                   static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp));
    return s;
}

namespace {

Tokens without_end_marker(const Tokens& tokens) {
    Tokens out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (t != kEndMarker) out.push_back(t);
    return out;
}

std::map<Tokens, long> ngram_counts(const Tokens& tokens, int n) {
    std::map<Tokens, long> counts;
    if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[Tokens(tokens.begin() + static_cast<long>(i),
                        tokens.begin() + static_cast<long>(i) + n)];
    return counts;
}

// clipped modified n-gram precision; unset when candidate has no n-grams
std::optional<double> modified_precision(const Tokens& cand, const Tokens& ref, int n) {
    const auto cand_counts = ngram_counts(cand, n);
    if (cand_counts.empty()) return std::nullopt;
    const auto ref_counts = ngram_counts(ref, n);
    long matched = 0, total = 0;
    for (const auto& [gram, count] : cand_counts) {
        total += count;
        const auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    return static_cast<double>(matched) / static_cast<double>(total);
}

} // namespace

double bleu(const Tokens& candidate, const Tokens& reference, const BleuConfig& cfg) {
    if (cfg.max_order < 1) throw std::runtime_error("bleu: max_order must be >= 1");
    const Tokens cand = without_end_marker(candidate);
    const Tokens ref = without_end_marker(reference);
    if (ref.empty()) throw std::runtime_error("bleu: empty reference");
    if (cand.empty()) return 0.0;

    std::vector<double> weights = cfg.weights;
    if (weights.empty())
        weights.assign(static_cast<std::size_t>(cfg.max_order), 1.0 / cfg.max_order);
    if (weights.size() != static_cast<std::size_t>(cfg.max_order))
        throw std::runtime_error("bleu: weights do not match max_order");

    double log_sum = 0.0;
    for (int n = 1; n <= cfg.max_order; ++n) {
        const double w = weights[static_cast<std::size_t>(n - 1)];
        if (w == 0.0) continue;
        const auto p = modified_precision(cand, ref, n);
        if (!p || *p == 0.0) return 0.0;
        log_sum += w * std::log(*p);
    }
    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(ref.size());
    const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return 100.0 * bp * std::exp(log_sum);
}

std::optional<double> rouge_n(const Tokens& candidate, const Tokens& reference, int n) {
    if (n < 1) throw std::runtime_error("rouge_n: n must be >= 1");
    const Tokens cand = without_end_marker(candidate);
    const Tokens ref = without_end_marker(reference);
    const auto ref_counts = ngram_counts(ref, n);
    if (ref_counts.empty()) return std::nullopt; // reference shorter than n
    const auto cand_counts = ngram_counts(cand, n);
    long matched = 0, total = 0;
    for (const auto& [gram, count] : ref_counts) {
        total += count;
        const auto it = cand_counts.find(gram);
        if (it != cand_counts.end()) matched += std::min(count, it->second);
    }
    return 100.0 * static_cast<double>(matched) / static_cast<double>(total);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const Tokens& reference, RougeLForm form) {
    const Tokens cand = without_end_marker(candidate);
    const Tokens ref = without_end_marker(reference);
    if (ref.empty()) throw std::runtime_error("rouge_l: empty reference");
    if (cand.empty()) return 0.0;
    const double lcs = static_cast<double>(lcs_length(cand, ref));
    const double recall = lcs / static_cast<double>(ref.size());
    if (form == RougeLForm::Recall) return 100.0 * recall;
    const double precision = lcs / static_cast<double>(cand.size());
    if (precision + recall == 0.0) return 0.0;
    return 100.0 * 2.0 * precision * recall / (precision + recall);
}

} // namespace logclone::metrics
