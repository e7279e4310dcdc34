#pragma once

#include "logclone/clones.hpp"
#include "logclone/corpus.hpp"
#include "logclone/lm.hpp"
#include "logclone/metrics.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace logclone::eval {

/// Labels for the location experiment, computed on log-stripped pairs only so
/// they are invariant to the detection mode under test.
struct GroundTruthSet {
    std::vector<std::pair<std::string, std::string>> positive_pairs;
    std::vector<std::pair<std::string, std::string>> negative_pairs;
    clones::DetectorConfig config;
    std::vector<std::string> warnings;

    bool empty() const { return positive_pairs.empty() && negative_pairs.empty(); }
    std::size_t size() const { return positive_pairs.size() + negative_pairs.size(); }
};

/// Strip logs from every logged method, run full-mode detection on the
/// stripped pairs within the sloc band: detected -> positive, the rest of the
/// band -> negative. Methods without an LPS are not ground-truth candidates.
GroundTruthSet build_ground_truth(const std::vector<ingest::MethodDefinition>& methods,
                                  const clones::DetectorConfig& cfg);

/// For each labeled pair, score is_clone_pair(MD_i logged, strip_logs(MD_j),
/// mode) against the label; one confusion matrix per mode.
std::map<clones::Mode, metrics::ConfusionMatrix> run_location_experiment(
    const GroundTruthSet& gt, const std::vector<ingest::MethodDefinition>& methods,
    const std::vector<clones::Mode>& modes);

/// Macro-averaged description scores for one suggestion variant. Optional
/// averages stay unset when no test case had the statistic defined.
struct VariantScores {
    long cases = 0;
    double bleu_1 = 0.0, bleu_2 = 0.0, bleu_3 = 0.0, bleu_4 = 0.0;
    std::optional<double> rouge_1, rouge_2, rouge_3;
    double rouge_l = 0.0;
};

struct ScoreReport {
    std::map<clones::Mode, metrics::ConfusionMatrix> location;
    std::map<lm::SuggestVariant, VariantScores> description;
    // percent change vs no_nlp, per metric name, for each NLP variant
    std::map<lm::SuggestVariant, std::map<std::string, double>> improvement;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::optional<double> lvl_match;
};

/// Score every test case under each variant; per case the best candidate per
/// metric counts (max over candidates), then macro-average.
ScoreReport run_description_experiment(const corpus::CorpusSplit& split,
                                       const lm::LanguageModel& model,
                                       const std::vector<lm::SuggestVariant>& variants);

/// Fraction of pairs whose first-LPS verbosity levels match (ordinal
/// pairing). Unset on empty input.
std::optional<double> lvl_match_rate(
    const std::vector<std::pair<const ingest::MethodDefinition*,
                                const ingest::MethodDefinition*>>& pairs);

enum class ReportFormat { Csv, Markdown };

/// Deterministic rendering, two decimals; throws on an empty report.
std::string render_report(const ScoreReport& r, ReportFormat format);

} // namespace logclone::eval
