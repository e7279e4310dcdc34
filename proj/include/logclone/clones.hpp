#pragma once

#include "logclone/features.hpp"
#include "logclone/ingest.hpp"

#include <map>
#include <string>
#include <vector>

namespace logclone::clones {

enum class Mode { Raw, SiOnly, Full };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct DetectorConfig {
    double threshold = 0.85;
    // weights over {ntok, nos, nexp, lmet, xmet, sloc, token_bag}; default equal
    std::map<std::string, double> weights = default_weights();
    double sloc_ratio_filter = 3.0;

    static std::map<std::string, double> default_weights();
    void validate() const; // throws on bad threshold / weights not summing to 1
};

struct ClonePair {
    std::string query_id;
    std::string candidate_id;
    double score = 0.0;
    Mode mode = Mode::Full;
    bool is_clone = false;
    std::map<std::string, double> evidence; // per-feature similarity terms
};

using TokenBag = std::map<std::string, long>;

/// Precomputed per-method state: both feature modes and both token bags.
struct MethodEntry {
    ingest::MethodDefinition method;
    ingest::MethodDefinition stripped;
    features::FeatureVector raw;
    features::FeatureVector log_aware;
    TokenBag raw_bag;
    TokenBag stripped_bag;
    std::set<std::string> local_names;

    static MethodEntry build(const ingest::MethodDefinition& method,
                             const std::set<std::string>& local_names);
    bool has_logs() const { return !method.log_statements.empty(); }
};

double bag_jaccard(const TokenBag& a, const TokenBag& b);

double similarity(const features::FeatureVector& a, const features::FeatureVector& b,
                  const TokenBag& bag_a, const TokenBag& bag_b,
                  const DetectorConfig& cfg,
                  std::map<std::string, double>* evidence = nullptr);

ClonePair is_clone_pair(const MethodEntry& query, const MethodEntry& candidate,
                        Mode mode, const DetectorConfig& cfg);

ClonePair is_clone_pair(const ingest::MethodDefinition& query,
                        const ingest::MethodDefinition& candidate, Mode mode,
                        const DetectorConfig& cfg,
                        const std::set<std::string>& query_locals = {},
                        const std::set<std::string>& candidate_locals = {});

/// Immutable corpus index over method entries, sorted by stripped sloc for
/// the size-ratio prefilter.
class MethodIndex {
public:
    void add(MethodEntry entry);
    void build(); // sort; call once after all add()s
    const std::vector<MethodEntry>& entries() const { return entries_; }
    const MethodEntry* find(const std::string& id) const;

    /// Candidates within the sloc ratio band of `sloc`, excluding `self_id`.
    std::vector<const MethodEntry*> band_candidates(long sloc, double max_ratio,
                                                    const std::string& self_id) const;

private:
    std::vector<MethodEntry> entries_;
    bool built_ = false;
};

std::vector<ClonePair> find_clones(const MethodEntry& query, const MethodIndex& corpus,
                                   Mode mode, const DetectorConfig& cfg);

struct LocationSuggestion {
    bool needs_log = false;
    std::vector<ClonePair> evidence; // logged clones only, ranked
    bool query_had_logs = false;     // warning: suggestion ran on the stripped query
};

LocationSuggestion suggest_log_location(const MethodEntry& query,
                                        const MethodIndex& corpus, Mode mode,
                                        const DetectorConfig& cfg);

} // namespace logclone::clones
