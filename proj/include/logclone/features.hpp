#pragma once

#include "logclone/ingest.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace logclone::features {

enum class Mode { Raw, LogAware };

struct FeatureVector {
    bool elps = false;
    long ntok = 0;
    long nos = 0;
    long nexp = 0;
    long lmet = 0;
    long xmet = 0;
    long sloc = 0;
    std::set<std::string> lwk;
    Mode mode = Mode::Raw;
    std::string method_id;
};

struct FeatureDelta {
    long ntok = 0, nos = 0, nexp = 0, lmet = 0, xmet = 0, sloc = 0;
    std::pair<bool, bool> elps;          // (a, b)
    std::set<std::string> lwk_sym_diff;  // symmetric difference
};

/// Word tokens of the method body: identifiers, keywords, numeric literals,
/// and the whitespace/punctuation-split words of string literals.
std::vector<std::string> word_tokens(const ingest::MethodDefinition& method);

/// Word-token multiset, the structural signal used by the clone detector.
std::map<std::string, long> token_bag(const ingest::MethodDefinition& method);

FeatureVector extract_features(const ingest::MethodDefinition& method,
                               const std::set<std::string>& local_names, Mode mode);

FeatureDelta feature_delta(const FeatureVector& a, const FeatureVector& b);

} // namespace logclone::features
