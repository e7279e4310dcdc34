#include "logclone/clones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logclone::clones {

const char* mode_name(Mode m) {
    switch (m) {
    case Mode::Raw: return "raw";
    case Mode::SiOnly: return "si_only";
    case Mode::Full: return "full";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    if (name == "raw") return Mode::Raw;
    if (name == "si_only") return Mode::SiOnly;
    if (name == "full") return Mode::Full;
    throw std::runtime_error("unknown detection mode: " + name);
}

std::map<std::string, double> DetectorConfig::default_weights() {
    const double w = 1.0 / 7.0;
    return {{"ntok", w}, {"nos", w},  {"nexp", w},     {"lmet", w},
            {"xmet", w}, {"sloc", w}, {"token_bag", w}};
}

void DetectorConfig::validate() const {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::runtime_error("detector threshold must be in (0, 1]");
    const auto known = default_weights();
    double sum = 0.0;
    for (const auto& [name, w] : weights) {
        if (known.find(name) == known.end())
            throw std::runtime_error("unknown similarity weight: " + name);
        if (w < 0.0) throw std::runtime_error("negative weight for " + name);
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::runtime_error("detector weights must sum to 1");
}

MethodEntry MethodEntry::build(const ingest::MethodDefinition& method,
                               const std::set<std::string>& local_names) {
    MethodEntry e;
    e.method = method;
    e.stripped = ingest::strip_logs(method);
    e.raw = features::extract_features(method, local_names, features::Mode::Raw);
    e.log_aware = features::extract_features(method, local_names, features::Mode::LogAware);
    e.raw_bag = features::token_bag(method);
    e.stripped_bag = features::token_bag(e.stripped);
    e.local_names = local_names;
    return e;
}

double bag_jaccard(const TokenBag& a, const TokenBag& b) {
    long inter = 0, uni = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            uni += ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            uni += ib->second;
            ++ib;
        } else {
            inter += std::min(ia->second, ib->second);
            uni += std::max(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double numeric_term(long x, long y) {
    const double mx = std::max({static_cast<double>(x), static_cast<double>(y), 1.0});
    return 1.0 - std::abs(static_cast<double>(x - y)) / mx;
}

} // namespace

double similarity(const features::FeatureVector& a, const features::FeatureVector& b,
                  const TokenBag& bag_a, const TokenBag& bag_b,
                  const DetectorConfig& cfg, std::map<std::string, double>* evidence) {
    std::map<std::string, double> terms{
        {"ntok", numeric_term(a.ntok, b.ntok)}, {"nos", numeric_term(a.nos, b.nos)},
        {"nexp", numeric_term(a.nexp, b.nexp)}, {"lmet", numeric_term(a.lmet, b.lmet)},
        {"xmet", numeric_term(a.xmet, b.xmet)}, {"sloc", numeric_term(a.sloc, b.sloc)},
        {"token_bag", bag_jaccard(bag_a, bag_b)}};
    double score = 0.0;
    double weight_sum = 0.0;
    for (const auto& [name, w] : cfg.weights) {
        const auto it = terms.find(name);
        if (it == terms.end()) throw std::runtime_error("unknown feature weight: " + name);
        score += w * it->second;
        weight_sum += w;
    }
    if (evidence) *evidence = std::move(terms);
    return weight_sum == 0.0 ? 0.0 : score / weight_sum;
}

ClonePair is_clone_pair(const MethodEntry& query, const MethodEntry& candidate,
                        Mode mode, const DetectorConfig& cfg) {
    const features::FeatureVector* fq = nullptr;
    const features::FeatureVector* fc = nullptr;
    const TokenBag* bq = nullptr;
    const TokenBag* bc = nullptr;
    switch (mode) {
    case Mode::Raw:
        fq = &query.raw;
        fc = &candidate.raw;
        bq = &query.raw_bag;
        bc = &candidate.raw_bag;
        break;
    case Mode::SiOnly:
        // log-aware features on logged sides only; bags keep log tokens
        fq = query.has_logs() ? &query.log_aware : &query.raw;
        fc = candidate.has_logs() ? &candidate.log_aware : &candidate.raw;
        bq = &query.raw_bag;
        bc = &candidate.raw_bag;
        break;
    case Mode::Full:
        fq = &query.log_aware;
        fc = &candidate.log_aware;
        bq = &query.stripped_bag;
        bc = &candidate.stripped_bag;
        break;
    }
    ClonePair pair;
    pair.query_id = query.method.id;
    pair.candidate_id = candidate.method.id;
    pair.mode = mode;
    pair.score = similarity(*fq, *fc, *bq, *bc, cfg, &pair.evidence);
    pair.is_clone = pair.score >= cfg.threshold;
    return pair;
}

ClonePair is_clone_pair(const ingest::MethodDefinition& query,
                        const ingest::MethodDefinition& candidate, Mode mode,
                        const DetectorConfig& cfg,
                        const std::set<std::string>& query_locals,
                        const std::set<std::string>& candidate_locals) {
    return is_clone_pair(MethodEntry::build(query, query_locals),
                         MethodEntry::build(candidate, candidate_locals), mode, cfg);
}

void MethodIndex::add(MethodEntry entry) {
    entries_.push_back(std::move(entry));
    built_ = false;
}

void MethodIndex::build() {
    std::sort(entries_.begin(), entries_.end(),
              [](const MethodEntry& a, const MethodEntry& b) {
                  if (a.stripped.sloc() != b.stripped.sloc())
                      return a.stripped.sloc() < b.stripped.sloc();
                  return a.method.id < b.method.id;
              });
    built_ = true;
}

const MethodEntry* MethodIndex::find(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.method.id == id) return &e;
    return nullptr;
}

std::vector<const MethodEntry*> MethodIndex::band_candidates(
    long sloc, double max_ratio, const std::string& self_id) const {
    if (!built_) throw std::runtime_error("MethodIndex: build() not called");
    const long lo = static_cast<long>(std::ceil(static_cast<double>(sloc) / max_ratio));
    const long hi = static_cast<long>(std::floor(static_cast<double>(sloc) * max_ratio));
    auto begin = std::lower_bound(entries_.begin(), entries_.end(), lo,
                                  [](const MethodEntry& e, long v) {
                                      return e.stripped.sloc() < v;
                                  });
    std::vector<const MethodEntry*> out;
    for (auto it = begin; it != entries_.end() && it->stripped.sloc() <= hi; ++it)
        if (it->method.id != self_id) out.push_back(&*it);
    return out;
}

std::vector<ClonePair> find_clones(const MethodEntry& query, const MethodIndex& corpus,
                                   Mode mode, const DetectorConfig& cfg) {
    std::vector<ClonePair> clones;
    for (const MethodEntry* cand :
         corpus.band_candidates(query.stripped.sloc(), cfg.sloc_ratio_filter,
                                query.method.id)) {
        ClonePair pair = is_clone_pair(query, *cand, mode, cfg);
        if (pair.is_clone) clones.push_back(std::move(pair));
    }
    std::sort(clones.begin(), clones.end(), [](const ClonePair& a, const ClonePair& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.candidate_id < b.candidate_id;
    });
    return clones;
}

LocationSuggestion suggest_log_location(const MethodEntry& query,
                                        const MethodIndex& corpus, Mode mode,
                                        const DetectorConfig& cfg) {
    LocationSuggestion suggestion;
    suggestion.query_had_logs = query.has_logs();
    const MethodEntry* q = &query;
    MethodEntry stripped_query;
    if (suggestion.query_had_logs) {
        stripped_query = MethodEntry::build(query.stripped, query.local_names);
        q = &stripped_query;
    }
    for (ClonePair& pair : find_clones(*q, corpus, mode, cfg)) {
        const MethodEntry* cand = corpus.find(pair.candidate_id);
        if (cand && cand->has_logs()) suggestion.evidence.push_back(std::move(pair));
    }
    suggestion.needs_log = !suggestion.evidence.empty();
    return suggestion;
}

} // namespace logclone::clones
