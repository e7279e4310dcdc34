#pragma once

#include "logclone/clones.hpp"
#include "logclone/ingest.hpp"

#include <map>
#include <string>
#include <vector>

namespace logclone::corpus {

struct CorpusConfig {
    bool lowercase = true;
    long min_count = 1;
    bool dedup_train = false; // duplicates kept: frequency drives the LM
};

struct LsdSequence {
    std::vector<std::string> tokens; // end marker included as final token
    std::string origin_method;
    std::size_t origin_stmt = 0; // ordinal of the statement within its method
    std::string origin_level;
    bool empty_after_cleaning = false;

    std::string identity() const {
        return origin_method + "#" + std::to_string(origin_stmt);
    }
};

struct TestCase {
    clones::ClonePair pair;
    LsdSequence seed_lsd;      // borrowed from the train-side method
    LsdSequence reference_lsd; // the test-side method's own description
};

struct CorpusSplit {
    std::vector<LsdSequence> train;
    std::vector<TestCase> test_cases;
};

class Vocabulary {
public:
    static constexpr int kEos = 0;
    static constexpr int kUnk = 1;

    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens); // reserved slots included

    int index_of(const std::string& token) const; // OOV -> kUnk
    const std::string& token_at(int index) const;
    int size() const { return static_cast<int>(tokens_.size()); }
    /// Embedding row reserved for sequence-start padding; not a vocabulary entry.
    int start_id() const { return size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::map<std::string, long>& counts() const { return counts_; }
    void set_counts(std::map<std::string, long> counts) { counts_ = std::move(counts); }
    std::uint64_t hash() const;

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;

private:
    std::vector<std::string> tokens_;
    std::map<std::string, int> index_;
    std::map<std::string, long> counts_;
};

/// Preprocess one log statement description into an LSD token sequence.
LsdSequence extract_lsd(const ingest::LogStatement& stmt, const CorpusConfig& cfg);

/// A clone pair oriented for corpus construction: the train side contributes
/// LSDs to training, the test side contributes references.
struct OrientedPair {
    clones::ClonePair pair;
    const ingest::MethodDefinition* train_side = nullptr;
    const ingest::MethodDefinition* test_side = nullptr;
};

CorpusSplit build_splits(const std::vector<OrientedPair>& pairs, const CorpusConfig& cfg);

Vocabulary build_vocabulary(const std::vector<LsdSequence>& train, long min_count);

// stage file formats
void write_train(const std::vector<LsdSequence>& train, const std::string& path);
std::vector<LsdSequence> read_train(const std::string& path);
void write_test(const std::vector<TestCase>& cases, const std::string& path);
std::vector<TestCase> read_test(const std::string& path);
void write_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary read_vocab(const std::string& path);

} // namespace logclone::corpus
