#pragma once

#include "logclone/clones.hpp"
#include "logclone/corpus.hpp"
#include "logclone/eval.hpp"
#include "logclone/ingest.hpp"
#include "logclone/lm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logclone::pipeline {

/// Whole-run configuration. Loads from JSON (unknown keys rejected); the hash
/// is computed over the canonical serialization so key order in the source
/// file does not matter.
struct RunConfig {
    std::vector<std::string> include_globs{"*.java"};
    std::string project_id = "fixture";
    ingest::LwkConfig lwk;
    clones::DetectorConfig detector;
    corpus::CorpusConfig corpus;
    std::string profile = "desk"; // desk | paper
    lm::LmHyperparams lm = lm::LmHyperparams::desk_profile();
    std::string model_kind = "ngram"; // ngram | recurrent
    int ngram_order = 2;
    double ngram_k = 0.0;
    bool rouge_l_f_measure = false;
    std::uint64_t seed = 42;
    std::string out_dir = "out";

    void validate() const;
    void apply_profile(const std::string& name); // resets lm to the profile defaults

    static RunConfig load(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string canonical_json() const;
    std::uint64_t hash() const;
};

std::uint64_t fnv1a(const std::string& bytes);

// methods.jsonl round trip: body text re-tokenized, logs re-detected
void write_methods(const std::vector<ingest::MethodDefinition>& methods,
                   const std::string& path);
std::vector<ingest::MethodDefinition> read_methods(const std::string& path,
                                                   const ingest::LwkConfig& lwk);

// pairs.csv round trip
void write_pairs(const std::vector<clones::ClonePair>& pairs, const std::string& path);
std::vector<clones::ClonePair> read_pairs(const std::string& path);

/// Each stage writes `<output>.meta.json` carrying the config hash; consuming
/// stages refuse inputs produced under a different configuration.
void write_meta(const std::string& output_path, const RunConfig& cfg);
void check_meta(const std::string& input_path, const RunConfig& cfg);

// Stage commands. Each is a pure function of inputs + config + seed and
// writes its declared files under cfg.out_dir.
void cmd_ingest(const std::string& root, const RunConfig& cfg);
void cmd_features(const RunConfig& cfg);
void cmd_detect(const RunConfig& cfg, clones::Mode mode);
void cmd_corpus(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_suggest(const std::string& snippet_path, const RunConfig& cfg,
                 std::string* rendered = nullptr);
void cmd_evaluate(const RunConfig& cfg);

/// ingest → features → detect(full) → corpus → train → evaluate.
void run_pipeline(const std::string& root, const RunConfig& cfg);

} // namespace logclone::pipeline
