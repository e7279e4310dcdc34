#pragma once

#include "logclone/corpus.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace logclone::lm {

struct LmHyperparams {
    int hidden = 500;
    int dense = 250;
    int embed = 128;
    double dropout = 0.10;
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 0.1;
    std::uint64_t seed = 42;
    bool desk_scale = false;

    static LmHyperparams paper_profile();
    static LmHyperparams desk_profile();
    void validate() const;
};

/// Shared inference surface. Contexts are vocabulary ids; the sequence
/// boundary is handled internally (n-gram pads, the recurrent model feeds a
/// start embedding), so callers pass plain token windows.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;
    virtual std::vector<double> next_token_distribution(
        const std::vector<int>& context) const = 0;
    virtual const corpus::Vocabulary& vocab() const = 0;

    /// Sum of stepwise conditional log-probabilities over the sequence.
    double sequence_log_prob(const std::vector<int>& sequence) const;
};

class NgramModel : public LanguageModel {
public:
    static NgramModel train(const std::vector<corpus::LsdSequence>& train,
                            const corpus::Vocabulary& vocab, int order, double k);

    std::vector<double> next_token_distribution(
        const std::vector<int>& context) const override;
    const corpus::Vocabulary& vocab() const override { return vocab_; }
    int order() const { return order_; }
    double smoothing() const { return k_; }

    /// P(token | context) with backoff to shorter contexts when k = 0.
    double conditional(const std::vector<int>& context, int token) const;

    void save(const std::string& path) const;
    static NgramModel load(const std::string& path, const corpus::Vocabulary& vocab);

private:
    int order_ = 2;
    double k_ = 0.0;
    corpus::Vocabulary vocab_;
    std::map<std::vector<int>, std::map<int, long>> counts_;
    std::map<std::vector<int>, long> totals_;
};

/// Two stacked LSTM layers over an embedding, a relu dense layer and a
/// softmax projection. All parameters live in one flat vector so training,
/// clipping, serialization and the finite-difference check share one view.
class RecurrentModel : public LanguageModel {
public:
    RecurrentModel(corpus::Vocabulary vocab, const LmHyperparams& hp);

    static RecurrentModel train(const std::vector<corpus::LsdSequence>& train,
                                const corpus::Vocabulary& vocab,
                                const LmHyperparams& hp);

    std::vector<double> next_token_distribution(
        const std::vector<int>& context) const override;
    const corpus::Vocabulary& vocab() const override { return vocab_; }
    const LmHyperparams& hyperparams() const { return hp_; }
    const std::vector<double>& loss_curve() const { return loss_curve_; }

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    /// Mean per-token cross-entropy over the sequences plus its gradient.
    /// Dropout masks come from `dropout_rng` when non-null, else no dropout.
    double loss_and_gradient(const std::vector<std::vector<int>>& sequences,
                             std::vector<double>& grad,
                             std::mt19937_64* dropout_rng = nullptr) const;

    void save(const std::string& path) const;
    static RecurrentModel load(const std::string& path,
                               const corpus::Vocabulary& vocab);

private:
    void init_parameters(std::mt19937_64& rng);
    void run_training(const std::vector<std::vector<int>>& sequences);

    corpus::Vocabulary vocab_;
    LmHyperparams hp_;
    std::vector<double> params_;
    std::vector<double> loss_curve_;
};

struct GeneratedCandidate {
    std::vector<std::string> tokens; // end marker kept when generation hit it
    double log_prob = 0.0;
};

/// Seed-driven decode: while seed tokens remain they drive the context
/// window, so the model proposes a replacement token at every seed position;
/// past the seed the candidate's own tokens continue the sequence until the
/// end marker or max_len.
std::vector<GeneratedCandidate> generate(const LanguageModel& model,
                                         const std::vector<std::string>& seed,
                                         int context_width, int beam_width,
                                         int max_len = 32);

enum class SuggestVariant { NoNlp, Nlp1, Nlp3 };

const char* variant_name(SuggestVariant v);
SuggestVariant variant_from_name(const std::string& name);

std::vector<GeneratedCandidate> suggest_lsd(const corpus::TestCase& test_case,
                                            const LanguageModel& model,
                                            SuggestVariant variant);

/// Reads the model-file header and loads the matching kind.
std::unique_ptr<LanguageModel> load_model(const std::string& path,
                                          const corpus::Vocabulary& vocab);

} // namespace logclone::lm
