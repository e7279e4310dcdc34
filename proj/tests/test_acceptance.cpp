// Acceptance harness: one line per criterion, nonzero exit on any failure.
#include "helpers.hpp"
#include "logclone/eval.hpp"
#include "logclone/metrics.hpp"
#include "logclone/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

using namespace logclone;
namespace fs = std::filesystem;

namespace {

bool near2(double value, double expected) {
    return std::round(value * 100.0) / 100.0 == expected;
}

metrics::Tokens toks(std::initializer_list<const char*> words) {
    return {words.begin(), words.end()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<ingest::MethodDefinition> fixture_methods() {
    const auto scan =
        ingest::scan_tree(std::string(FIXTURE_DIR) + "/corpus", {"*.java"});
    std::vector<ingest::MethodDefinition> out;
    for (const auto& file : scan.files)
        for (auto& md : ingest::extract_methods(file)) out.push_back(md);
    return out;
}

// 1: reference precision/recall/F/BA vectors reproduce exactly at 2 decimals
bool criterion1() {
    const auto aware = metrics::confusion_stats({862, 217, 18, 17});
    const auto oblivious = metrics::confusion_stats({560, 219, 16, 319});
    return near2(*aware.precision * 100.0, 97.95) &&
           near2(*aware.recall * 100.0, 98.07) &&
           near2(*aware.f_measure * 100.0, 98.01) &&
           near2(*aware.balanced_accuracy * 100.0, 95.20) &&
           near2(*oblivious.precision * 100.0, 97.22) &&
           near2(*oblivious.recall * 100.0, 63.71) &&
           near2(*oblivious.balanced_accuracy * 100.0, 78.45);
}

// 2: BLEU / ROUGE oracle values, including the floating-ip worked example
bool criterion2() {
    using metrics::BleuConfig;
    const auto cand = toks({"successfully", "created", "floating", "ip"});
    const auto ref = toks({"successfully", "deleted", "floating", "ip"});
    bool ok = near2(metrics::bleu(cand, ref, BleuConfig::cumulative(1)), 75.00) &&
              near2(metrics::bleu(cand, ref, BleuConfig::cumulative(2)), 50.00) &&
              near2(*metrics::rouge_n(cand, ref, 1), 75.00) &&
              near2(*metrics::rouge_n(cand, ref, 2), 33.33) &&
              near2(metrics::rouge_l(cand, ref), 75.00);
    ok = ok &&
         near2(metrics::bleu(toks({"a"}), toks({"a", "b"}), BleuConfig::cumulative(1)),
               36.79) &&
         near2(metrics::bleu(toks({"a", "a", "a"}), toks({"a"}),
                             BleuConfig::cumulative(1)),
               33.33) &&
         near2(metrics::bleu(toks({"x", "a", "b"}), toks({"a", "b", "y"}),
                             BleuConfig::cumulative(2)),
               57.74) &&
         near2(*metrics::rouge_n(toks({"a", "a"}), toks({"a", "a", "a"}), 1), 66.67) &&
         near2(metrics::rouge_l(toks({"a", "b", "c", "d"}), toks({"a", "b"}),
                                metrics::RougeLForm::FMeasure),
               66.67);
    const auto self = toks({"a", "b", "c"});
    ok = ok && near2(metrics::bleu(self, self, BleuConfig::cumulative(3)), 100.00) &&
         near2(*metrics::rouge_n(self, self, 2), 100.00) &&
         near2(metrics::rouge_l(self, self), 100.00);
    return ok;
}

// 3: full-mode decisions and scores are invariant under strip_logs (1000 pairs)
bool criterion3() {
    testutil::MethodGen gen(101);
    const clones::DetectorConfig cfg;
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
        const auto a = gen.method("a", 1 + static_cast<int>(gen.pick(7)),
                                  static_cast<int>(gen.pick(4)));
        const auto b = gen.method("b", 1 + static_cast<int>(gen.pick(7)),
                                  static_cast<int>(gen.pick(4)));
        const auto base = clones::is_clone_pair(a, b, clones::Mode::Full, cfg);
        const auto sa =
            clones::is_clone_pair(ingest::strip_logs(a), b, clones::Mode::Full, cfg);
        const auto sb =
            clones::is_clone_pair(a, ingest::strip_logs(b), clones::Mode::Full, cfg);
        if (base.is_clone != sa.is_clone || base.is_clone != sb.is_clone ||
            base.score != sa.score || base.score != sb.score)
            return false;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - start);
    return elapsed.count() < 30;
}

// 4: raw suffers SI, si_only suffers SII, full suffers neither; BA ordering
bool criterion4() {
    const auto methods = fixture_methods();
    const auto gt = eval::build_ground_truth(methods, clones::DetectorConfig{});
    if (gt.empty()) return false;
    const auto results = eval::run_location_experiment(
        gt, methods,
        {clones::Mode::Raw, clones::Mode::SiOnly, clones::Mode::Full});
    const auto& raw = results.at(clones::Mode::Raw);
    const auto& si = results.at(clones::Mode::SiOnly);
    const auto& full = results.at(clones::Mode::Full);
    const auto ba = [](const metrics::ConfusionMatrix& m) {
        return *metrics::confusion_stats(m).balanced_accuracy;
    };
    return raw.fn > 0 && si.fn == 0 && si.fp > 0 && full.fp == 0 && full.fn == 0 &&
           ba(raw) < ba(si) && ba(si) < ba(full);
}

// 5: language models — conditionals, smoothing, gradients, memorization
bool criterion5() {
    std::vector<corpus::LsdSequence> train;
    train.push_back(testutil::make_lsd("successfully deleted condition", "t1"));
    for (int i = 0; i < 3; ++i)
        train.push_back(testutil::make_lsd("elastistor volume successfully deleted",
                                           "t" + std::to_string(2 + i)));
    train.push_back(testutil::make_lsd("successfully created floating ip", "t5"));
    const auto vocab = corpus::build_vocabulary(train, 1);
    const auto ngram = lm::NgramModel::train(train, vocab, 2, 0.0);
    const int successfully = vocab.index_of("successfully");
    bool ok =
        std::abs(ngram.conditional({successfully}, vocab.index_of("deleted")) - 0.8) <
            1e-12 &&
        std::abs(ngram.conditional({successfully}, vocab.index_of("created")) - 0.2) <
            1e-12;

    // add-1 smoothing over a 3-token vocabulary
    const std::vector<corpus::LsdSequence> tiny = {testutil::make_lsd("a")};
    const auto tiny_vocab = corpus::build_vocabulary(tiny, 1);
    const auto smoothed = lm::NgramModel::train(tiny, tiny_vocab, 2, 1.0);
    ok = ok && std::abs(smoothed.conditional({tiny_vocab.index_of("a")},
                                             corpus::Vocabulary::kEos) -
                        0.5) < 1e-12;

    // analytic gradient vs central differences
    lm::LmHyperparams hp = lm::LmHyperparams::desk_profile();
    hp.hidden = 4;
    hp.dense = 3;
    hp.embed = 3;
    hp.dropout = 0.0;
    const std::vector<corpus::LsdSequence> grad_train = {
        testutil::make_lsd("a b c"), testutil::make_lsd("b a")};
    const auto grad_vocab = corpus::build_vocabulary(grad_train, 1);
    lm::RecurrentModel probe(grad_vocab, hp);
    std::vector<std::vector<int>> sequences;
    for (const auto& seq : grad_train) sequences.push_back(grad_vocab.encode(seq.tokens));
    std::vector<double> grad;
    probe.loss_and_gradient(sequences, grad);
    const double eps = 1e-6;
    const std::size_t n = probe.parameters().size();
    for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 25)) {
        std::vector<double> scratch;
        const double saved = probe.parameters()[i];
        probe.parameters()[i] = saved + eps;
        const double up = probe.loss_and_gradient(sequences, scratch);
        probe.parameters()[i] = saved - eps;
        const double down = probe.loss_and_gradient(sequences, scratch);
        probe.parameters()[i] = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
        if (std::abs(numeric - grad[i]) / denom >= 1e-4) return false;
    }

    // a tiny corpus is memorized: greedy decode reproduces the sentence
    std::vector<corpus::LsdSequence> memo(3, testutil::make_lsd("queue entry deleted"));
    const auto memo_vocab = corpus::build_vocabulary(memo, 1);
    lm::LmHyperparams memo_hp = hp;
    memo_hp.hidden = 12;
    memo_hp.dense = 8;
    memo_hp.embed = 8;
    memo_hp.epochs = 150;
    memo_hp.batch_size = 8;
    const auto rnn = lm::RecurrentModel::train(memo, memo_vocab, memo_hp);
    std::vector<int> context;
    std::vector<std::string> decoded;
    for (int step = 0; step < 5; ++step) {
        const auto dist = rnn.next_token_distribution(context);
        const int best = static_cast<int>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        if (best == corpus::Vocabulary::kEos) break;
        decoded.push_back(memo_vocab.token_at(best));
        context.push_back(best);
    }
    return ok && decoded == std::vector<std::string>{"queue", "entry", "deleted"};
}

// 6: suggestion quality is monotone no_nlp <= nlp_1 <= nlp_3, with a real gain
bool criterion6() {
    std::vector<corpus::LsdSequence> train;
    train.push_back(testutil::make_lsd("successfully deleted condition", "t1"));
    for (int i = 0; i < 3; ++i)
        train.push_back(testutil::make_lsd("elastistor volume successfully deleted",
                                           "t" + std::to_string(2 + i)));
    train.push_back(testutil::make_lsd("successfully created floating ip", "t5"));

    corpus::CorpusSplit split;
    split.train = train;
    corpus::TestCase tc;
    tc.seed_lsd = testutil::make_lsd("successfully created floating ip");
    tc.reference_lsd = testutil::make_lsd("successfully deleted floating ip");
    split.test_cases.push_back(tc);

    const auto vocab = corpus::build_vocabulary(train, 1);
    const auto model = lm::NgramModel::train(train, vocab, 2, 0.0);
    const auto report = eval::run_description_experiment(
        split, model,
        {lm::SuggestVariant::NoNlp, lm::SuggestVariant::Nlp1,
         lm::SuggestVariant::Nlp3});
    const auto& base = report.description.at(lm::SuggestVariant::NoNlp);
    const auto& one = report.description.at(lm::SuggestVariant::Nlp1);
    const auto& three = report.description.at(lm::SuggestVariant::Nlp3);
    return base.bleu_1 <= one.bleu_1 && one.bleu_1 <= three.bleu_1 &&
           base.rouge_l <= one.rouge_l && one.rouge_l <= three.rouge_l &&
           one.bleu_1 > base.bleu_1;
}

// 7: end-to-end determinism and agreement with the golden snapshot
bool criterion7() {
    const auto run_once = [](const std::string& tag) {
        const fs::path dir =
            fs::temp_directory_path() / ("logclone_accept_" + tag);
        fs::remove_all(dir);
        fs::create_directories(dir);
        pipeline::RunConfig cfg;
        cfg.out_dir = dir.string();
        pipeline::run_pipeline(std::string(FIXTURE_DIR) + "/corpus", cfg);
        return dir;
    };
    const auto first = run_once("one");
    const auto second = run_once("two");
    const std::string a = slurp(first / "report.csv");
    const std::string b = slurp(second / "report.csv");
    const std::string golden = slurp(std::string(FIXTURE_DIR) + "/golden_report.csv");
    fs::remove_all(first);
    fs::remove_all(second);
    return a == b && a == golden;
}

// 8: verbosity-level agreement across a ten-pair fixture is 0.90
bool criterion8() {
    std::vector<ingest::MethodDefinition> owned;
    for (int i = 0; i < 10; ++i) {
        owned.push_back(testutil::make_method("left" + std::to_string(i),
                                              "LOG.info(\"left message\");\n"));
        const std::string level = i == 0 ? "warn" : "info";
        owned.push_back(testutil::make_method(
            "right" + std::to_string(i), "LOG." + level + "(\"right message\");\n"));
    }
    std::vector<std::pair<const ingest::MethodDefinition*,
                          const ingest::MethodDefinition*>>
        pairs;
    for (int i = 0; i < 10; ++i) pairs.emplace_back(&owned[2 * i], &owned[2 * i + 1]);
    const auto rate = eval::lvl_match_rate(pairs);
    return rate && std::abs(*rate - 0.90) < 1e-12;
}

} // namespace

int main() {
    const std::vector<std::function<bool()>> criteria = {
        criterion1, criterion2, criterion3, criterion4,
        criterion5, criterion6, criterion7, criterion8};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        bool ok = false;
        try {
            ok = criteria[i]();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "criterion %zu raised: %s\n", i + 1, e.what());
        }
        std::printf("criterion %zu: %s\n", i + 1, ok ? "PASS" : "FAIL");
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
