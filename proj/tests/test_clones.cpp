#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "logclone/clones.hpp"

#include <chrono>
#include <cmath>

using namespace logclone;
using namespace logclone::clones;

namespace {

MethodEntry entry(const ingest::MethodDefinition& md,
                  const std::set<std::string>& locals = {}) {
    return MethodEntry::build(md, locals);
}

std::vector<MethodEntry> corpus_entries() {
    const auto scan =
        ingest::scan_tree(std::string(FIXTURE_DIR) + "/corpus", {"*.java"});
    std::vector<MethodEntry> out;
    for (const auto& file : scan.files) {
        const auto methods = ingest::extract_methods(file);
        const auto locals = ingest::local_method_names(methods);
        for (const auto& md : methods) out.push_back(entry(md, locals));
    }
    return out;
}

const MethodEntry& by_file(const std::vector<MethodEntry>& entries,
                           const std::string& stem) {
    for (const auto& e : entries)
        if (e.method.path.find(stem + ".java") != std::string::npos) return e;
    throw std::runtime_error("fixture method not found: " + stem);
}

} // namespace

TEST_CASE("mode names round-trip") {
    CHECK(mode_name(Mode::Raw) == std::string("raw"));
    CHECK(mode_name(Mode::SiOnly) == std::string("si_only"));
    CHECK(mode_name(Mode::Full) == std::string("full"));
    CHECK(mode_from_name("raw") == Mode::Raw);
    CHECK(mode_from_name("si_only") == Mode::SiOnly);
    CHECK(mode_from_name("full") == Mode::Full);
    CHECK_THROWS(mode_from_name("hybrid"));
}

TEST_CASE("detector config validation") {
    DetectorConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    DetectorConfig bad_threshold;
    bad_threshold.threshold = 1.5;
    CHECK_THROWS(bad_threshold.validate());

    DetectorConfig bad_weights;
    bad_weights.weights["ntok"] = 0.9; // sum now != 1
    CHECK_THROWS(bad_weights.validate());

    DetectorConfig unknown_key;
    unknown_key.weights.erase("ntok");
    unknown_key.weights["bogus"] = 1.0 / 7.0;
    CHECK_THROWS(unknown_key.validate());
}

TEST_CASE("bag_jaccard basics") {
    TokenBag a{{"x", 2}, {"y", 1}};
    TokenBag b{{"x", 1}, {"z", 1}};
    // sum(min) = 1, sum(max) = 4
    CHECK(bag_jaccard(a, b) == 0.25);
    CHECK(bag_jaccard(a, a) == 1.0);
    CHECK(bag_jaccard(a, TokenBag{}) == 0.0);
    CHECK(bag_jaccard(TokenBag{}, TokenBag{}) == 1.0);
    CHECK(bag_jaccard(a, b) == bag_jaccard(b, a));
}

TEST_CASE("similarity is symmetric, normalized, and 1 on self") {
    testutil::MethodGen gen(17);
    DetectorConfig cfg;
    for (int i = 0; i < 50; ++i) {
        const auto a = entry(gen.method("a", 1 + static_cast<int>(gen.pick(8)),
                                        static_cast<int>(gen.pick(3))));
        const auto b = entry(gen.method("b", 1 + static_cast<int>(gen.pick(8)),
                                        static_cast<int>(gen.pick(3))));
        const double ab = similarity(a.raw, b.raw, a.raw_bag, b.raw_bag, cfg);
        const double ba = similarity(b.raw, a.raw, b.raw_bag, a.raw_bag, cfg);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(similarity(a.raw, a.raw, a.raw_bag, a.raw_bag, cfg) == 1.0);
    }
}

TEST_CASE("similarity evidence holds one term per weighted feature") {
    const auto a = entry(testutil::make_method("a", "store.reset();\n"));
    const auto b = entry(testutil::make_method("b", "store.reset();\nstore.sync();\n"));
    DetectorConfig cfg;
    std::map<std::string, double> evidence;
    similarity(a.raw, b.raw, a.raw_bag, b.raw_bag, cfg, &evidence);
    CHECK(evidence.size() == 7);
    for (const auto& [name, value] : evidence) {
        CAPTURE(name);
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
    }
    CHECK(evidence.count("token_bag") == 1);
}

TEST_CASE("per-feature similarity uses 1 - |x-y|/max(x,y,1)") {
    // two methods identical except one extra statement; check the ntok term
    const auto a = entry(testutil::make_method("a", "store.reset();\n"));
    const auto b = entry(testutil::make_method("b", "store.reset();\nclient.close();\n"));
    DetectorConfig cfg;
    std::map<std::string, double> evidence;
    similarity(a.raw, b.raw, a.raw_bag, b.raw_bag, cfg, &evidence);
    const double x = static_cast<double>(a.raw.ntok);
    const double y = static_cast<double>(b.raw.ntok);
    CHECK(evidence.at("ntok") ==
          1.0 - std::abs(x - y) / std::max({x, y, 1.0}));
}

TEST_CASE("full-mode decision and score are log-invariant") {
    // criterion: stripping logs on either side never changes the outcome
    testutil::MethodGen gen(23);
    DetectorConfig cfg;
    const auto start = std::chrono::steady_clock::now();
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        auto a = gen.method("a", 1 + static_cast<int>(gen.pick(7)),
                            static_cast<int>(gen.pick(4)));
        auto b = gen.method("b", 1 + static_cast<int>(gen.pick(7)),
                            static_cast<int>(gen.pick(4)));
        const auto base = is_clone_pair(a, b, Mode::Full, cfg);
        const auto strip_a = is_clone_pair(ingest::strip_logs(a), b, Mode::Full, cfg);
        const auto strip_b = is_clone_pair(a, ingest::strip_logs(b), Mode::Full, cfg);
        const auto strip_both =
            is_clone_pair(ingest::strip_logs(a), ingest::strip_logs(b), Mode::Full, cfg);
        CHECK(base.is_clone == strip_a.is_clone);
        CHECK(base.is_clone == strip_b.is_clone);
        CHECK(base.is_clone == strip_both.is_clone);
        CHECK(base.score == strip_a.score);
        CHECK(base.score == strip_b.score);
        CHECK(base.score == strip_both.score);
        ++compared;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - start);
    CHECK(compared == 1000);
    CHECK(elapsed.count() < 30);
}

TEST_CASE("raw mode is not log-invariant on the SI fixture pair") {
    const auto entries = corpus_entries();
    const auto& heavy = by_file(entries, "Si1"); // three log statements
    const auto& light = by_file(entries, "Si2"); // one log statement

    // raw mode on logged query vs stripped candidate misses the clone
    const auto raw = is_clone_pair(heavy.method, light.stripped, Mode::Raw,
                                   DetectorConfig{});
    CHECK_FALSE(raw.is_clone);

    // full mode recovers it
    const auto full = is_clone_pair(heavy.method, light.stripped, Mode::Full,
                                    DetectorConfig{});
    CHECK(full.is_clone);
}

TEST_CASE("si_only mode keeps raw bags and admits the SII fixture pair") {
    const auto entries = corpus_entries();
    const auto& gauge = by_file(entries, "Sii1");
    const auto& chunk = by_file(entries, "Sii2");
    DetectorConfig cfg;

    // ground truth on stripped methods: not a clone
    const auto full = is_clone_pair(gauge.method, chunk.stripped, Mode::Full, cfg);
    CHECK_FALSE(full.is_clone);

    // log-token overlap in the raw bags pushes si_only over the threshold
    const auto si = is_clone_pair(gauge.method, chunk.stripped, Mode::SiOnly, cfg);
    CHECK(si.is_clone);

    // raw mode stays below threshold here (feature drift dominates)
    const auto raw = is_clone_pair(gauge.method, chunk.stripped, Mode::Raw, cfg);
    CHECK_FALSE(raw.is_clone);
}

TEST_CASE("true positives survive in raw mode when logging is similar") {
    const auto entries = corpus_entries();
    DetectorConfig cfg;
    const auto& a1 = by_file(entries, "Alpha1");
    const auto& a2 = by_file(entries, "Alpha2");
    CHECK(is_clone_pair(a1.method, a2.stripped, Mode::Raw, cfg).is_clone);
    CHECK(is_clone_pair(a1.method, a2.stripped, Mode::Full, cfg).is_clone);
}

TEST_CASE("band prefilter skips grossly different sloc") {
    MethodIndex index;
    testutil::MethodGen gen(31);
    const auto small = entry(testutil::make_method("tiny", "store.reset();\n"));
    std::string long_body;
    for (int i = 0; i < 30; ++i) long_body += "registry.record(stamp, count);\n";
    const auto big = entry(testutil::make_method("huge", long_body));
    index.add(small);
    index.add(big);
    index.build();

    const auto band = index.band_candidates(small.stripped.sloc(), 3.0, "none");
    // big has sloc 32 > floor(3 * 3) = 9, so only the small method is in band
    REQUIRE(band.size() == 1);
    CHECK(band[0]->method.id == small.method.id);

    // self exclusion
    const auto self_band =
        index.band_candidates(small.stripped.sloc(), 3.0, small.method.id);
    CHECK(self_band.empty());
}

TEST_CASE("band prefilter uses stripped sloc, so it is log-invariant") {
    testutil::MethodGen gen(37);
    for (int i = 0; i < 200; ++i) {
        const auto logged = gen.method("m", 2 + static_cast<int>(gen.pick(5)),
                                       1 + static_cast<int>(gen.pick(3)));
        const auto e = entry(logged);
        const auto stripped_e = entry(ingest::strip_logs(logged));
        CHECK(e.stripped.sloc() == stripped_e.stripped.sloc());
    }
}

TEST_CASE("MethodIndex find and determinism of find_clones ranking") {
    const auto entries = corpus_entries();
    MethodIndex index;
    for (const auto& e : entries) index.add(e);
    index.build();

    const auto& probe = by_file(entries, "Cfam1");
    CHECK(index.find(probe.method.id) != nullptr);
    CHECK(index.find("missing-id") == nullptr);

    const auto hits1 = find_clones(probe, index, Mode::Full, DetectorConfig{});
    const auto hits2 = find_clones(probe, index, Mode::Full, DetectorConfig{});
    REQUIRE(hits1.size() == hits2.size());
    REQUIRE_FALSE(hits1.empty());
    for (std::size_t i = 0; i < hits1.size(); ++i) {
        CHECK(hits1[i].candidate_id == hits2[i].candidate_id);
        CHECK(hits1[i].score == hits2[i].score);
    }
    // ranked by descending score, ties broken by candidate id
    for (std::size_t i = 1; i < hits1.size(); ++i) {
        const bool ordered =
            hits1[i - 1].score > hits1[i].score ||
            (hits1[i - 1].score == hits1[i].score &&
             hits1[i - 1].candidate_id < hits1[i].candidate_id);
        CHECK(ordered);
    }
    // the floating-ip sibling is the top hit
    CHECK(hits1[0].candidate_id == by_file(entries, "Cfam2").method.id);
    CHECK(hits1[0].is_clone);
}

TEST_CASE("suggest_log_location flags logged clones") {
    const auto entries = corpus_entries();
    MethodIndex index;
    for (const auto& e : entries) index.add(e);
    index.build();

    // an unlogged copy of the floating-ip method should be told to log
    auto bare = ingest::strip_logs(by_file(entries, "Cfam1").method);
    bare.id = "probe#createFloatingIp";
    const auto suggestion =
        suggest_log_location(entry(bare), index, Mode::Full, DetectorConfig{});
    CHECK(suggestion.needs_log);
    CHECK_FALSE(suggestion.query_had_logs);
    REQUIRE_FALSE(suggestion.evidence.empty());
    for (const auto& hit : suggestion.evidence) {
        const auto* donor = index.find(hit.candidate_id);
        REQUIRE(donor != nullptr);
        CHECK(donor->has_logs());
    }

    // a method unlike anything in the corpus gets no suggestion
    const auto stranger = entry(testutil::make_method(
        "stranger", "byte[] seed = digest.compute(salt);\nvault.store(seed);\n"));
    const auto quiet =
        suggest_log_location(stranger, index, Mode::Full, DetectorConfig{});
    CHECK_FALSE(quiet.needs_log);
    CHECK(quiet.evidence.empty());

    // a query that already logs is still scored but flagged
    const auto logged_probe = suggest_log_location(by_file(entries, "Cfam1"), index,
                                                   Mode::Full, DetectorConfig{});
    CHECK(logged_probe.query_had_logs);
}

TEST_CASE("threshold boundary: score exactly at threshold is a clone") {
    DetectorConfig cfg;
    const auto a = entry(testutil::make_method("a", "store.reset();\n"));
    // identical methods score 1.0 >= threshold
    const auto pair = is_clone_pair(a, a, Mode::Full, cfg);
    CHECK(pair.score == 1.0);
    CHECK(pair.is_clone);

    DetectorConfig strict;
    strict.threshold = 1.0;
    CHECK(is_clone_pair(a, a, Mode::Full, strict).is_clone);
}

TEST_CASE("custom weights shift the verdict") {
    // same tokens rearranged: bags identical, features identical -> score 1
    const auto a = entry(testutil::make_method("a", "store.save(key);\nstore.load(key);\n"));
    const auto b = entry(testutil::make_method("b", "store.load(key);\nstore.save(key);\n"));
    DetectorConfig bag_only;
    for (auto& [k, v] : bag_only.weights) v = 0.0;
    bag_only.weights["token_bag"] = 1.0;
    const auto pair = is_clone_pair(a, b, Mode::Full, bag_only);
    CHECK(pair.score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair.is_clone);
}
