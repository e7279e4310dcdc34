#include "logclone/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace logclone::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw std::runtime_error("config: unknown key '" + key + "' in " + where);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string score6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::map<std::string, clones::MethodEntry> entries_by_id(
    const std::vector<ingest::MethodDefinition>& methods) {
    std::map<std::string, std::vector<ingest::MethodDefinition>> by_file;
    for (const auto& m : methods) by_file[m.project + ":" + m.path].push_back(m);
    std::map<std::string, clones::MethodEntry> entries;
    for (const auto& [file, group] : by_file) {
        const auto locals = ingest::local_method_names(group);
        for (const auto& m : group)
            entries.emplace(m.id, clones::MethodEntry::build(m, locals));
    }
    return entries;
}

} // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void RunConfig::validate() const {
    detector.validate();
    lm.validate();
    if (profile != "desk" && profile != "paper")
        throw std::runtime_error("config: profile must be desk or paper");
    if (model_kind != "ngram" && model_kind != "recurrent")
        throw std::runtime_error("config: model_kind must be ngram or recurrent");
    if (ngram_order < 1) throw std::runtime_error("config: ngram_order must be >= 1");
    if (ngram_k < 0.0) throw std::runtime_error("config: ngram_k must be >= 0");
    if (corpus.min_count < 1) throw std::runtime_error("config: min_count must be >= 1");
    if (include_globs.empty()) throw std::runtime_error("config: include_globs empty");
    if (out_dir.empty()) throw std::runtime_error("config: out_dir empty");
}

void RunConfig::apply_profile(const std::string& name) {
    if (name == "desk")
        lm = lm::LmHyperparams::desk_profile();
    else if (name == "paper")
        lm = lm::LmHyperparams::paper_profile();
    else
        throw std::runtime_error("config: unknown profile " + name);
    profile = name;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    reject_unknown_keys(j,
                        {"include_globs", "project_id", "lwk", "detector", "corpus",
                         "profile", "lm", "model_kind", "ngram_order", "ngram_k",
                         "rouge_l_f_measure", "seed", "out_dir"},
                        "config root");

    RunConfig cfg;
    if (j.contains("profile")) cfg.apply_profile(j.at("profile").get<std::string>());
    if (j.contains("include_globs"))
        cfg.include_globs = j.at("include_globs").get<std::vector<std::string>>();
    if (j.contains("project_id")) cfg.project_id = j.at("project_id").get<std::string>();
    if (j.contains("lwk")) {
        const json& w = j.at("lwk");
        reject_unknown_keys(w, {"receivers", "bare_log_call"}, "lwk");
        if (w.contains("receivers"))
            cfg.lwk.receivers = w.at("receivers").get<std::vector<std::string>>();
        if (w.contains("bare_log_call"))
            cfg.lwk.bare_log_call = w.at("bare_log_call").get<bool>();
    }
    if (j.contains("detector")) {
        const json& d = j.at("detector");
        reject_unknown_keys(d, {"threshold", "weights", "sloc_ratio_filter"}, "detector");
        if (d.contains("threshold"))
            cfg.detector.threshold = d.at("threshold").get<double>();
        if (d.contains("weights"))
            cfg.detector.weights =
                d.at("weights").get<std::map<std::string, double>>();
        if (d.contains("sloc_ratio_filter"))
            cfg.detector.sloc_ratio_filter = d.at("sloc_ratio_filter").get<double>();
    }
    if (j.contains("corpus")) {
        const json& c = j.at("corpus");
        reject_unknown_keys(c, {"lowercase", "min_count", "dedup_train"}, "corpus");
        if (c.contains("lowercase")) cfg.corpus.lowercase = c.at("lowercase").get<bool>();
        if (c.contains("min_count")) cfg.corpus.min_count = c.at("min_count").get<long>();
        if (c.contains("dedup_train"))
            cfg.corpus.dedup_train = c.at("dedup_train").get<bool>();
    }
    if (j.contains("lm")) {
        const json& m = j.at("lm");
        reject_unknown_keys(m,
                            {"hidden", "dense", "embed", "dropout", "epochs",
                             "batch_size", "learning_rate"},
                            "lm");
        if (m.contains("hidden")) cfg.lm.hidden = m.at("hidden").get<int>();
        if (m.contains("dense")) cfg.lm.dense = m.at("dense").get<int>();
        if (m.contains("embed")) cfg.lm.embed = m.at("embed").get<int>();
        if (m.contains("dropout")) cfg.lm.dropout = m.at("dropout").get<double>();
        if (m.contains("epochs")) cfg.lm.epochs = m.at("epochs").get<int>();
        if (m.contains("batch_size")) cfg.lm.batch_size = m.at("batch_size").get<int>();
        if (m.contains("learning_rate"))
            cfg.lm.learning_rate = m.at("learning_rate").get<double>();
    }
    if (j.contains("model_kind")) cfg.model_kind = j.at("model_kind").get<std::string>();
    if (j.contains("ngram_order")) cfg.ngram_order = j.at("ngram_order").get<int>();
    if (j.contains("ngram_k")) cfg.ngram_k = j.at("ngram_k").get<double>();
    if (j.contains("rouge_l_f_measure"))
        cfg.rouge_l_f_measure = j.at("rouge_l_f_measure").get<bool>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    return from_json_text(read_file(path));
}

std::string RunConfig::canonical_json() const {
    ordered_json j;
    j["include_globs"] = include_globs;
    j["project_id"] = project_id;
    j["lwk"] = {{"receivers", lwk.receivers}, {"bare_log_call", lwk.bare_log_call}};
    j["detector"] = {{"threshold", detector.threshold},
                     {"weights", detector.weights},
                     {"sloc_ratio_filter", detector.sloc_ratio_filter}};
    j["corpus"] = {{"lowercase", corpus.lowercase},
                   {"min_count", corpus.min_count},
                   {"dedup_train", corpus.dedup_train}};
    j["profile"] = profile;
    j["lm"] = {{"hidden", lm.hidden},         {"dense", lm.dense},
               {"embed", lm.embed},           {"dropout", lm.dropout},
               {"epochs", lm.epochs},         {"batch_size", lm.batch_size},
               {"learning_rate", lm.learning_rate}};
    j["model_kind"] = model_kind;
    j["ngram_order"] = ngram_order;
    j["ngram_k"] = ngram_k;
    j["rouge_l_f_measure"] = rouge_l_f_measure;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    return j.dump();
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical_json()); }

void write_methods(const std::vector<ingest::MethodDefinition>& methods,
                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& m : methods) {
        ordered_json logs = ordered_json::array();
        for (const auto& stmt : m.log_statements)
            logs.push_back({{"level", stmt.level},
                            {"description", stmt.description_raw},
                            {"args", stmt.argument_exprs},
                            {"start_line", stmt.start_line}});
        ordered_json j{{"id", m.id},
                       {"project", m.project},
                       {"path", m.path},
                       {"start_line", m.start_line},
                       {"end_line", m.end_line},
                       {"signature", m.signature},
                       {"body", m.body_text()},
                       {"logs", std::move(logs)}};
        out << j.dump() << '\n';
    }
}

std::vector<ingest::MethodDefinition> read_methods(const std::string& path,
                                                   const ingest::LwkConfig& lwk) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<ingest::MethodDefinition> methods;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        ingest::MethodDefinition m;
        m.id = j.at("id").get<std::string>();
        m.project = j.at("project").get<std::string>();
        m.path = j.at("path").get<std::string>();
        m.start_line = j.at("start_line").get<int>();
        m.end_line = j.at("end_line").get<int>();
        m.signature = j.at("signature").get<std::string>();
        m.body_tokens = ingest::tokenize(j.at("body").get<std::string>());
        m.log_statements = ingest::detect_log_statements(m.body_tokens, lwk);
        methods.push_back(std::move(m));
    }
    return methods;
}

void write_pairs(const std::vector<clones::ClonePair>& pairs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "query_id,candidate_id,mode,score,is_clone\n";
    for (const auto& p : pairs)
        out << p.query_id << ',' << p.candidate_id << ',' << clones::mode_name(p.mode)
            << ',' << score6(p.score) << ',' << (p.is_clone ? "true" : "false") << '\n';
}

std::vector<clones::ClonePair> read_pairs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<clones::ClonePair> pairs;
    std::string line;
    if (!std::getline(in, line) ||
        line != "query_id,candidate_id,mode,score,is_clone")
        throw std::runtime_error("malformed pairs header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        // method ids contain colons but never commas, so a plain split is safe
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos;
             start = pos + 1)
            cols.push_back(line.substr(start, pos - start));
        cols.push_back(line.substr(start));
        if (cols.size() != 5)
            throw std::runtime_error("malformed pairs line: " + line);
        clones::ClonePair p;
        p.query_id = cols[0];
        p.candidate_id = cols[1];
        p.mode = clones::mode_from_name(cols[2]);
        p.score = std::stod(cols[3]);
        p.is_clone = cols[4] == "true";
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void write_meta(const std::string& output_path, const RunConfig& cfg) {
    ordered_json j{{"config_hash", hex64(cfg.hash())}};
    write_file(output_path + ".meta.json", j.dump() + "\n");
}

void check_meta(const std::string& input_path, const RunConfig& cfg) {
    const std::string meta_path = input_path + ".meta.json";
    if (!fs::exists(input_path))
        throw std::runtime_error("missing stage input: " + input_path);
    if (!fs::exists(meta_path))
        throw std::runtime_error("missing stage metadata: " + meta_path);
    const json j = json::parse(read_file(meta_path));
    const std::string have = j.at("config_hash").get<std::string>();
    if (have != hex64(cfg.hash()))
        throw std::runtime_error("config hash mismatch for " + input_path +
                                 ": input built under a different configuration");
}

void cmd_ingest(const std::string& root, const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    const auto scan = ingest::scan_tree(root, cfg.include_globs, cfg.project_id);
    std::vector<ingest::MethodDefinition> methods;
    std::vector<std::string> diagnostics = scan.warnings;
    for (const auto& file : scan.files) {
        auto extracted = ingest::extract_methods(file, cfg.lwk, &diagnostics);
        methods.insert(methods.end(), std::make_move_iterator(extracted.begin()),
                       std::make_move_iterator(extracted.end()));
    }
    const std::string path = join_path(cfg.out_dir, "methods.jsonl");
    write_methods(methods, path);
    write_meta(path, cfg);
    for (const auto& d : diagnostics) std::fprintf(stderr, "ingest: %s\n", d.c_str());
}

void cmd_features(const RunConfig& cfg) {
    cfg.validate();
    const std::string methods_path = join_path(cfg.out_dir, "methods.jsonl");
    check_meta(methods_path, cfg);
    const auto methods = read_methods(methods_path, cfg.lwk);
    const auto entries = entries_by_id(methods);

    const std::string path = join_path(cfg.out_dir, "features.jsonl");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    const auto emit = [&out](const features::FeatureVector& v) {
        ordered_json j{{"method_id", v.method_id},
                       {"mode", v.mode == features::Mode::Raw ? "raw" : "log_aware"},
                       {"elps", v.elps},
                       {"ntok", v.ntok},
                       {"nos", v.nos},
                       {"nexp", v.nexp},
                       {"lmet", v.lmet},
                       {"xmet", v.xmet},
                       {"sloc", v.sloc},
                       {"lwk", std::vector<std::string>(v.lwk.begin(), v.lwk.end())}};
        out << j.dump() << '\n';
    };
    for (const auto& [id, entry] : entries) {
        emit(entry.raw);
        emit(entry.log_aware);
    }
    out.close();
    write_meta(path, cfg);
}

void cmd_detect(const RunConfig& cfg, clones::Mode mode) {
    cfg.validate();
    const std::string methods_path = join_path(cfg.out_dir, "methods.jsonl");
    check_meta(methods_path, cfg);
    const std::string features_path = join_path(cfg.out_dir, "features.jsonl");
    check_meta(features_path, cfg);
    const auto methods = read_methods(methods_path, cfg.lwk);
    const auto entries = entries_by_id(methods);

    std::vector<const clones::MethodEntry*> ordered;
    for (const auto& [id, e] : entries) ordered.push_back(&e);

    std::vector<clones::ClonePair> pairs;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        for (std::size_t j = i + 1; j < ordered.size(); ++j) {
            const clones::MethodEntry& a = *ordered[i];
            const clones::MethodEntry& b = *ordered[j];
            const long sa = a.stripped.sloc(), sb = b.stripped.sloc();
            if (std::max(sa, sb) >
                static_cast<long>(std::floor(cfg.detector.sloc_ratio_filter *
                                             static_cast<double>(std::min(sa, sb)))))
                continue;
            pairs.push_back(clones::is_clone_pair(a, b, mode, cfg.detector));
        }
    }
    const std::string path = join_path(cfg.out_dir, "pairs.csv");
    write_pairs(pairs, path);
    write_meta(path, cfg);
}

void cmd_corpus(const RunConfig& cfg) {
    cfg.validate();
    const std::string methods_path = join_path(cfg.out_dir, "methods.jsonl");
    const std::string pairs_path = join_path(cfg.out_dir, "pairs.csv");
    check_meta(methods_path, cfg);
    check_meta(pairs_path, cfg);
    const auto methods = read_methods(methods_path, cfg.lwk);
    std::map<std::string, const ingest::MethodDefinition*> by_id;
    for (const auto& m : methods) by_id[m.id] = &m;

    std::vector<corpus::OrientedPair> oriented;
    for (const auto& p : read_pairs(pairs_path)) {
        if (!p.is_clone) continue;
        const auto qi = by_id.find(p.query_id), ci = by_id.find(p.candidate_id);
        if (qi == by_id.end() || ci == by_id.end())
            throw std::runtime_error("pairs.csv references unknown method");
        const ingest::MethodDefinition* a = qi->second;
        const ingest::MethodDefinition* b = ci->second;
        const bool a_logged = !a->log_statements.empty();
        const bool b_logged = !b->log_statements.empty();
        if (!a_logged && !b_logged) continue; // nothing to borrow either way
        // train side must carry an LPS; when both do, the lexicographically
        // smaller id trains so each unordered pair contributes exactly once
        const ingest::MethodDefinition* train = a;
        const ingest::MethodDefinition* test = b;
        if (!a_logged || (b_logged && b->id < a->id)) std::swap(train, test);
        corpus::OrientedPair op;
        op.pair = p;
        op.pair.query_id = train->id;
        op.pair.candidate_id = test->id;
        op.train_side = train;
        op.test_side = test;
        oriented.push_back(op);
    }

    const auto split = corpus::build_splits(oriented, cfg.corpus);
    const auto vocab = corpus::build_vocabulary(split.train, cfg.corpus.min_count);
    const std::string train_path = join_path(cfg.out_dir, "lsd_train.txt");
    const std::string test_path = join_path(cfg.out_dir, "lsd_test.jsonl");
    const std::string vocab_path = join_path(cfg.out_dir, "vocab.tsv");
    corpus::write_train(split.train, train_path);
    corpus::write_test(split.test_cases, test_path);
    corpus::write_vocab(vocab, vocab_path);
    write_meta(train_path, cfg);
    write_meta(test_path, cfg);
    write_meta(vocab_path, cfg);
}

void cmd_train(const RunConfig& cfg) {
    cfg.validate();
    const std::string train_path = join_path(cfg.out_dir, "lsd_train.txt");
    const std::string vocab_path = join_path(cfg.out_dir, "vocab.tsv");
    check_meta(train_path, cfg);
    check_meta(vocab_path, cfg);
    const auto train = corpus::read_train(train_path);
    const auto vocab = corpus::read_vocab(vocab_path);
    const std::string model_path = join_path(cfg.out_dir, "model.lm");
    if (cfg.model_kind == "ngram") {
        lm::NgramModel::train(train, vocab, cfg.ngram_order, cfg.ngram_k)
            .save(model_path);
    } else {
        lm::LmHyperparams hp = cfg.lm;
        hp.seed = cfg.seed;
        lm::RecurrentModel::train(train, vocab, hp).save(model_path);
    }
    write_meta(model_path, cfg);
}

void cmd_suggest(const std::string& snippet_path, const RunConfig& cfg,
                 std::string* rendered) {
    cfg.validate();
    const std::string methods_path = join_path(cfg.out_dir, "methods.jsonl");
    check_meta(methods_path, cfg);

    ingest::SourceFile snippet;
    snippet.path = snippet_path;
    snippet.content = read_file(snippet_path);
    snippet.project_id = "query";
    const auto query_methods = ingest::extract_methods(snippet, cfg.lwk);
    if (query_methods.empty())
        throw std::runtime_error("no method found in " + snippet_path);
    const auto query_locals = ingest::local_method_names(query_methods);
    const auto query = clones::MethodEntry::build(query_methods.front(), query_locals);

    clones::MethodIndex index;
    for (auto& [id, entry] : entries_by_id(read_methods(methods_path, cfg.lwk)))
        index.add(entry);
    index.build();

    const auto suggestion =
        clones::suggest_log_location(query, index, clones::Mode::Full, cfg.detector);

    ordered_json evidence = ordered_json::array();
    for (const auto& p : suggestion.evidence)
        evidence.push_back({{"candidate_id", p.candidate_id},
                            {"score", std::stod(score6(p.score))}});

    ordered_json candidates = ordered_json::array();
    if (suggestion.needs_log) {
        const clones::MethodEntry* donor = nullptr;
        for (const auto& p : suggestion.evidence) {
            const clones::MethodEntry* e = index.find(p.candidate_id);
            if (e && e->has_logs()) {
                donor = e;
                break;
            }
        }
        if (donor) {
            corpus::TestCase tc;
            tc.pair.query_id = query.method.id;
            tc.pair.candidate_id = donor->method.id;
            tc.seed_lsd =
                corpus::extract_lsd(donor->method.log_statements.front(), cfg.corpus);
            const std::string model_path = join_path(cfg.out_dir, "model.lm");
            if (fs::exists(model_path)) {
                check_meta(model_path, cfg);
                const auto model = lm::load_model(model_path, corpus::read_vocab(
                                                      join_path(cfg.out_dir, "vocab.tsv")));
                for (const auto& cand :
                     lm::suggest_lsd(tc, *model, lm::SuggestVariant::Nlp3))
                    candidates.push_back(cand.tokens);
            } else {
                candidates.push_back(tc.seed_lsd.tokens); // no model: borrow verbatim
            }
        }
    }

    ordered_json doc{{"query_id", query.method.id},
                     {"needs_log", suggestion.needs_log},
                     {"query_had_logs", suggestion.query_had_logs},
                     {"evidence", std::move(evidence)},
                     {"lsd_candidates", std::move(candidates)}};
    const std::string doc_text = doc.dump(2) + "\n";
    const std::string path = join_path(cfg.out_dir, "suggestion.json");
    write_file(path, doc_text);
    write_meta(path, cfg);
    if (rendered) *rendered = doc_text;
}

void cmd_evaluate(const RunConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::string methods_path = join_path(cfg.out_dir, "methods.jsonl");
    const std::string test_path = join_path(cfg.out_dir, "lsd_test.jsonl");
    const std::string train_path = join_path(cfg.out_dir, "lsd_train.txt");
    const std::string vocab_path = join_path(cfg.out_dir, "vocab.tsv");
    const std::string model_path = join_path(cfg.out_dir, "model.lm");
    for (const auto& p : {methods_path, test_path, train_path, vocab_path, model_path})
        check_meta(p, cfg);

    const auto methods = read_methods(methods_path, cfg.lwk);
    const auto gt = eval::build_ground_truth(methods, cfg.detector);
    for (const auto& w : gt.warnings) std::fprintf(stderr, "evaluate: %s\n", w.c_str());

    eval::ScoreReport report;
    report.config_hash = cfg.hash();
    report.seed = cfg.seed;
    report.location = eval::run_location_experiment(
        gt, methods,
        {clones::Mode::Raw, clones::Mode::SiOnly, clones::Mode::Full});

    corpus::CorpusSplit split;
    split.train = corpus::read_train(train_path);
    split.test_cases = corpus::read_test(test_path);
    const auto vocab = corpus::read_vocab(vocab_path);
    const auto model = lm::load_model(model_path, vocab);
    const auto desc = eval::run_description_experiment(
        split, *model,
        {lm::SuggestVariant::NoNlp, lm::SuggestVariant::Nlp1, lm::SuggestVariant::Nlp3});
    report.description = desc.description;
    report.improvement = desc.improvement;

    std::map<std::string, const ingest::MethodDefinition*> by_id;
    for (const auto& m : methods) by_id[m.id] = &m;
    std::vector<std::pair<const ingest::MethodDefinition*,
                          const ingest::MethodDefinition*>> lvl_pairs;
    for (const auto& [a, b] : gt.positive_pairs) lvl_pairs.emplace_back(by_id.at(a), by_id.at(b));
    report.lvl_match = eval::lvl_match_rate(lvl_pairs);

    const std::string csv_path = join_path(cfg.out_dir, "report.csv");
    const std::string md_path = join_path(cfg.out_dir, "report.md");
    write_file(csv_path, eval::render_report(report, eval::ReportFormat::Csv));
    write_file(md_path, eval::render_report(report, eval::ReportFormat::Markdown));
    write_meta(csv_path, cfg);
    write_meta(md_path, cfg);

    const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
    ordered_json run{{"config_hash", hex64(cfg.hash())},
                     {"seed", cfg.seed},
                     {"corpus_hashes",
                      ordered_json{{"methods.jsonl", hex64(fnv1a(read_file(methods_path)))},
                                   {"lsd_train.txt", hex64(fnv1a(read_file(train_path)))},
                                   {"lsd_test.jsonl", hex64(fnv1a(read_file(test_path)))},
                                   {"vocab.tsv", hex64(fnv1a(read_file(vocab_path)))},
                                   {"model.lm", hex64(fnv1a(read_file(model_path)))}}},
                     {"timings", ordered_json{{"evaluate_ms", elapsed_ms}}}};
    write_file(join_path(cfg.out_dir, "run.json"), run.dump(2) + "\n");
}

void run_pipeline(const std::string& root, const RunConfig& cfg) {
    cmd_ingest(root, cfg);
    cmd_features(cfg);
    cmd_detect(cfg, clones::Mode::Full);
    cmd_corpus(cfg);
    cmd_train(cfg);
    cmd_evaluate(cfg);
}

} // namespace logclone::pipeline
