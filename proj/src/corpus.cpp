#include "logclone/corpus.hpp"

#include "logclone/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace logclone::corpus {

namespace {

// decode the escape sequences a Java string literal can carry; non-printable
// results and unicode escapes outside printable ASCII are dropped
std::string decode_literal(const std::string& raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c != '\\') {
            if (c >= 0x20 && c < 0x7f) out += c;
            continue; // non-ASCII / control bytes removed
        }
        if (i + 1 >= raw.size()) break;
        const char esc = raw[++i];
        switch (esc) {
        case 'n': case 't': case 'r': case 'f': case 'b':
            out += ' ';
            break;
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case 'u': {
            unsigned code = 0;
            std::size_t digits = 0;
            while (digits < 4 && i + 1 < raw.size() &&
                   std::isxdigit(static_cast<unsigned char>(raw[i + 1]))) {
                code = code * 16 +
                       static_cast<unsigned>(
                           std::stoul(std::string(1, raw[++i]), nullptr, 16));
                ++digits;
            }
            if (code >= 0x20 && code < 0x7f) out += static_cast<char>(code);
            break;
        }
        default: break; // unknown escape dropped
        }
    }
    return out;
}

void remove_placeholders(std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find("{}", pos)) != std::string::npos) text.erase(pos, 2);
}

} // namespace

LsdSequence extract_lsd(const ingest::LogStatement& stmt, const CorpusConfig& cfg) {
    std::string text = decode_literal(stmt.description_raw);
    remove_placeholders(text);

    LsdSequence seq;
    seq.origin_level = stmt.level;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) seq.tokens.push_back(std::exchange(word, {}));
    };
    for (const char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            word += cfg.lowercase
                        ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                        : c;
        } else {
            flush();
            if (!std::isspace(static_cast<unsigned char>(c)))
                seq.tokens.emplace_back(1, c); // punctuation as standalone token
        }
    }
    flush();
    seq.empty_after_cleaning = seq.tokens.empty();
    seq.tokens.push_back(metrics::kEndMarker);
    return seq;
}

CorpusSplit build_splits(const std::vector<OrientedPair>& pairs, const CorpusConfig& cfg) {
    CorpusSplit split;
    std::set<std::string> train_seen; // for identity dedup across shared train sides

    auto lsds_of = [&cfg](const ingest::MethodDefinition& md) {
        std::vector<LsdSequence> out;
        for (std::size_t s = 0; s < md.log_statements.size(); ++s) {
            LsdSequence seq = extract_lsd(md.log_statements[s], cfg);
            seq.origin_method = md.id;
            seq.origin_stmt = s;
            out.push_back(std::move(seq));
        }
        return out;
    };

    for (const OrientedPair& p : pairs) {
        if (!p.train_side || !p.test_side)
            throw std::runtime_error("build_splits: pair without methods");
        const auto train_lsds = lsds_of(*p.train_side);
        if (train_lsds.empty())
            throw std::runtime_error("build_splits: train-side method has no LPS: " +
                                     p.train_side->id);
        for (const LsdSequence& seq : train_lsds) {
            if (seq.empty_after_cleaning) continue;
            if (!train_seen.insert(seq.identity()).second) continue;
            if (cfg.dedup_train) {
                const auto same_tokens = [&seq](const LsdSequence& t) {
                    return t.tokens == seq.tokens;
                };
                if (std::any_of(split.train.begin(), split.train.end(), same_tokens))
                    continue;
            }
            split.train.push_back(seq);
        }
        const auto test_lsds = lsds_of(*p.test_side);
        for (std::size_t s = 0; s < test_lsds.size(); ++s) {
            if (test_lsds[s].empty_after_cleaning) continue;
            TestCase tc;
            tc.pair = p.pair;
            tc.reference_lsd = test_lsds[s];
            // ordinal pairing; the first train LSD seeds any extras
            tc.seed_lsd = s < train_lsds.size() ? train_lsds[s] : train_lsds.front();
            split.test_cases.push_back(std::move(tc));
        }
    }

    // mutual exclusivity: no reference identity may appear in train
    std::set<std::string> reference_ids;
    for (const auto& tc : split.test_cases)
        reference_ids.insert(tc.reference_lsd.identity());
    std::erase_if(split.train, [&reference_ids](const LsdSequence& seq) {
        return reference_ids.count(seq.identity()) > 0;
    });
    return split;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) index_[tokens_[i]] = i;
}

int Vocabulary::index_of(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_at(int index) const {
    return tokens_.at(static_cast<std::size_t>(index));
}

std::uint64_t Vocabulary::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& t : tokens_) {
        for (unsigned char c : t) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(index_of(t));
    return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (const int id : ids) tokens.push_back(token_at(id));
    return tokens;
}

Vocabulary build_vocabulary(const std::vector<LsdSequence>& train, long min_count) {
    std::map<std::string, long> counts;
    for (const auto& seq : train)
        for (const auto& t : seq.tokens)
            if (t != metrics::kEndMarker) ++counts[t];
    if (counts.empty())
        throw std::runtime_error("build_vocabulary: no usable training tokens");

    std::vector<std::pair<std::string, long>> kept(counts.begin(), counts.end());
    std::erase_if(kept, [min_count](const auto& e) { return e.second < min_count; });
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second; // frequency desc
        return a.first < b.first;                             // then lexicographic
    });

    std::vector<std::string> tokens{metrics::kEndMarker, "<unk>"};
    for (auto& [token, count] : kept) tokens.push_back(token);
    Vocabulary vocab(std::move(tokens));
    vocab.set_counts(std::move(counts));
    return vocab;
}

namespace {

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

nlohmann::ordered_json lsd_to_json(const LsdSequence& seq) {
    return {{"tokens", seq.tokens},
            {"method", seq.origin_method},
            {"stmt", seq.origin_stmt},
            {"level", seq.origin_level}};
}

LsdSequence lsd_from_json(const nlohmann::json& j) {
    LsdSequence seq;
    seq.tokens = j.at("tokens").get<std::vector<std::string>>();
    seq.origin_method = j.at("method").get<std::string>();
    seq.origin_stmt = j.at("stmt").get<std::size_t>();
    seq.origin_level = j.at("level").get<std::string>();
    return seq;
}

} // namespace

void write_train(const std::vector<LsdSequence>& train, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& seq : train) out << join(seq.tokens) << '\n';
}

std::vector<LsdSequence> read_train(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<LsdSequence> train;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LsdSequence seq;
        seq.tokens = split_ws(line);
        train.push_back(std::move(seq));
    }
    return train;
}

void write_test(const std::vector<TestCase>& cases, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& tc : cases) {
        nlohmann::ordered_json j{{"query_id", tc.pair.query_id},
                                 {"candidate_id", tc.pair.candidate_id},
                                 {"score", tc.pair.score},
                                 {"seed", lsd_to_json(tc.seed_lsd)},
                                 {"reference", lsd_to_json(tc.reference_lsd)}};
        out << j.dump() << '\n';
    }
}

std::vector<TestCase> read_test(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<TestCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        TestCase tc;
        tc.pair.query_id = j.at("query_id").get<std::string>();
        tc.pair.candidate_id = j.at("candidate_id").get<std::string>();
        tc.pair.score = j.at("score").get<double>();
        tc.seed_lsd = lsd_from_json(j.at("seed"));
        tc.reference_lsd = lsd_from_json(j.at("reference"));
        cases.push_back(std::move(tc));
    }
    return cases;
}

void write_vocab(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int i = 0; i < vocab.size(); ++i) {
        const std::string& token = vocab.token_at(i);
        long count = 0;
        const auto it = vocab.counts().find(token);
        if (it != vocab.counts().end()) count = it->second;
        out << token << '\t' << i << '\t' << count << '\n';
    }
}

Vocabulary read_vocab(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<std::string> tokens;
    std::map<std::string, long> counts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw std::runtime_error("malformed vocab line: " + line);
        const std::string token = line.substr(0, tab1);
        tokens.push_back(token);
        const long count = std::stol(line.substr(tab2 + 1));
        if (count > 0) counts[token] = count; // reserved slots carry count 0
    }
    Vocabulary vocab(std::move(tokens));
    vocab.set_counts(std::move(counts));
    return vocab;
}

} // namespace logclone::corpus
