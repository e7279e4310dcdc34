#include "logclone/features.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace logclone::features {

using ingest::MethodDefinition;
using ingest::Token;
using ingest::TokenKind;

namespace {

const std::unordered_set<std::string>& control_headers() {
    // statement headers counted by NOS; return/throw end in ';' and are
    // covered by the semicolon count
    static const std::unordered_set<std::string> kw{
        "if", "else", "for", "while", "do", "switch", "try", "catch", "finally"};
    return kw;
}

const std::unordered_set<std::string>& condition_headers() {
    static const std::unordered_set<std::string> kw{"if", "while", "for", "switch"};
    return kw;
}

void split_literal_words(const std::string& literal, std::vector<std::string>& out) {
    std::string word;
    for (std::size_t i = 0; i < literal.size(); ++i) {
        const char c = literal[i];
        if (c == '\\') { // escape sequences are not words
            if (!word.empty()) out.push_back(std::exchange(word, {}));
            ++i;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            word += c;
        } else if (!word.empty()) {
            out.push_back(std::exchange(word, {}));
        }
    }
    if (!word.empty()) out.push_back(std::move(word));
}

} // namespace

std::vector<std::string> word_tokens(const MethodDefinition& method) {
    std::vector<std::string> words;
    for (const Token& t : method.body_tokens) {
        switch (t.kind) {
        case TokenKind::Identifier:
        case TokenKind::Keyword:
        case TokenKind::Number:
            words.push_back(t.text);
            break;
        case TokenKind::String:
        case TokenKind::Char:
            split_literal_words(t.text, words);
            break;
        case TokenKind::Punct:
            break;
        }
    }
    return words;
}

std::map<std::string, long> token_bag(const MethodDefinition& method) {
    std::map<std::string, long> bag;
    for (auto& w : word_tokens(method)) ++bag[w];
    return bag;
}

FeatureVector extract_features(const MethodDefinition& method,
                               const std::set<std::string>& local_names, Mode mode) {
    if (mode == Mode::LogAware) {
        FeatureVector v = extract_features(ingest::strip_logs(method), local_names, Mode::Raw);
        v.mode = Mode::LogAware;
        v.method_id = method.id;
        v.elps = false; // counts exclude log contributions, reported unlogged
        v.lwk.clear();
        return v;
    }

    FeatureVector v;
    v.mode = Mode::Raw;
    v.method_id = method.id;
    v.elps = !method.log_statements.empty();
    v.ntok = static_cast<long>(word_tokens(method).size());
    v.sloc = method.sloc();
    for (const auto& stmt : method.log_statements) v.lwk.insert(stmt.wrapper);

    const auto& toks = method.body_tokens;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.kind == TokenKind::Punct && t.text == ";") ++v.nos;
        if (t.kind == TokenKind::Keyword && control_headers().count(t.text)) ++v.nos;
        if (t.kind == TokenKind::Keyword && condition_headers().count(t.text)) ++v.nexp;
        if (t.kind == TokenKind::Identifier && i + 1 < toks.size() &&
            toks[i + 1].text == "(") {
            const bool ctor_call = i > 0 && toks[i - 1].text == "new";
            if (!ctor_call) {
                if (local_names.count(t.text)) ++v.lmet;
                else ++v.xmet;
            }
        }
    }

    // statement-level expressions: ';'-terminated statements holding an
    // assignment or a call
    int depth = 0;
    bool has_expr = false;
    for (const Token& t : toks) {
        if (t.kind == TokenKind::Punct) {
            if (t.text == "(") ++depth;
            else if (t.text == ")") --depth;
            else if (t.text == ";" && depth == 0) {
                if (has_expr) ++v.nexp;
                has_expr = false;
                continue;
            }
            if (t.text == "=" || t.text == "(" || t.text == "+=" || t.text == "-=" ||
                t.text == "*=" || t.text == "/=" || t.text == "++" || t.text == "--")
                has_expr = true;
        }
    }
    return v;
}

FeatureDelta feature_delta(const FeatureVector& a, const FeatureVector& b) {
    FeatureDelta d;
    d.ntok = a.ntok - b.ntok;
    d.nos = a.nos - b.nos;
    d.nexp = a.nexp - b.nexp;
    d.lmet = a.lmet - b.lmet;
    d.xmet = a.xmet - b.xmet;
    d.sloc = a.sloc - b.sloc;
    d.elps = {a.elps, b.elps};
    std::set_symmetric_difference(a.lwk.begin(), a.lwk.end(), b.lwk.begin(),
                                  b.lwk.end(),
                                  std::inserter(d.lwk_sym_diff, d.lwk_sym_diff.end()));
    return d;
}

} // namespace logclone::features
