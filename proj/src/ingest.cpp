#include "logclone/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace logclone::ingest {

namespace {

const std::unordered_set<std::string>& java_keywords() {
    static const std::unordered_set<std::string> kw{
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
        "class", "const", "continue", "default", "do", "double", "else", "enum",
        "extends", "final", "finally", "float", "for", "goto", "if", "implements",
        "import", "instanceof", "int", "interface", "long", "native", "new",
        "package", "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while"};
    return kw;
}

// Names that can never start a method header.
const std::unordered_set<std::string>& statement_keywords() {
    static const std::unordered_set<std::string> kw{
        "if", "for", "while", "switch", "catch", "new", "return", "super", "this",
        "do", "synchronized", "throw", "assert", "case"};
    return kw;
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

constexpr std::array<const char*, 24> kMultiCharOps{
    ">>>=", "<<=", ">>=", ">>>", "...", "==", "!=", "<=", ">=", "&&", "||",
    "++",   "--",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "->",
    "::",   "<<"};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool glob_match(const std::string& pat, const std::string& text) {
    // iterative glob with * and ?
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

std::size_t find_matching(const std::vector<Token>& toks, std::size_t open,
                          const char* open_c, const char* close_c) {
    int depth = 0;
    for (std::size_t i = open; i < toks.size(); ++i) {
        if (toks[i].kind == TokenKind::Punct) {
            if (toks[i].text == open_c) ++depth;
            else if (toks[i].text == close_c && --depth == 0) return i;
        }
    }
    return std::string::npos;
}

} // namespace

std::string MethodDefinition::body_text() const {
    std::string out;
    int line = body_tokens.empty() ? 0 : body_tokens.front().line;
    for (const Token& t : body_tokens) {
        if (!out.empty()) out += (t.line != line) ? '\n' : ' ';
        line = t.line;
        if (t.kind == TokenKind::String) {
            out += '"' + t.text + '"';
        } else if (t.kind == TokenKind::Char) {
            out += '\'' + t.text + '\'';
        } else {
            out += t.text;
        }
    }
    return out;
}

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> toks;
    int line = 1;
    std::size_t i = 0;
    const std::size_t n = source.size();
    while (i < n) {
        char c = source[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(source[i] == '*' && source[i + 1] == '/')) {
                if (source[i] == '\n') ++line;
                ++i;
            }
            i = (i + 1 < n) ? i + 2 : n;
            continue;
        }
        if (c == '"' || c == '\'') {
            const char quote = c;
            std::string text;
            ++i;
            while (i < n && source[i] != quote) {
                if (source[i] == '\\' && i + 1 < n) {
                    text += source[i];
                    text += source[i + 1];
                    i += 2;
                    continue;
                }
                if (source[i] == '\n') ++line; // unterminated literal, keep going
                text += source[i++];
            }
            if (i < n) ++i; // closing quote
            toks.push_back({text, line,
                            quote == '"' ? TokenKind::String : TokenKind::Char});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (i < n && (std::isalnum(static_cast<unsigned char>(source[i])) ||
                             source[i] == '.' || source[i] == '_')) {
                // stop at '.' not followed by a digit (method call on literal)
                if (source[i] == '.' &&
                    !(i + 1 < n && std::isdigit(static_cast<unsigned char>(source[i + 1]))))
                    break;
                text += source[i++];
            }
            toks.push_back({text, line, TokenKind::Number});
            continue;
        }
        if (is_ident_start(c)) {
            std::string text;
            while (i < n && is_ident_char(source[i])) text += source[i++];
            toks.push_back({text, line,
                            java_keywords().count(text) ? TokenKind::Keyword
                                                        : TokenKind::Identifier});
            continue;
        }
        bool matched = false;
        for (const char* op : kMultiCharOps) {
            const std::size_t len = std::strlen(op);
            if (source.compare(i, len, op) == 0) {
                toks.push_back({op, line, TokenKind::Punct});
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            toks.push_back({std::string(1, c), line, TokenKind::Punct});
            ++i;
        }
    }
    return toks;
}

ScanResult scan_tree(const std::filesystem::path& root,
                     const std::vector<std::string>& include_globs,
                     const std::string& project_id) {
    namespace fs = std::filesystem;
    if (!fs::exists(root) || !fs::is_directory(root))
        throw std::runtime_error("scan_tree: unreadable root: " + root.string());
    const std::string project =
        project_id.empty() ? root.filename().string() : project_id;

    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        for (const auto& glob : include_globs) {
            if (glob_match(glob, name)) {
                paths.push_back(entry.path());
                break;
            }
        }
    }
    std::sort(paths.begin(), paths.end(),
              [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });

    ScanResult result;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            result.warnings.push_back("unreadable file skipped: " + p.string());
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string content = buf.str();
        if (content.find('\0') != std::string::npos) {
            result.warnings.push_back("undecodable file skipped: " + p.string());
            continue;
        }
        result.files.push_back({p, std::move(content), project});
    }
    return result;
}

std::vector<LogStatement> detect_log_statements(std::span<const Token> body,
                                                const LwkConfig& lwk) {
    static const std::unordered_set<std::string> levels{"trace", "debug", "info",
                                                        "warn",  "error", "fatal"};
    std::unordered_set<std::string> receivers;
    for (const auto& r : lwk.receivers) receivers.insert(lower(r));

    std::vector<LogStatement> found;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i].kind != TokenKind::Identifier) continue;
        std::size_t call_open = 0; // index of '('
        LogStatement stmt;
        if (i + 3 < body.size() && receivers.count(lower(body[i].text)) &&
            body[i + 1].text == "." && body[i + 2].kind == TokenKind::Identifier &&
            body[i + 3].text == "(") {
            const std::string level = lower(body[i + 2].text);
            if (!levels.count(level) && !(lwk.bare_log_call && level == "log")) continue;
            stmt.wrapper = body[i].text + "." + body[i + 2].text;
            stmt.level = levels.count(level) ? level : "unknown";
            call_open = i + 3;
        } else if (lwk.bare_log_call && i + 1 < body.size() &&
                   lower(body[i].text) == "log" && body[i + 1].text == "(" &&
                   (i == 0 || body[i - 1].text != ".")) {
            stmt.wrapper = body[i].text;
            stmt.level = "unknown";
            call_open = i + 1;
        } else {
            continue;
        }

        // argument list between call_open and its matching ')'
        int depth = 0;
        std::size_t close = std::string::npos;
        for (std::size_t j = call_open; j < body.size(); ++j) {
            if (body[j].text == "(" && body[j].kind == TokenKind::Punct) ++depth;
            else if (body[j].text == ")" && body[j].kind == TokenKind::Punct && --depth == 0) {
                close = j;
                break;
            }
        }
        if (close == std::string::npos) {
            stmt.level = "unknown";
            stmt.description_raw.clear();
            stmt.argument_exprs.clear();
            stmt.start_line = body[i].line;
            stmt.end_line = body.back().line;
            stmt.token_begin = i;
            stmt.token_end = body.size();
            found.push_back(std::move(stmt));
            break;
        }

        // split args at depth 1 by ',' then by '+'
        std::vector<std::pair<std::size_t, std::size_t>> operands; // [b,e)
        std::size_t seg = call_open + 1;
        int d = 0;
        for (std::size_t j = call_open + 1; j <= close; ++j) {
            const Token& t = body[j];
            const bool top = (d == 0);
            if (t.kind == TokenKind::Punct) {
                if (t.text == "(" || t.text == "[") ++d;
                else if (t.text == ")" || t.text == "]") --d;
            }
            const bool split = (j == close) || (top && t.kind == TokenKind::Punct &&
                                                (t.text == "," || t.text == "+"));
            if (split && j >= seg) {
                if (j > seg) operands.emplace_back(seg, j);
                seg = j + 1;
            }
        }
        for (const auto& [b, e] : operands) {
            if (e - b == 1 && body[b].kind == TokenKind::String) {
                stmt.description_raw += body[b].text;
                continue;
            }
            std::string expr;
            for (std::size_t j = b; j < e; ++j) {
                const Token& t = body[j];
                const bool word = t.kind != TokenKind::Punct;
                if (!expr.empty() && word &&
                    is_ident_char(expr.back())) expr += ' ';
                if (t.kind == TokenKind::String) expr += '"' + t.text + '"';
                else if (t.kind == TokenKind::Char) expr += '\'' + t.text + '\'';
                else expr += t.text;
            }
            if (!expr.empty()) stmt.argument_exprs.push_back(std::move(expr));
        }

        // statement runs to the terminating ';' at paren depth 0
        std::size_t end = close + 1;
        while (end < body.size() && body[end].text != ";") ++end;
        if (end < body.size()) ++end; // include ';'
        stmt.start_line = body[i].line;
        stmt.end_line = body[end - 1].line;
        stmt.token_begin = i;
        stmt.token_end = end;
        found.push_back(std::move(stmt));
        i = end - 1;
    }
    return found;
}

std::vector<MethodDefinition> extract_methods(const SourceFile& file,
                                              const LwkConfig& lwk,
                                              std::vector<std::string>* diagnostics) {
    const std::vector<Token> toks = tokenize(file.content);
    std::vector<MethodDefinition> methods;

    auto type_like = [](const Token& t) {
        if (t.kind == TokenKind::Identifier) return true;
        if (t.kind == TokenKind::Keyword)
            return !statement_keywords().count(t.text) && t.text != "class" &&
                   t.text != "interface" && t.text != "enum" && t.text != "package" &&
                   t.text != "import" && t.text != "extends" && t.text != "implements";
        return t.text == ">" || t.text == ">>" || t.text == "]";
    };

    std::size_t i = 0;
    while (i < toks.size()) {
        const Token& t = toks[i];
        if (t.kind != TokenKind::Identifier || statement_keywords().count(t.text) ||
            i + 1 >= toks.size() || toks[i + 1].text != "(") {
            ++i;
            continue;
        }
        if (i == 0 || !type_like(toks[i - 1]) || toks[i - 1].text == ".") {
            ++i;
            continue;
        }
        const std::size_t close = find_matching(toks, i + 1, "(", ")");
        if (close == std::string::npos) {
            ++i;
            continue;
        }
        std::size_t j = close + 1;
        if (j < toks.size() && toks[j].text == "throws") {
            ++j;
            while (j < toks.size() &&
                   (toks[j].kind == TokenKind::Identifier || toks[j].text == "." ||
                    toks[j].text == ","))
                ++j;
        }
        if (j >= toks.size() || toks[j].text != "{") {
            ++i;
            continue;
        }
        const std::size_t body_close = find_matching(toks, j, "{", "}");
        if (body_close == std::string::npos) {
            if (diagnostics)
                diagnostics->push_back("unbalanced braces at EOF, file skipped: " +
                                       file.path.string());
            return {};
        }

        // signature: walk back over modifiers, type tokens and annotations
        std::size_t sig_begin = i;
        while (sig_begin > 0) {
            const Token& p = toks[sig_begin - 1];
            const bool part = type_like(p) || p.text == "<" || p.text == "," ||
                              p.text == "[" || p.text == "@";
            if (!part) break;
            --sig_begin;
        }
        MethodDefinition md;
        {
            std::string sig;
            for (std::size_t k = sig_begin; k <= close; ++k) {
                const Token& s = toks[k];
                if (!sig.empty() && s.kind != TokenKind::Punct &&
                    is_ident_char(sig.back()))
                    sig += ' ';
                sig += s.text;
            }
            md.signature = sig;
        }
        md.project = file.project_id;
        md.path = file.path.generic_string();
        md.start_line = toks[i].line;
        md.end_line = toks[body_close].line;
        md.body_tokens.assign(toks.begin() + static_cast<long>(j) + 1,
                              toks.begin() + static_cast<long>(body_close));
        {
            char hash[17];
            std::snprintf(hash, sizeof hash, "%08x",
                          static_cast<unsigned>(fnv1a(md.signature) & 0xffffffffu));
            md.id = md.project + ":" + md.path + ":" + std::to_string(md.start_line) +
                    ":" + hash;
        }
        md.log_statements = detect_log_statements(md.body_tokens, lwk);
        methods.push_back(std::move(md));
        i = body_close + 1;
    }
    return methods;
}

MethodDefinition strip_logs(const MethodDefinition& method) {
    MethodDefinition out;
    out.project = method.project;
    out.path = method.path;
    out.signature = method.signature;
    out.start_line = method.start_line;
    out.id = method.is_stripped() ? method.id : method.id + "'";

    std::vector<bool> in_log(method.body_tokens.size(), false);
    for (const auto& stmt : method.log_statements)
        for (std::size_t k = stmt.token_begin; k < stmt.token_end && k < in_log.size(); ++k)
            in_log[k] = true;

    // lines whose body tokens are all log tokens disappear from the span
    std::map<int, std::pair<int, int>> per_line; // line -> (total, log)
    for (std::size_t k = 0; k < method.body_tokens.size(); ++k) {
        auto& [total, logs] = per_line[method.body_tokens[k].line];
        ++total;
        if (in_log[k]) ++logs;
    }
    std::vector<int> removed_lines;
    for (const auto& [line, counts] : per_line)
        if (counts.first == counts.second && counts.first > 0)
            removed_lines.push_back(line);

    auto shift = [&removed_lines](int line) {
        const auto it = std::lower_bound(removed_lines.begin(), removed_lines.end(), line);
        return line - static_cast<int>(it - removed_lines.begin());
    };
    for (std::size_t k = 0; k < method.body_tokens.size(); ++k) {
        if (in_log[k]) continue;
        Token t = method.body_tokens[k];
        t.line = shift(t.line);
        out.body_tokens.push_back(std::move(t));
    }
    out.end_line = shift(method.end_line);
    return out;
}

std::set<std::string> local_method_names(const std::vector<MethodDefinition>& methods) {
    std::set<std::string> names;
    for (const auto& m : methods) {
        // method name: identifier immediately before the first '(' in the signature
        const std::vector<Token> sig = tokenize(m.signature);
        for (std::size_t i = 1; i < sig.size(); ++i)
            if (sig[i].text == "(" && sig[i - 1].kind == TokenKind::Identifier) {
                names.insert(sig[i - 1].text);
                break;
            }
    }
    return names;
}

} // namespace logclone::ingest
