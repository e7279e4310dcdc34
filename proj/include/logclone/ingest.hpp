#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace logclone::ingest {

struct SourceFile {
    std::filesystem::path path;
    std::string content;
    std::string project_id;
};

enum class TokenKind { Identifier, Keyword, Number, String, Char, Punct };

struct Token {
    std::string text;   // string/char literals keep their raw content, quotes stripped
    int line = 0;       // 1-based line in the source file
    TokenKind kind = TokenKind::Punct;
};

struct LogStatement {
    std::string wrapper;                     // matched call target, e.g. "LOG.debug"
    std::string level;                       // trace|debug|info|warn|error|fatal|unknown
    std::string description_raw;             // concatenated string-literal text, no quotes
    std::vector<std::string> argument_exprs; // non-literal argument expression texts
    int start_line = 0;
    int end_line = 0;
    std::size_t token_begin = 0; // [begin, end) range into the owning method's body_tokens
    std::size_t token_end = 0;
};

struct MethodDefinition {
    std::string id;
    std::string project;
    std::string path;
    std::string signature;
    std::vector<Token> body_tokens; // tokens between the method's braces, exclusive
    int start_line = 0;             // signature line
    int end_line = 0;               // closing-brace line
    std::vector<LogStatement> log_statements;

    /// Body text rebuilt from tokens: space-joined, newline on line change.
    std::string body_text() const;
    int sloc() const { return end_line - start_line + 1; }
    bool is_stripped() const { return !id.empty() && id.back() == '\''; }
};

struct LwkConfig {
    std::vector<std::string> receivers{"log", "logger", "mylogger"}; // case-insensitive
    bool bare_log_call = false; // also match `log(...)` without a receiver
};

struct ScanResult {
    std::vector<SourceFile> files;
    std::vector<std::string> warnings; // skipped/undecodable files
};

ScanResult scan_tree(const std::filesystem::path& root,
                     const std::vector<std::string>& include_globs,
                     const std::string& project_id = "");

/// Java surface tokenizer: comments dropped, string escapes kept raw.
std::vector<Token> tokenize(const std::string& source);

std::vector<MethodDefinition> extract_methods(const SourceFile& file,
                                              const LwkConfig& lwk = {},
                                              std::vector<std::string>* diagnostics = nullptr);

std::vector<LogStatement> detect_log_statements(std::span<const Token> body_tokens,
                                                const LwkConfig& lwk);

/// MD' variant: log statements removed, id gains a prime marker. Idempotent.
MethodDefinition strip_logs(const MethodDefinition& method);

/// Names of all methods declared in the same compilation unit.
std::set<std::string> local_method_names(const std::vector<MethodDefinition>& methods);

} // namespace logclone::ingest
