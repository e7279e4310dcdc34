#pragma once

#include "logclone/clones.hpp"
#include "logclone/corpus.hpp"
#include "logclone/ingest.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline std::vector<logclone::ingest::MethodDefinition> methods_from_source(
    const std::string& source, const std::string& path = "Test.java",
    const logclone::ingest::LwkConfig& lwk = {}) {
    logclone::ingest::SourceFile file;
    file.path = path;
    file.content = source;
    file.project_id = "test";
    return logclone::ingest::extract_methods(file, lwk);
}

/// One method wrapped in a class; returns the extracted definition.
inline logclone::ingest::MethodDefinition make_method(const std::string& name,
                                                      const std::string& body) {
    std::string src = "public class Wrapper {\n  public void " + name + "(int arg) {\n";
    std::istringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) src += "    " + line + "\n";
    src += "  }\n}\n";
    auto methods = methods_from_source(src, name + ".java");
    if (methods.size() != 1) throw std::runtime_error("make_method: extraction failed");
    return methods.front();
}

inline logclone::corpus::LsdSequence make_lsd(const std::string& text,
                                              const std::string& method_id = "m",
                                              std::size_t stmt = 0,
                                              const std::string& level = "info") {
    logclone::corpus::LsdSequence seq;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) seq.tokens.push_back(tok);
    seq.tokens.push_back("<eos>");
    seq.origin_method = method_id;
    seq.origin_stmt = stmt;
    seq.origin_level = level;
    return seq;
}

/// Deterministic generator of plausible Java methods with optional logging,
/// used by the property tests.
class MethodGen {
public:
    explicit MethodGen(std::uint64_t seed) : rng_(seed) {}

    std::string body(int statements, int logs) {
        static const std::vector<std::string> stmts = {
            "int count = store.size();",
            "String key = entry.getKey();",
            "store.remove(key);",
            "Result result = client.fetch(key);",
            "result.apply(count);",
            "if (count == 0) {\nstore.reset();\n}",
            "buffer.append(key);",
            "long stamp = clock.now();",
            "registry.record(stamp, count);",
            "while (count > 0) {\ncount = count - 1;\n}",
            "client.close();",
            "Node node = graph.lookup(key);",
            "node.visit();",
        };
        static const std::vector<std::string> logs_pool = {
            "LOG.info(\"processing entry for key\");",
            "LOG.debug(\"fetched result from client\");",
            "logger.warn(\"store was empty during cleanup\");",
            "LOG.error(\"failed to record registry stamp\");",
            "LOG.debug(\"node visit count \" + count);",
            "logger.info(\"closing client connection now\");",
        };
        std::vector<std::string> chosen;
        for (int i = 0; i < statements; ++i) chosen.push_back(stmts[pick(stmts.size())]);
        for (int i = 0; i < logs; ++i) {
            const std::size_t at = pick(chosen.size() + 1);
            chosen.insert(chosen.begin() + static_cast<long>(at),
                          logs_pool[pick(logs_pool.size())]);
        }
        std::string out;
        for (const auto& s : chosen) out += s + "\n";
        return out;
    }

    logclone::ingest::MethodDefinition method(const std::string& name, int statements,
                                              int logs) {
        return make_method(name, body(statements, logs));
    }

    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace testutil
