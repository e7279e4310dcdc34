#include "logclone/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace logclone::eval {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt2(const std::optional<double>& v) { return v ? fmt2(*v) : std::string(); }

// Entries keyed by method id, with local names resolved per compilation unit.
std::map<std::string, clones::MethodEntry> build_entries(
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

GroundTruthSet build_ground_truth(const std::vector<ingest::MethodDefinition>& methods,
                                  const clones::DetectorConfig& cfg) {
    cfg.validate();
    GroundTruthSet gt;
    gt.config = cfg;

    std::vector<ingest::MethodDefinition> logged;
    for (const auto& m : methods)
        if (!m.log_statements.empty()) logged.push_back(m);
    if (logged.size() < 2) {
        gt.warnings.push_back("ground truth needs >= 2 logged methods, have " +
                              std::to_string(logged.size()));
        return gt;
    }

    auto entries = build_entries(logged);
    std::vector<const clones::MethodEntry*> ordered;
    for (const auto& [id, e] : entries) ordered.push_back(&e);

    for (std::size_t i = 0; i < ordered.size(); ++i) {
        for (std::size_t j = i + 1; j < ordered.size(); ++j) {
            const clones::MethodEntry& a = *ordered[i];
            const clones::MethodEntry& b = *ordered[j];
            const long sa = a.stripped.sloc(), sb = b.stripped.sloc();
            if (std::max(sa, sb) >
                static_cast<long>(std::floor(cfg.sloc_ratio_filter *
                                             static_cast<double>(std::min(sa, sb)))))
                continue; // outside the size band: not a labeled pair
            const auto pair =
                clones::is_clone_pair(a.stripped, b.stripped, clones::Mode::Full, cfg,
                                      a.local_names, b.local_names);
            auto& bucket = pair.is_clone ? gt.positive_pairs : gt.negative_pairs;
            bucket.emplace_back(a.method.id, b.method.id);
        }
    }
    if (gt.empty())
        gt.warnings.push_back("no logged method pair fell inside the sloc band");
    return gt;
}

std::map<clones::Mode, metrics::ConfusionMatrix> run_location_experiment(
    const GroundTruthSet& gt, const std::vector<ingest::MethodDefinition>& methods,
    const std::vector<clones::Mode>& modes) {
    if (gt.empty()) throw std::runtime_error("location experiment: empty ground truth");

    const auto entries = build_entries(methods);
    const auto entry_of = [&entries](const std::string& id) -> const clones::MethodEntry& {
        const auto it = entries.find(id);
        if (it == entries.end())
            throw std::runtime_error("location experiment: unknown method id " + id);
        return it->second;
    };

    std::map<clones::Mode, metrics::ConfusionMatrix> result;
    for (const clones::Mode mode : modes) {
        metrics::ConfusionMatrix m;
        const auto tally = [&](const std::pair<std::string, std::string>& ids,
                               bool label_positive) {
            const clones::MethodEntry& query = entry_of(ids.first); // MD_i, logs kept
            const clones::MethodEntry& cand = entry_of(ids.second);
            const auto stripped_cand = clones::MethodEntry::build(
                ingest::strip_logs(cand.method), cand.local_names);
            const bool detected =
                clones::is_clone_pair(query, stripped_cand, mode, gt.config).is_clone;
            if (label_positive)
                ++(detected ? m.tp : m.fn);
            else
                ++(detected ? m.fp : m.tn);
        };
        for (const auto& ids : gt.positive_pairs) tally(ids, true);
        for (const auto& ids : gt.negative_pairs) tally(ids, false);
        result[mode] = m;
    }
    return result;
}

ScoreReport run_description_experiment(const corpus::CorpusSplit& split,
                                       const lm::LanguageModel& model,
                                       const std::vector<lm::SuggestVariant>& variants) {
    if (split.test_cases.empty())
        throw std::runtime_error("description experiment: no test cases");
    if (variants.empty())
        throw std::runtime_error("description experiment: no variants");

    ScoreReport report;
    for (const lm::SuggestVariant variant : variants) {
        VariantScores totals;
        long rouge_defined[3] = {0, 0, 0};
        double rouge_sum[3] = {0.0, 0.0, 0.0};
        for (const auto& tc : split.test_cases) {
            const auto candidates = lm::suggest_lsd(tc, model, variant);
            if (candidates.empty())
                throw std::runtime_error("suggest_lsd returned no candidates");
            const auto& ref = tc.reference_lsd.tokens;
            // per metric, the best candidate counts
            double best_bleu[4] = {0.0, 0.0, 0.0, 0.0};
            std::optional<double> best_rouge[3];
            double best_rouge_l = 0.0;
            for (const auto& cand : candidates) {
                for (int n = 1; n <= 4; ++n)
                    best_bleu[n - 1] =
                        std::max(best_bleu[n - 1],
                                 metrics::bleu(cand.tokens, ref,
                                               metrics::BleuConfig::cumulative(n)));
                for (int n = 1; n <= 3; ++n) {
                    const auto r = metrics::rouge_n(cand.tokens, ref, n);
                    if (r && (!best_rouge[n - 1] || *r > *best_rouge[n - 1]))
                        best_rouge[n - 1] = r;
                }
                best_rouge_l = std::max(best_rouge_l, metrics::rouge_l(cand.tokens, ref));
            }
            ++totals.cases;
            totals.bleu_1 += best_bleu[0];
            totals.bleu_2 += best_bleu[1];
            totals.bleu_3 += best_bleu[2];
            totals.bleu_4 += best_bleu[3];
            for (int n = 0; n < 3; ++n) {
                if (best_rouge[n]) {
                    rouge_sum[n] += *best_rouge[n];
                    ++rouge_defined[n];
                }
            }
            totals.rouge_l += best_rouge_l;
        }
        const double count = static_cast<double>(totals.cases);
        totals.bleu_1 /= count;
        totals.bleu_2 /= count;
        totals.bleu_3 /= count;
        totals.bleu_4 /= count;
        if (rouge_defined[0] > 0) totals.rouge_1 = rouge_sum[0] / rouge_defined[0];
        if (rouge_defined[1] > 0) totals.rouge_2 = rouge_sum[1] / rouge_defined[1];
        if (rouge_defined[2] > 0) totals.rouge_3 = rouge_sum[2] / rouge_defined[2];
        totals.rouge_l /= count;
        report.description[variant] = totals;
    }

    const auto base_it = report.description.find(lm::SuggestVariant::NoNlp);
    if (base_it != report.description.end()) {
        const VariantScores& base = base_it->second;
        const auto pct = [](double value, double baseline) {
            return (value - baseline) / baseline * 100.0;
        };
        for (const auto& [variant, scores] : report.description) {
            if (variant == lm::SuggestVariant::NoNlp) continue;
            std::map<std::string, double>& imp = report.improvement[variant];
            if (base.bleu_1 > 0.0) imp["bleu_1"] = pct(scores.bleu_1, base.bleu_1);
            if (base.bleu_2 > 0.0) imp["bleu_2"] = pct(scores.bleu_2, base.bleu_2);
            if (base.bleu_3 > 0.0) imp["bleu_3"] = pct(scores.bleu_3, base.bleu_3);
            if (base.bleu_4 > 0.0) imp["bleu_4"] = pct(scores.bleu_4, base.bleu_4);
            if (base.rouge_1 && *base.rouge_1 > 0.0 && scores.rouge_1)
                imp["rouge_1"] = pct(*scores.rouge_1, *base.rouge_1);
            if (base.rouge_2 && *base.rouge_2 > 0.0 && scores.rouge_2)
                imp["rouge_2"] = pct(*scores.rouge_2, *base.rouge_2);
            if (base.rouge_3 && *base.rouge_3 > 0.0 && scores.rouge_3)
                imp["rouge_3"] = pct(*scores.rouge_3, *base.rouge_3);
            if (base.rouge_l > 0.0) imp["rouge_l"] = pct(scores.rouge_l, base.rouge_l);
        }
    }
    return report;
}

std::optional<double> lvl_match_rate(
    const std::vector<std::pair<const ingest::MethodDefinition*,
                                const ingest::MethodDefinition*>>& pairs) {
    if (pairs.empty()) return std::nullopt;
    long matched = 0;
    for (const auto& [a, b] : pairs) {
        if (!a || !b || a->log_statements.empty() || b->log_statements.empty())
            throw std::runtime_error("lvl_match_rate: pair without log statements");
        if (a->log_statements.front().level == b->log_statements.front().level)
            ++matched;
    }
    return static_cast<double>(matched) / static_cast<double>(pairs.size());
}

namespace {

struct StatRow {
    std::string mode;
    const metrics::ConfusionMatrix* m;
    metrics::ConfusionStats stats;
};

std::vector<StatRow> location_rows(const ScoreReport& r) {
    std::vector<StatRow> rows;
    for (const auto& [mode, matrix] : r.location)
        rows.push_back({clones::mode_name(mode), &matrix, metrics::confusion_stats(matrix)});
    return rows;
}

std::string pct(const std::optional<double>& fraction) {
    return fraction ? fmt2(*fraction * 100.0) : std::string();
}

} // namespace

std::string render_report(const ScoreReport& r, ReportFormat format) {
    if (r.location.empty() && r.description.empty())
        throw std::runtime_error("render_report: nothing to report");

    std::ostringstream out;
    const bool md = format == ReportFormat::Markdown;

    if (!r.location.empty()) {
        if (md) {
            out << "## Location experiment\n\n"
                << "| mode | tp | tn | fp | fn | precision | recall | f_measure | "
                   "balanced_accuracy |\n"
                << "| --- | --- | --- | --- | --- | --- | --- | --- | --- |\n";
        } else {
            out << "section,mode,tp,tn,fp,fn,precision,recall,f_measure,"
                   "balanced_accuracy\n";
        }
        for (const auto& row : location_rows(r)) {
            const auto& m = *row.m;
            if (md) {
                out << "| " << row.mode << " | " << m.tp << " | " << m.tn << " | "
                    << m.fp << " | " << m.fn << " | " << pct(row.stats.precision)
                    << " | " << pct(row.stats.recall) << " | "
                    << pct(row.stats.f_measure) << " | "
                    << pct(row.stats.balanced_accuracy) << " |\n";
            } else {
                out << "location," << row.mode << ',' << m.tp << ',' << m.tn << ','
                    << m.fp << ',' << m.fn << ',' << pct(row.stats.precision) << ','
                    << pct(row.stats.recall) << ',' << pct(row.stats.f_measure) << ','
                    << pct(row.stats.balanced_accuracy) << '\n';
            }
        }
        out << '\n';
    }

    if (!r.description.empty()) {
        if (md) {
            out << "## Description experiment\n\n"
                << "| variant | cases | B-1 | B-2 | B-3 | B-4 | R-1 | R-2 | R-3 | R-L "
                   "|\n"
                << "| --- | --- | --- | --- | --- | --- | --- | --- | --- | --- |\n";
        } else {
            out << "section,variant,cases,bleu_1,bleu_2,bleu_3,bleu_4,rouge_1,rouge_2,"
                   "rouge_3,rouge_l\n";
        }
        for (const auto& [variant, s] : r.description) {
            const char* name = lm::variant_name(variant);
            if (md) {
                out << "| " << name << " | " << s.cases << " | " << fmt2(s.bleu_1)
                    << " | " << fmt2(s.bleu_2) << " | " << fmt2(s.bleu_3) << " | "
                    << fmt2(s.bleu_4) << " | " << fmt2(s.rouge_1) << " | "
                    << fmt2(s.rouge_2) << " | " << fmt2(s.rouge_3) << " | "
                    << fmt2(s.rouge_l) << " |\n";
            } else {
                out << "description," << name << ',' << s.cases << ',' << fmt2(s.bleu_1)
                    << ',' << fmt2(s.bleu_2) << ',' << fmt2(s.bleu_3) << ','
                    << fmt2(s.bleu_4) << ',' << fmt2(s.rouge_1) << ','
                    << fmt2(s.rouge_2) << ',' << fmt2(s.rouge_3) << ','
                    << fmt2(s.rouge_l) << '\n';
            }
        }
        out << '\n';
    }

    if (!r.improvement.empty()) {
        if (md) {
            out << "## Improvement over no_nlp (%)\n\n"
                << "| variant | metric | improvement |\n| --- | --- | --- |\n";
        } else {
            out << "section,variant,metric,improvement_pct\n";
        }
        for (const auto& [variant, metrics_map] : r.improvement) {
            for (const auto& [metric, value] : metrics_map) {
                if (md)
                    out << "| " << lm::variant_name(variant) << " | " << metric
                        << " | " << fmt2(value) << " |\n";
                else
                    out << "improvement," << lm::variant_name(variant) << ',' << metric
                        << ',' << fmt2(value) << '\n';
            }
        }
        out << '\n';
    }

    if (r.lvl_match) {
        if (md)
            out << "## Verbosity\n\nlvl_match_rate: " << fmt2(*r.lvl_match) << "\n\n";
        else
            out << "section,value\nlvl_match," << fmt2(*r.lvl_match) << "\n\n";
    }

    return out.str();
}

} // namespace logclone::eval
