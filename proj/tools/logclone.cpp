#include "logclone/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

logclone::pipeline::RunConfig make_config(const std::string& config_path,
                                          const std::string& profile,
                                          const std::string& out_dir,
                                          unsigned long long seed, bool seed_set) {
    logclone::pipeline::RunConfig cfg;
    if (!config_path.empty())
        cfg = logclone::pipeline::RunConfig::load(config_path);
    if (!profile.empty()) cfg.apply_profile(profile);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) cfg.seed = seed;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"log-aware clone detection and log-description suggestion toolkit"};
    app.require_subcommand(1);

    std::string config_path, profile, out_dir, root, mode = "full", snippet;
    unsigned long long seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();
    app.add_option("--profile", profile, "hyperparameter profile: desk|paper");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "run seed")->each([&seed_set](const std::string&) {
        seed_set = true;
    });

    auto* ingest = app.add_subcommand("ingest", "extract methods from a source tree");
    ingest->add_option("--root", root, "source tree root")->required();

    app.add_subcommand("features", "compute raw and log-aware feature vectors");

    auto* detect = app.add_subcommand("detect", "score candidate clone pairs");
    detect->add_option("--mode", mode, "raw|si_only|full")->capture_default_str();

    app.add_subcommand("corpus", "build the LSD train/test split and vocabulary");
    app.add_subcommand("train", "train the configured language model");

    auto* suggest = app.add_subcommand("suggest", "suggest a log location and LSDs");
    suggest->add_option("--method", snippet, "file containing the query method")
        ->required();

    app.add_subcommand("evaluate", "run the experiments and render reports");

    auto* run = app.add_subcommand("run", "full pipeline: ingest through evaluate");
    run->add_option("--root", root, "source tree root")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = make_config(config_path, profile, out_dir, seed, seed_set);
        if (ingest->parsed()) {
            logclone::pipeline::cmd_ingest(root, cfg);
        } else if (app.get_subcommand("features")->parsed()) {
            logclone::pipeline::cmd_features(cfg);
        } else if (detect->parsed()) {
            logclone::pipeline::cmd_detect(cfg, logclone::clones::mode_from_name(mode));
        } else if (app.get_subcommand("corpus")->parsed()) {
            logclone::pipeline::cmd_corpus(cfg);
        } else if (app.get_subcommand("train")->parsed()) {
            logclone::pipeline::cmd_train(cfg);
        } else if (suggest->parsed()) {
            std::string rendered;
            logclone::pipeline::cmd_suggest(snippet, cfg, &rendered);
            std::fputs(rendered.c_str(), stdout);
        } else if (app.get_subcommand("evaluate")->parsed()) {
            logclone::pipeline::cmd_evaluate(cfg);
        } else if (run->parsed()) {
            logclone::pipeline::run_pipeline(root, cfg);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"%s\"}\n", e.what());
        return 1;
    }
    return 0;
}
