#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "p300bench/config_io.hpp"
#include "p300bench/csv_import.hpp"
#include "p300bench/epb.hpp"
#include "p300bench/error.hpp"
#include "p300bench/evaluation.hpp"
#include "p300bench/report.hpp"
#include "p300bench/timing.hpp"
#include "run_config.hpp"

namespace p300::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string in;
    std::string labels;
    std::string out = ".";
    std::string model = "all";
    std::string window;
    std::optional<std::size_t> avg_max;
    std::size_t layer = 4;
    std::optional<std::size_t> threads;
    std::string checkpoint;
    CsvMeta meta;
};

struct Context {
    std::string command;
    Options opt;
    RunConfig cfg;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return fs::path(opt.out) / name;
    }
};

void write_json(const json& j, const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw_data("cannot write " + path.string());
    f << j.dump(2) << '\n';
    if (!f) throw_data("cannot write " + path.string());
}

EpochSet read_input(Context& ctx) {
    if (ctx.opt.in.empty()) throw_config("--in is required for '" + ctx.command + "'");
    ctx.inputs.push_back(ctx.opt.in);
    return read_epb(ctx.opt.in);
}

/// Train / validation split of a whole set for commands that fit once.
std::pair<EpochSet, EpochSet> train_val_split(const EpochSet& set, const RunConfig& cfg) {
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), 0);
    SeededRng(cfg.seed).child(0x7472).shuffle(std::span<std::size_t>(order));
    const auto n_val = static_cast<std::size_t>(cfg.splits.cv_val_fraction * static_cast<double>(set.size()));
    std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
    return {set.subset(train), set.subset(val)};
}

void progress(const std::string& note) { std::cerr << note << '\n'; }

// --- commands ----------------------------------------------------------------

void cmd_synth(Context& ctx) {
    const EpochSet set = synthesize(ctx.cfg.synth);
    write_epb(set, ctx.out("epochs.epb"));
    std::cerr << "synthesized " << set.size() << " epochs (" << set.count_label(1) << " targets)\n";
}

void cmd_import(Context& ctx) {
    if (ctx.opt.in.empty() || ctx.opt.labels.empty()) throw_config("import needs --in DATA.csv and --labels LABELS.csv");
    ctx.inputs = {ctx.opt.in, ctx.opt.labels};
    const EpochSet set = import_csv(ctx.opt.in, ctx.opt.labels, ctx.opt.meta);
    write_epb(set, ctx.out("epochs.epb"));
    std::cerr << "imported " << set.size() << " epochs\n";
}

void cmd_preprocess(Context& ctx) {
    const EpochSet raw = read_input(ctx);
    auto [clean, rep] = reject_artifacts(baseline_correct(raw, ctx.cfg.preprocess), ctx.cfg.preprocess);
    write_epb(clean, ctx.out("epochs.epb"));
    write_json({{"n_input", rep.n_input},
                {"n_rejected", rep.n_rejected},
                {"rejection_rate", rep.rejection_rate},
                {"threshold_uv", ctx.cfg.preprocess.rejection_threshold_uv},
                {"rejected_indices", rep.rejected_indices}},
               ctx.out("rejection.json"));
    std::cerr << "rejected " << rep.n_rejected << " of " << rep.n_input << " epochs\n";
}

void cmd_features(Context& ctx) {
    const EpochSet set = read_input(ctx);
    write_features_csv(extract_features(set, ctx.cfg.features), ctx.out("features.csv"));
}

void cmd_train(Context& ctx) {
    const EpochSet set = read_input(ctx);
    const auto [train, val] = train_val_split(set, ctx.cfg);
    json summary = json::array();
    const auto models = ctx.cfg.select_models(ctx.opt.model);
    for (std::size_t m = 0; m < models.size(); ++m) {
        const Pipeline p = Pipeline::fit(models[m], train, val, model_rng(ctx.cfg.seed, 0, m));
        p.save(ctx.out("model-" + models[m].name + ".json"));
        if (const CnnModel* cnn = p.cnn()) write_training_log_csv(cnn->training_log, ctx.out("training_log-" + models[m].name + ".csv"));
        summary.push_back({{"model", models[m].name},
                           {"n_train", train.size()},
                           {"n_val", val.size()},
                           {"validation", val.size() ? to_json(p.evaluate(val)) : json()},
                           {"warnings", p.warnings}});
    }
    write_json(summary, ctx.out("train_summary.json"));
}

void run_eval(Context& ctx, bool averaging) {
    const EpochSet set = read_input(ctx);
    EvalOptions opt;
    opt.threads = ctx.cfg.threads;
    if (averaging) opt.averaging = ctx.cfg.averaging;
    // The thread count does not change results, so it stays out of the report.
    opt.config_snapshot = to_json(ctx.cfg);
    opt.config_snapshot.erase("threads");
    opt.progress = progress;
    const EvalReport report = run_benchmark(set, ctx.cfg.select_models(ctx.opt.model), ctx.cfg.splits, opt);
    for (const auto& f : write_report(report, ctx.opt.out)) ctx.outputs.push_back(f);
    write_json(train_times_json(report), ctx.out("train_times.json"));
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

void cmd_eval(Context& ctx) { run_eval(ctx, ctx.opt.avg_max.has_value()); }
void cmd_avg_eval(Context& ctx) { run_eval(ctx, true); }

void cmd_inspect(Context& ctx) {
    const EpochSet set = read_input(ctx);
    SplitPlan plan = ctx.cfg.splits;
    plan.cv_iterations = 1;
    const Splits sp = make_splits(set, plan);

    std::optional<Pipeline> pipeline;
    if (!ctx.opt.checkpoint.empty()) {
        ctx.inputs.push_back(ctx.opt.checkpoint);
        pipeline = Pipeline::load(ctx.opt.checkpoint);
        if (!pipeline->cnn()) throw_config("inspect needs a CNN checkpoint");
    } else {
        const ModelSpec spec = ctx.cfg.select_models("cnn").front();
        pipeline = Pipeline::fit(spec, set.subset(sp.folds[0].train), set.subset(sp.folds[0].val),
                                 model_rng(ctx.cfg.seed, 0, 0));
        pipeline->save(ctx.out("model-" + spec.name + ".json"));
    }
    const CnnModel& cnn = *pipeline->cnn();
    const EpochSet holdout = set.subset(sp.holdout);

    json summary = {{"layer", ctx.opt.layer}, {"n_holdout", holdout.size()}};
    std::optional<LayerMap> maps[2];
    for (Label l : {Label{1}, Label{0}}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < holdout.size(); ++i)
            if (holdout.labels[i] == l) idx.push_back(i);
        if (idx.empty()) continue;
        maps[l] = layer_outputs(cnn, batch_from_epochs(holdout.subset(idx)), ctx.opt.layer);
        const std::string tag = l ? "target" : "nontarget";
        write_layer_map_csv(*maps[l], ctx.out("layer" + std::to_string(ctx.opt.layer) + "_" + tag + ".csv"));
        summary["n_" + tag] = idx.size();
    }
    if (maps[0] && maps[1]) {
        // Largest class difference relative to the pooled within-class spread.
        double max_diff = 0.0, max_z = 0.0;
        const auto& t = *maps[1];
        const auto& n = *maps[0];
        for (std::size_t i = 0; i < t.mean.data().size(); ++i) {
            const double d = std::abs(t.mean.data()[i] - n.mean.data()[i]);
            const double sd = std::max(t.stddev.data()[i], n.stddev.data()[i]);
            max_diff = std::max(max_diff, d);
            if (sd > 0.0) max_z = std::max(max_z, d / sd);
        }
        summary["rows"] = t.mean.rows();
        summary["cols"] = t.mean.cols();
        summary["max_abs_difference"] = max_diff;
        summary["max_difference_over_sd"] = max_z;
    }
    write_json(summary, ctx.out("layer_maps.json"));
}

void cmd_bench(Context& ctx) {
    const EpochSet set = read_input(ctx);
    SplitPlan plan = ctx.cfg.splits;
    plan.cv_iterations = 1;
    const Splits sp = make_splits(set, plan);
    TimingOptions opt;
    opt.predict_calls = ctx.cfg.predict_calls;
    opt.seed = ctx.cfg.seed;
    const TimingReport t = bench_timing(ctx.cfg.select_models(ctx.opt.model), set.subset(sp.folds[0].train),
                                        set.subset(sp.folds[0].val), set.subset(sp.holdout), opt);
    write_json(to_json(t), ctx.out("timing.json"));
    for (const auto& m : t.models)
        std::cerr << m.model << ": train " << m.train_seconds << " s, predict median " << m.predict_median_ms
                  << " ms\n";
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::config: return "config";
        case ErrorKind::data: return "data";
        case ErrorKind::runtime: return "runtime";
    }
    return "runtime";
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::config: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::runtime: return 4;
    }
    return 4;
}

int report_error(const std::string& stage, ErrorKind kind, std::string message) {
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::fprintf(stderr, "p300bench error: stage=%s kind=%s message=%s\n", stage.c_str(), kind_name(kind),
                 message.c_str());
    return exit_code(kind);
}

void add_common(CLI::App* sub, Options& o, bool needs_in) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
    auto* in = sub->add_option("--in", o.in, "Input EPB file");
    if (needs_in) in->required();
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads, 0 = one per hardware thread");
}

void add_models(CLI::App* sub, Options& o) {
    sub->add_option("--model", o.model, "Classifier selection")
        ->check(CLI::IsMember({"lda", "svm", "cnn", "all"}))
        ->capture_default_str();
    sub->add_option("--window", o.window, "Windowed-means window START-END in ms, e.g. 300-1000");
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"P300 single-trial classification benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.footer("Configuration keys (JSON, all optional) and their defaults:\n" + describe_config_keys() +
               "\nExit codes: 0 ok, 2 configuration error, 3 data error, 4 runtime error.");

    Options o;
    struct Cmd {
        const char* name;
        const char* help;
        void (*run)(Context&);
        bool needs_in;
        bool models;
    };
    const Cmd cmds[] = {
        {"synth", "Generate a synthetic P300 epoch set", cmd_synth, false, false},
        {"import", "Convert delimited text (one epoch per row) to EPB", cmd_import, true, false},
        {"preprocess", "Baseline-correct and reject artifacts", cmd_preprocess, true, false},
        {"features", "Export windowed-means features as CSV", cmd_features, true, true},
        {"train", "Fit models once and save them", cmd_train, true, true},
        {"eval", "Holdout plus Monte-Carlo cross-validation", cmd_eval, true, true},
        {"avg-eval", "Like eval, plus accuracy on averaged holdout epochs", cmd_avg_eval, true, true},
        {"inspect", "Average CNN layer outputs for targets and non-targets", cmd_inspect, true, true},
        {"bench", "Training time and per-pattern prediction latency", cmd_bench, true, true},
    };
    std::vector<std::pair<CLI::App*, const Cmd*>> subs;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, o, c.needs_in);
        if (c.models) add_models(sub, o);
        subs.emplace_back(sub, &c);
    }
    for (auto& [sub, c] : subs) {
        const std::string name = c->name;
        if (name == "eval" || name == "avg-eval") sub->add_option("--avg-max", o.avg_max, "Largest averaging factor k");
        if (name == "inspect") {
            sub->add_option("--layer", o.layer, "Logical CNN layer to average (4 = pooling)")->capture_default_str();
            sub->add_option("--checkpoint", o.checkpoint, "Saved CNN model instead of training one");
        }
        if (name == "import") {
            sub->add_option("--labels", o.labels, "Label file, one 0/1 (and optional subject id) per line")->required();
            sub->add_option("--channels", o.meta.n_channels)->capture_default_str();
            sub->add_option("--samples", o.meta.n_samples)->capture_default_str();
            sub->add_option("--rate", o.meta.sampling_rate_hz, "Sampling rate in Hz")->capture_default_str();
            sub->add_option("--prestim", o.meta.prestim_ms, "Prestimulus length in ms")->capture_default_str();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("arguments", ErrorKind::config, e.what());
    }

    const Cmd* chosen = nullptr;
    for (auto& [sub, c] : subs)
        if (sub->parsed()) chosen = c;

    Context ctx;
    ctx.command = chosen->name;
    ctx.opt = o;
    try {
        if (!o.config.empty()) {
            ctx.cfg = load_run_config(o.config);
            ctx.inputs.push_back(o.config);
        }
        if (o.seed) ctx.cfg.seed = *o.seed;
        if (o.threads) ctx.cfg.threads = *o.threads;
        if (o.avg_max) ctx.cfg.averaging.k_max = *o.avg_max;
        if (!o.window.empty()) {
            ctx.cfg.features = parse_window(o.window, ctx.cfg.features);
            for (auto& m : ctx.cfg.models) m.features = parse_window(o.window, m.features);
        }
        ctx.cfg.resolve();
        ctx.cfg.validate();

        std::error_code ec;
        fs::create_directories(o.out, ec);
        if (ec) throw_data("cannot create output directory " + o.out + ": " + ec.message());

        chosen->run(ctx);

        std::vector<std::string> args(argv + 1, argv + argc);
        write_json({{"tool", "p300bench"},
                    {"version", kVersion},
                    {"command", ctx.command},
                    {"arguments", args},
                    {"seed", ctx.cfg.seed},
                    {"inputs", ctx.inputs},
                    {"outputs", ctx.outputs},
                    {"config", to_json(ctx.cfg)}},
                   fs::path(o.out) / "run-manifest.json");
    } catch (const Error& e) {
        return report_error(ctx.command, e.kind(), e.what());
    } catch (const fs::filesystem_error& e) {
        return report_error(ctx.command, ErrorKind::data, e.what());
    } catch (const std::exception& e) {
        return report_error(ctx.command, ErrorKind::runtime, e.what());
    }
    return 0;
}

}  // namespace p300::cli
