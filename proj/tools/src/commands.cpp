/// @file commands.cpp

#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "digest.hpp"
#include "kld/baselines.hpp"
#include "kld/error.hpp"
#include "kld/evaluation.hpp"
#include "kld/report.hpp"
#include "kld/stream.hpp"

#ifndef KLD_VERSION
#define KLD_VERSION "0.0.0"
#endif

namespace kld::cli {

using json = nlohmann::ordered_json;

namespace {

// Flat JSON object of long option names; CLI flags win over file values.
// Keys are scoped to the subcommand parsed from the command line.
class ConfigJson final : public CLI::Config {
public:
    explicit ConfigJson(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable() || opt->get_lnames().empty()) {
                continue;
            }
            const auto& name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& results = opt->results();
                j[name] = results.size() == 1 ? json(results.front()) : json(results);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw CLI::ConversionError("config file must hold a JSON object");
        }
        std::vector<std::string> parents;
        for (const CLI::App* sub : root_->get_subcommands()) {
            parents.push_back(sub->get_name());
        }
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) {
                    item.inputs.push_back(scalar(v));
                }
            } else if (!value.is_null()) {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    const CLI::App* root_;

    static std::string scalar(const json& v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_object() || v.is_array()) {
            throw CLI::ConversionError("config values must be scalars or lists of scalars");
        }
        return v.dump();
    }
};

// ---------------------------------------------------------------------------
// Inputs and outputs

// Output file or the caller's stream, hashed as it is written.
class Sink {
public:
    Sink(std::string path, std::ostream& out) : path_(std::move(path)) {
        std::streambuf* target = out.rdbuf();
        if (path_ != "-") {
            file_.open(path_, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw DataError("cannot write '" + path_ + "'");
            }
            target = file_.rdbuf();
        }
        buf_ = std::make_unique<HashingStreambuf>(target);
        stream_ = std::make_unique<std::ostream>(buf_.get());
    }

    std::ostream& stream() { return *stream_; }

    json finish() {
        stream_->flush();
        if (file_.is_open()) {
            file_.close();
            if (!file_) {
                throw DataError("failed writing '" + path_ + "'");
            }
        }
        return {{"path", path_}, {"sha256", buf_->hex()}};
    }

private:
    std::string path_;
    std::ofstream file_;
    std::unique_ptr<HashingStreambuf> buf_;
    std::unique_ptr<std::ostream> stream_;
};

// Input file or buffered standard input; may be opened more than once.
class Source {
public:
    Source(std::string path, std::istream& in) : path_(std::move(path)) {
        if (path_ == "-") {
            data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
            digest_ = sha256_hex(data_);
        } else {
            digest_ = sha256_file(path_);
        }
    }

    [[nodiscard]] std::unique_ptr<std::istream> open() const {
        if (path_ == "-") {
            return std::make_unique<std::istringstream>(data_);
        }
        auto f = std::make_unique<std::ifstream>(path_, std::ios::binary);
        if (!*f) {
            throw DataError("cannot read '" + path_ + "'");
        }
        return f;
    }

    [[nodiscard]] json record() const { return {{"path", path_}, {"sha256", digest_}}; }

private:
    std::string path_;
    std::string data_;
    std::string digest_;
};

struct Context {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    json inputs = json::array();
    json outputs = json::array();
};

std::vector<std::size_t> parse_truth(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string::npos ? text.size() : comma;
        std::size_t v = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || p != last) {
            throw UsageError("cannot parse --truth '" + text + "' (expected comma-separated chunk indices)");
        }
        out.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] <= out[i - 1]) {
            throw UsageError("--truth indices must be strictly increasing");
        }
    }
    return out;
}

StreamMeta resolve_meta(std::istream& s, const StreamInput& opt) {
    StreamMeta meta;
    if (auto header = CsvRecordSource::read_header(s)) {
        meta = *header;
        auto check = [](const std::optional<std::size_t>& flag, std::size_t value, const char* name) {
            if (flag && *flag != value) {
                throw UsageError(std::string("--") + name + " " + std::to_string(*flag) +
                                 " conflicts with the stream header value " + std::to_string(value));
            }
        };
        check(opt.features, meta.dim, "features");
        check(opt.classes, meta.classes, "classes");
        check(opt.chunk_size, meta.chunk_size, "chunk-size");
    } else {
        if (!opt.features || !opt.chunk_size) {
            throw UsageError("input has no '# p= L= K= drifts=' header; pass --features and --chunk-size");
        }
        meta.dim = *opt.features;
        meta.classes = opt.classes.value_or(2);
        meta.chunk_size = *opt.chunk_size;
        meta.truth_known = false;
    }
    if (opt.truth) {
        meta.ground_truth = parse_truth(*opt.truth);
        meta.truth_known = true;
    }
    meta.validate();
    return meta;
}

DriftReport run_detection(const Source& source, const StreamInput& input, const DetectorConfig& config,
                          const std::string& mode, std::ostream& err) {
    config.validate();
    std::optional<Bounds> bounds;
    if (config.grid_scope == GridScope::global) {
        // Pre-pass so the single grid spans the whole stream.
        auto s = source.open();
        const auto meta = resolve_meta(*s, input);
        CsvRecordSource records(*s, meta);
        Chunker chunks(records, meta);
        Bounds b;
        while (auto c = chunks.next()) {
            extend_bounds(b, *c);
        }
        if (!b.empty()) {
            bounds = std::move(b);
        }
    }

    auto s = source.open();
    const auto meta = resolve_meta(*s, input);
    CsvRecordSource records(*s, meta);
    Chunker chunks(records, meta);

    bool online = config.smoother.causal();
    if (mode == "online") {
        if (!online) {
            throw UsageError("online mode needs a moving-average smoother");
        }
    } else if (mode == "batch") {
        online = false;
    } else if (mode != "auto") {
        throw UsageError("unknown mode '" + mode + "' (expected auto, online or batch)");
    }

    DriftReport report;
    if (online) {
        report = detect_online(chunks, config, bounds);
    } else {
        const auto all = collect(chunks);
        report = detect_batch(all, meta, config, bounds);
        report.dropped_records = chunks.dropped();
    }
    if (report.rows.size() < 2) {
        throw DataError("stream holds " + std::to_string(report.chunks_seen) +
                        " complete chunk(s); at least three are needed for a gradient");
    }
    if (report.dropped_records > 0) {
        err << "kld: warning: dropped " << report.dropped_records << " trailing record(s) of a partial chunk\n";
    }
    if (!report.diagnostics.empty()) {
        err << "kld: warning: " << report.diagnostics.size()
            << " chunk pair(s) had no comparable bins; see report diagnostics\n";
    }
    return report;
}

std::vector<std::size_t> require_truth(const StreamMeta& meta, const std::optional<std::string>& truth) {
    if (truth) {
        return parse_truth(*truth);
    }
    if (!meta.truth_known) {
        throw UsageError("no ground truth available; pass --truth <c1,c2,...> (empty for a stationary stream)");
    }
    return meta.ground_truth;
}

// ---------------------------------------------------------------------------
// Option (de)serialization for manifests

json optional_json(const auto& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

json to_json(const StreamInput& s) {
    return {{"path", s.path},
            {"features", optional_json(s.features)},
            {"classes", optional_json(s.classes)},
            {"chunk_size", optional_json(s.chunk_size)},
            {"truth", optional_json(s.truth)}};
}

StreamInput stream_input_from(const json& j) {
    StreamInput s;
    s.path = j.at("path").get<std::string>();
    s.features = optional_from<std::size_t>(j, "features");
    s.classes = optional_from<std::size_t>(j, "classes");
    s.chunk_size = optional_from<std::size_t>(j, "chunk_size");
    s.truth = optional_from<std::string>(j, "truth");
    return s;
}

json to_json(const GenerateOptions& o) { return {{"generator", kld::to_json(o.generator)}, {"output", o.output}}; }

json to_json(const DetectOptions& o) {
    return {{"input", to_json(o.input)},   {"detector", kld::to_json(o.detector)},
            {"mode", o.mode},              {"report", o.report},
            {"distances", o.distances},    {"plot_data", o.plot_data}};
}

json to_json(const EvaluateOptions& o) {
    return {{"report", o.report},         {"truth", optional_json(o.truth)}, {"tolerance", o.tolerance},
            {"baselines", o.baselines},   {"output", o.output},              {"json", o.json}};
}

json to_json(const SweepOptions& o) {
    return {{"input", to_json(o.input)}, {"detector", kld::to_json(o.detector)},
            {"alphas", o.alphas},        {"tolerance", o.tolerance},
            {"output", o.output},        {"json", o.json}};
}

// ---------------------------------------------------------------------------
// Commands

void write_json(const std::string& path, const json& j, Context& ctx) {
    Sink sink(path, ctx.out);
    sink.stream() << j.dump(2) << '\n';
    ctx.outputs.push_back(sink.finish());
}

void cmd_generate(const GenerateOptions& o, Context& ctx) {
    StreamGenerator gen(o.generator);
    Sink sink(o.output, ctx.out);
    write_stream(sink.stream(), gen.meta(), gen);
    ctx.outputs.push_back(sink.finish());
}

void cmd_detect(const DetectOptions& o, Context& ctx) {
    Source source(o.input.path, ctx.in);
    ctx.inputs.push_back(source.record());
    const auto report = run_detection(source, o.input, o.detector, o.mode, ctx.err);
    write_json(o.report, kld::to_json(report), ctx);
    if (!o.distances.empty()) {
        Sink sink(o.distances, ctx.out);
        write_distances_csv(sink.stream(), report);
        ctx.outputs.push_back(sink.finish());
    }
    if (!o.plot_data.empty()) {
        Sink sink(o.plot_data, ctx.out);
        write_series_csv(sink.stream(), report);
        ctx.outputs.push_back(sink.finish());
    }
    if (o.report != "-") {
        ctx.err << "kld: " << report.chunks_seen << " chunks, " << report.segments.size() << " critical segment(s)\n";
    }
}

void cmd_evaluate(const EvaluateOptions& o, Context& ctx) {
    Source source(o.report, ctx.in);
    ctx.inputs.push_back(source.record());
    json j;
    try {
        j = json::parse(*source.open());
    } catch (const json::parse_error& e) {
        throw DataError("report is not valid JSON: " + std::string(e.what()));
    }
    const auto report = report_from_json(j);
    const auto truth = require_truth(report.meta, o.truth);

    std::vector<EvaluationRow> rows;
    json results = json::array();
    auto add = [&](std::string name, const std::vector<std::size_t>& detections) {
        EvaluationRow row{std::move(name), detections.size(), match(truth, detections, o.tolerance)};
        results.push_back({{"detector", row.detector}, {"detections", detections}, {"matching", to_json(row.matching)}});
        rows.push_back(std::move(row));
    };
    add("kld", report.critical_points);
    for (const auto& text : o.baselines) {
        const auto cfg = parse_baseline(text);
        add(to_string(cfg), baseline_alarms(report, cfg));
    }

    Sink sink(o.output, ctx.out);
    write_evaluation_csv(sink.stream(), rows);
    ctx.outputs.push_back(sink.finish());
    if (!o.json.empty()) {
        write_json(o.json, {{"tolerance", o.tolerance}, {"truth", truth}, {"results", std::move(results)}}, ctx);
    }
}

void cmd_sweep(const SweepOptions& o, Context& ctx) {
    const auto alphas = parse_alphas(o.alphas);
    Source source(o.input.path, ctx.in);
    ctx.inputs.push_back(source.record());
    const auto base = run_detection(source, o.input, o.detector, "auto", ctx.err);
    const auto truth = require_truth(base.meta, o.input.truth);
    auto scored = base;
    scored.meta.ground_truth = truth;
    const auto sweep = alpha_sweep(scored, alphas, o.tolerance);

    Sink sink(o.output, ctx.out);
    write_sweep_csv(sink.stream(), sweep);
    ctx.outputs.push_back(sink.finish());
    if (!o.json.empty()) {
        write_json(o.json,
                   {{"tolerance", o.tolerance}, {"truth", truth}, {"config", kld::to_json(o.detector)},
                    {"sweep", to_json(sweep)}},
                   ctx);
    }
}

// ---------------------------------------------------------------------------
// Flag wiring

struct DetectorFlags {
    DetectorConfig config;
    std::string bins_mode{to_string(config.bins_mode)};
    std::string smoother = to_string(config.smoother);
    std::string grid = "per-pair";
    std::string weighting{to_string(config.weighting)};
    std::string band_side{to_string(config.band_side)};
    std::optional<std::size_t> stats_window;
    bool no_jay_factor = false;

    DetectorConfig resolve() const {
        DetectorConfig c = config;
        c.bins_mode = grid_mode_from_string(bins_mode);
        c.smoother = parse_smoother(smoother);
        c.grid_scope = grid_scope_from_string(grid);
        c.weighting = weighting_from_string(weighting);
        c.band_side = band_side_from_string(band_side);
        c.stats_window = stats_window;
        c.jay_factor = !no_jay_factor;
        c.validate();
        return c;
    }
};

void add_detector_flags(CLI::App* sub, DetectorFlags& f) {
    sub->add_option("--alpha", f.config.alpha, "Band half-width in standard deviations")->capture_default_str();
    sub->add_option("--epsilon", f.config.epsilon, "Zero-probability replacement before KL")->capture_default_str();
    sub->add_option("--bins-mode", f.bins_mode, "Grid layout: slab (5p bins) or product")
        ->check(CLI::IsMember({"slab", "product"}))
        ->capture_default_str();
    sub->add_option("--bins-per-dim", f.config.bins_per_dim, "Intervals per axis")->capture_default_str();
    sub->add_option("--smoother", f.smoother, "ma:<window> or lowess:<frac>[,<iters>]")->capture_default_str();
    sub->add_option("--stats-window", f.stats_window, "Trailing window for the band statistics (default: all)");
    sub->add_option("--grid", f.grid, "Grid scope: per-pair or global")
        ->check(CLI::IsMember({"per-pair", "per_pair", "global"}))
        ->capture_default_str();
    sub->add_option("--warmup", f.config.warmup, "Gradient points before the rule activates")->capture_default_str();
    sub->add_option("--weighting", f.weighting, "Aggregate: weighted or unweighted")
        ->check(CLI::IsMember({"weighted", "unweighted"}))
        ->capture_default_str();
    sub->add_flag("--no-jay-factor", f.no_jay_factor, "Drop the 1/J' factor from the weighted aggregate");
    sub->add_option("--band-side", f.band_side, "Critical when above the band (upper) or outside it (both)")
        ->check(CLI::IsMember({"upper", "both"}))
        ->capture_default_str();
}

void add_input_flags(CLI::App* sub, StreamInput& s) {
    sub->add_option("input", s.path, "Stream file ('-' for stdin)")->capture_default_str();
    sub->add_option("--features", s.features, "Feature count p for header-less input");
    sub->add_option("--classes", s.classes, "Class count L for header-less input");
    sub->add_option("--chunk-size", s.chunk_size, "Chunk size K for header-less input");
    sub->add_option("--truth", s.truth, "Ground-truth drift chunks, comma-separated");
}

std::string default_manifest(const std::string& primary) {
    return primary == "-" ? std::string{} : primary + ".manifest.json";
}

struct Invocation {
    std::string command;
    json options;
};

// Executes a resolved command and returns what it read and wrote.
void execute(const Invocation& inv, Context& ctx) {
    const auto& o = inv.options;
    if (inv.command == "generate") {
        GenerateOptions g;
        g.generator = generator_config_from_json(o.at("generator"));
        g.output = o.at("output").get<std::string>();
        cmd_generate(g, ctx);
    } else if (inv.command == "detect") {
        DetectOptions d;
        d.input = stream_input_from(o.at("input"));
        d.detector = detector_config_from_json(o.at("detector"));
        d.mode = o.at("mode").get<std::string>();
        d.report = o.at("report").get<std::string>();
        d.distances = o.at("distances").get<std::string>();
        d.plot_data = o.at("plot_data").get<std::string>();
        cmd_detect(d, ctx);
    } else if (inv.command == "evaluate") {
        EvaluateOptions e;
        e.report = o.at("report").get<std::string>();
        e.truth = optional_from<std::string>(o, "truth");
        e.tolerance = o.at("tolerance").get<std::size_t>();
        e.baselines = o.at("baselines").get<std::vector<std::string>>();
        e.output = o.at("output").get<std::string>();
        e.json = o.at("json").get<std::string>();
        cmd_evaluate(e, ctx);
    } else if (inv.command == "sweep") {
        SweepOptions s;
        s.input = stream_input_from(o.at("input"));
        s.detector = detector_config_from_json(o.at("detector"));
        s.alphas = o.at("alphas").get<std::string>();
        s.tolerance = o.at("tolerance").get<std::size_t>();
        s.output = o.at("output").get<std::string>();
        s.json = o.at("json").get<std::string>();
        cmd_sweep(s, ctx);
    } else {
        throw UsageError("unknown command '" + inv.command + "'");
    }
}

json manifest_json(const Invocation& inv, const std::vector<std::string>& args, const Context& ctx) {
    return {{"tool", "kld"},           {"version", KLD_VERSION},  {"command", inv.command},
            {"argv", args},            {"options", inv.options},  {"inputs", ctx.inputs},
            {"outputs", ctx.outputs}};
}

void rerun_manifest(const std::string& path, Context& ctx) {
    std::ifstream f(path);
    if (!f) {
        throw DataError("cannot read manifest '" + path + "'");
    }
    json m;
    try {
        m = json::parse(f);
    } catch (const json::parse_error& e) {
        throw DataError("manifest is not valid JSON: " + std::string(e.what()));
    }
    Invocation inv;
    try {
        inv.command = m.at("command").get<std::string>();
        inv.options = m.at("options");
        for (const auto& input : m.at("inputs")) {
            const auto p = input.at("path").get<std::string>();
            if (p != "-" && sha256_file(p) != input.at("sha256").get<std::string>()) {
                throw DataError("input '" + p + "' no longer matches the manifest digest");
            }
        }
    } catch (const json::exception& e) {
        throw DataError("malformed manifest: " + std::string(e.what()));
    }
    execute(inv, ctx);
    if (ctx.inputs != m.at("inputs")) {
        throw DataError("inputs differ from the manifest");
    }
    if (ctx.outputs != m.at("outputs")) {
        throw InvariantError("re-run outputs differ from the manifest digests");
    }
    ctx.err << "kld: reproduced " << ctx.outputs.size() << " output(s) from " << path << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"KL-divergence concept drift detection for labeled data streams", "kld"};
    app.config_formatter(std::make_shared<ConfigJson>(&app));
    app.allow_config_extras(CLI::config_extras_mode::error);
    // Lets --config follow the subcommand name.
    app.fallthrough();
    app.set_config("--config", "", "JSON file of flag values; explicit flags take precedence");
    app.set_version_flag("--version", KLD_VERSION);
    app.require_subcommand(0, 1);

    std::string from_manifest;
    app.add_option("--from-manifest", from_manifest, "Re-run a recorded manifest and verify its outputs");

    std::string manifest;
    auto add_manifest = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest, "Run manifest path (default: <output>.manifest.json)");
    };

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Write a synthetic drifting stream");
    add_manifest(g);
    g->add_option("--seed", gen.generator.seed, "Random seed")->capture_default_str();
    g->add_option("--features", gen.generator.p, "Feature count p")->capture_default_str();
    g->add_option("--classes", gen.generator.classes, "Class count L")->capture_default_str();
    g->add_option("--chunks", gen.generator.n_chunks, "Chunk count")->capture_default_str();
    g->add_option("--chunk-size", gen.generator.chunk_size, "Points per chunk K")->capture_default_str();
    g->add_option("--drifts", gen.generator.n_drifts, "Evenly spaced incremental drifts")->capture_default_str();
    g->add_option("--sigmoid", gen.generator.sigmoid_spacing, "Concept sigmoid spacing (999 is sudden)")
        ->capture_default_str();
    g->add_option("--flip", gen.generator.class_flip, "Label flip probability")->capture_default_str();
    g->add_option("--clusters", gen.generator.clusters_per_class, "Gaussian clusters per class")
        ->capture_default_str();
    g->add_option("--separation", gen.generator.separation, "Minimum distance between cluster means")
        ->capture_default_str();
    g->add_option("--scale", gen.generator.scale, "Cluster standard deviation")->capture_default_str();
    g->add_option("-o,--output", gen.output, "Stream file ('-' for stdout)")->capture_default_str();

    DetectOptions det;
    DetectorFlags det_flags;
    auto* d = app.add_subcommand("detect", "Run the drift detector over a stream");
    add_manifest(d);
    add_input_flags(d, det.input);
    add_detector_flags(d, det_flags);
    d->add_option("--mode", det.mode, "auto, online or batch (LOWESS needs batch)")
        ->check(CLI::IsMember({"auto", "online", "batch"}))
        ->capture_default_str();
    d->add_option("-o,--report", det.report, "JSON report ('-' for stdout)")->capture_default_str();
    d->add_option("--distances", det.distances, "Per-pair divergence CSV");
    d->add_option("--emit-plot-data", det.plot_data, "Series CSV: k,raw,normalized,smoothed,gradient");

    EvaluateOptions ev;
    auto* e = app.add_subcommand("evaluate", "Score a report against ground truth");
    add_manifest(e);
    e->add_option("report", ev.report, "JSON report from detect ('-' for stdin)")->capture_default_str();
    e->add_option("--truth", ev.truth, "Ground-truth drift chunks, comma-separated (overrides the report)");
    e->add_option("--tolerance", ev.tolerance, "Matching window in chunks")->capture_default_str();
    e->add_option("--baseline", ev.baselines,
                  "Also score cusum[:kappa,h] or ewma[:lambda,c] on the raw divergence series (repeatable)");
    e->add_option("-o,--output", ev.output, "Metrics CSV ('-' for stdout)")->capture_default_str();
    e->add_option("--json", ev.json, "Metrics JSON with matched pairs");

    SweepOptions sw;
    DetectorFlags sw_flags;
    auto* s = app.add_subcommand("sweep", "Detection counts and matches across alpha values");
    add_manifest(s);
    add_input_flags(s, sw.input);
    add_detector_flags(s, sw_flags);
    s->add_option("--alphas", sw.alphas, "start:stop:step or a comma-separated list")->capture_default_str();
    s->add_option("--tolerance", sw.tolerance, "Matching window in chunks")->capture_default_str();
    s->add_option("-o,--output", sw.output, "Sweep CSV ('-' for stdout)")->capture_default_str();
    s->add_option("--json", sw.json, "Sweep JSON with per-alpha segments");

    Context ctx{in, out, err};
    try {
        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::ParseError& pe) {
            const int code = app.exit(pe, out, err);
            return code == 0 ? 0 : 1;
        }

        if (!from_manifest.empty()) {
            if (!app.get_subcommands().empty()) {
                throw UsageError("--from-manifest cannot be combined with a command");
            }
            rerun_manifest(from_manifest, ctx);
            return 0;
        }

        Invocation inv;
        std::string primary;
        if (g->parsed()) {
            inv = {"generate", to_json(gen)};
            primary = gen.output;
        } else if (d->parsed()) {
            det.detector = det_flags.resolve();
            inv = {"detect", to_json(det)};
            primary = det.report;
        } else if (e->parsed()) {
            inv = {"evaluate", to_json(ev)};
            primary = ev.output;
        } else if (s->parsed()) {
            sw.detector = sw_flags.resolve();
            inv = {"sweep", to_json(sw)};
            primary = sw.output;
        } else {
            err << app.help();
            return 1;
        }
        execute(inv, ctx);
        const std::string manifest_path = manifest.empty() ? default_manifest(primary) : manifest;
        if (!manifest_path.empty()) {
            std::ofstream mf(manifest_path);
            mf << manifest_json(inv, args, ctx).dump(2) << '\n';
            if (!mf) {
                throw DataError("cannot write manifest '" + manifest_path + "'");
            }
        }
        return 0;
    } catch (const Error& ex) {
        err << "kld: error: " << ex.what() << '\n';
        switch (ex.kind()) {
            case ErrorKind::usage:
                return 1;
            case ErrorKind::data:
                return 2;
            case ErrorKind::invariant:
                return 3;
        }
        return 3;
    } catch (const std::exception& ex) {
        err << "kld: internal error: " << ex.what() << '\n';
        return 3;
    }
}

}  // namespace kld::cli
