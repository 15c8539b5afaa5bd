/// @file report.cpp

#include "kld/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <set>

#include "kld/error.hpp"

namespace kld {

using json = nlohmann::ordered_json;

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) {
        throw InvariantError("cannot format a double");
    }
    return {buf, static_cast<std::size_t>(p - buf)};
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
    if (!j.is_object()) {
        throw UsageError(std::string(what) + " must be a JSON object");
    }
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw UsageError(std::string("unknown ") + what + " key '" + key + "'");
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::string read_string(const json& j, const char* key, std::string fallback) {
    read(j, key, fallback);
    return fallback;
}

// Reports are data, so their shape errors are data errors.
template <typename F>
auto guard_data(F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

json optional_size(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const DetectorConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    j["epsilon"] = c.epsilon;
    j["bins_mode"] = std::string(to_string(c.bins_mode));
    j["bins_per_dim"] = c.bins_per_dim;
    j["smoother"] = to_string(c.smoother);
    j["stats_window"] = optional_size(c.stats_window);
    j["grid_scope"] = std::string(to_string(c.grid_scope));
    j["warmup"] = c.warmup;
    j["weighting"] = std::string(to_string(c.weighting));
    j["jay_factor"] = c.jay_factor;
    j["band_side"] = std::string(to_string(c.band_side));
    return j;
}

DetectorConfig detector_config_from_json(const json& j) {
    reject_unknown(j,
                   {"alpha", "epsilon", "bins_mode", "bins_per_dim", "smoother", "stats_window", "grid_scope",
                    "warmup", "weighting", "jay_factor", "band_side"},
                   "detector config");
    DetectorConfig c;
    read(j, "alpha", c.alpha);
    read(j, "epsilon", c.epsilon);
    c.bins_mode = grid_mode_from_string(read_string(j, "bins_mode", std::string(to_string(c.bins_mode))));
    read(j, "bins_per_dim", c.bins_per_dim);
    c.smoother = parse_smoother(read_string(j, "smoother", to_string(c.smoother)));
    if (j.contains("stats_window") && !j.at("stats_window").is_null()) {
        std::size_t w = 0;
        read(j, "stats_window", w);
        c.stats_window = w;
    }
    c.grid_scope = grid_scope_from_string(read_string(j, "grid_scope", std::string(to_string(c.grid_scope))));
    read(j, "warmup", c.warmup);
    c.weighting = weighting_from_string(read_string(j, "weighting", std::string(to_string(c.weighting))));
    read(j, "jay_factor", c.jay_factor);
    c.band_side = band_side_from_string(read_string(j, "band_side", std::string(to_string(c.band_side))));
    c.validate();
    return c;
}

json to_json(const GeneratorConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["p"] = c.p;
    j["classes"] = c.classes;
    j["n_chunks"] = c.n_chunks;
    j["chunk_size"] = c.chunk_size;
    j["n_drifts"] = c.n_drifts;
    j["sigmoid_spacing"] = c.sigmoid_spacing;
    j["class_flip"] = c.class_flip;
    j["clusters_per_class"] = c.clusters_per_class;
    j["separation"] = c.separation;
    j["scale"] = c.scale;
    return j;
}

GeneratorConfig generator_config_from_json(const json& j) {
    reject_unknown(j,
                   {"seed", "p", "classes", "n_chunks", "chunk_size", "n_drifts", "sigmoid_spacing", "class_flip",
                    "clusters_per_class", "separation", "scale"},
                   "generator config");
    GeneratorConfig c;
    read(j, "seed", c.seed);
    read(j, "p", c.p);
    read(j, "classes", c.classes);
    read(j, "n_chunks", c.n_chunks);
    read(j, "chunk_size", c.chunk_size);
    read(j, "n_drifts", c.n_drifts);
    read(j, "sigmoid_spacing", c.sigmoid_spacing);
    read(j, "class_flip", c.class_flip);
    read(j, "clusters_per_class", c.clusters_per_class);
    read(j, "separation", c.separation);
    read(j, "scale", c.scale);
    c.validate();
    return c;
}

json to_json(const Grid& grid) {
    json j;
    j["mode"] = std::string(to_string(grid.mode()));
    j["bin_count"] = grid.bin_count();
    json axes = json::array();
    for (const auto& a : grid.axes()) {
        axes.push_back({{"lower", a.lower}, {"upper", a.upper}, {"bins", a.bins}});
    }
    j["axes"] = std::move(axes);
    return j;
}

json to_json(const MatchingResult& r) {
    json j;
    j["tolerance"] = r.tolerance;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["mean_delay"] = r.mean_delay ? json(*r.mean_delay) : json(nullptr);
    json pairs = json::array();
    for (const auto& [t, d] : r.pairs) {
        pairs.push_back({t, d});
    }
    j["pairs"] = std::move(pairs);
    return j;
}

json to_json(const DriftReport& r) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = to_json(r.config);

    json stream;
    stream["p"] = r.meta.dim;
    stream["L"] = r.meta.classes;
    stream["K"] = r.meta.chunk_size;
    stream["n_chunks"] = optional_size(r.meta.n_chunks);
    stream["ground_truth"] = r.meta.truth_known ? json(r.meta.ground_truth) : json(nullptr);
    stream["generator"] = r.meta.generator;
    stream["chunks_seen"] = r.chunks_seen;
    stream["dropped_records"] = r.dropped_records;
    j["stream"] = std::move(stream);

    json grid;
    grid["scope"] = std::string(to_string(r.config.grid_scope));
    grid["mode"] = std::string(to_string(r.config.bins_mode));
    grid["bins_per_dim"] = r.config.bins_per_dim;
    grid["global"] = r.global_grid ? to_json(*r.global_grid) : json(nullptr);
    j["grid"] = std::move(grid);

    json rows = json::array();
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        json e;
        e["k"] = row.k;
        e["value"] = row.value;
        e["unweighted"] = row.unweighted;
        e["weighted"] = row.weighted;
        e["skipped_bins"] = row.skipped_bins;
        e["compared_bins"] = row.compared_bins;
        e["gap"] = row.gap;
        e["smoothed"] = k < r.smoothed.size() ? json(r.smoothed[k]) : json(nullptr);
        if (k < r.gradient.size()) {
            e["gradient"] = r.gradient[k];
            e["band_lower"] = r.bands[k].lower;
            e["band_upper"] = r.bands[k].upper;
            e["active"] = r.active[k] != 0;
            e["outside"] = r.outside[k] != 0;
        }
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);

    json segments = json::array();
    for (const auto& s : r.segments) {
        segments.push_back({{"enter", s.enter}, {"exit", optional_size(s.exit)}});
    }
    j["segments"] = std::move(segments);
    j["critical_points"] = r.critical_points;

    json diagnostics = json::array();
    for (const auto& d : r.diagnostics) {
        diagnostics.push_back({{"chunk", d.chunk}, {"message", d.message}});
    }
    j["diagnostics"] = std::move(diagnostics);
    return j;
}

DriftReport report_from_json(const json& j) {
    return guard_data([&]() {
        if (!j.is_object() || !j.contains("schema_version")) {
            throw DataError("not a drift report (missing schema_version)");
        }
        if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
            throw DataError("unsupported report schema version " + j.at("schema_version").dump());
        }
        DriftReport r;
        r.config = detector_config_from_json(j.at("config"));

        const auto& s = j.at("stream");
        r.meta.dim = s.at("p").get<std::size_t>();
        r.meta.classes = s.at("L").get<std::size_t>();
        r.meta.chunk_size = s.at("K").get<std::size_t>();
        if (!s.at("n_chunks").is_null()) {
            r.meta.n_chunks = s.at("n_chunks").get<std::size_t>();
        }
        r.meta.truth_known = !s.at("ground_truth").is_null();
        if (r.meta.truth_known) {
            r.meta.ground_truth = s.at("ground_truth").get<std::vector<std::size_t>>();
        }
        r.meta.generator = s.at("generator").get<std::string>();
        r.chunks_seen = s.at("chunks_seen").get<std::size_t>();
        r.dropped_records = s.at("dropped_records").get<std::size_t>();

        const auto& g = j.at("grid").at("global");
        if (!g.is_null()) {
            Bounds bounds;
            std::vector<std::size_t> bins;
            for (const auto& a : g.at("axes")) {
                bounds.push_back({a.at("lower").get<double>(), a.at("upper").get<double>()});
                bins.push_back(a.at("bins").get<std::size_t>());
            }
            r.global_grid = Grid::build(bounds, bins, grid_mode_from_string(g.at("mode").get<std::string>()));
        }

        for (const auto& e : j.at("rows")) {
            DistanceRow row;
            row.k = e.at("k").get<std::size_t>();
            row.value = e.at("value").get<double>();
            row.unweighted = e.at("unweighted").get<double>();
            row.weighted = e.at("weighted").get<double>();
            row.skipped_bins = e.at("skipped_bins").get<std::size_t>();
            row.compared_bins = e.at("compared_bins").get<std::size_t>();
            row.gap = e.at("gap").get<bool>();
            r.rows.push_back(row);
            if (!e.at("smoothed").is_null()) {
                r.smoothed.push_back(e.at("smoothed").get<double>());
            }
            if (e.contains("gradient")) {
                r.gradient.push_back(e.at("gradient").get<double>());
                r.bands.push_back({e.at("band_lower").get<double>(), e.at("band_upper").get<double>()});
                r.active.push_back(e.at("active").get<bool>() ? 1 : 0);
                r.outside.push_back(e.at("outside").get<bool>() ? 1 : 0);
            }
        }
        for (const auto& e : j.at("segments")) {
            CriticalSegment seg;
            seg.enter = e.at("enter").get<std::size_t>();
            if (!e.at("exit").is_null()) {
                seg.exit = e.at("exit").get<std::size_t>();
            }
            r.segments.push_back(seg);
        }
        r.critical_points = j.at("critical_points").get<std::vector<std::size_t>>();
        for (const auto& e : j.at("diagnostics")) {
            r.diagnostics.push_back({e.at("chunk").get<std::size_t>(), e.at("message").get<std::string>()});
        }
        return r;
    });
}

json to_json(std::span<const SweepEntry> sweep) {
    json out = json::array();
    for (const auto& e : sweep) {
        json segments = json::array();
        for (const auto& s : e.segments) {
            segments.push_back({{"enter", s.enter}, {"exit", optional_size(s.exit)}});
        }
        out.push_back({{"alpha", e.alpha},
                       {"detections", e.detections},
                       {"matching", to_json(e.matching)},
                       {"segments", std::move(segments)}});
    }
    return out;
}

void write_distances_csv(std::ostream& out, const DriftReport& r) {
    out << "i,value_unweighted,value_weighted,skipped_bins\n";
    for (const auto& row : r.rows) {
        out << row.k << ',' << format_double(row.unweighted) << ',' << format_double(row.weighted) << ','
            << row.skipped_bins << '\n';
    }
}

void write_series_csv(std::ostream& out, const DriftReport& r) {
    const auto s = r.plot_series();
    out << "k,raw,normalized,smoothed,gradient\n";
    for (std::size_t k = 0; k < s.raw.size(); ++k) {
        out << k << ',' << format_double(s.raw[k]) << ',' << format_double(s.normalized[k]) << ','
            << format_double(s.smoothed[k]) << ',';
        if (k < s.gradient.size()) {
            out << format_double(s.gradient[k]);
        }
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepEntry> sweep) {
    out << "alpha,detections,tp,fp,fn,mean_delay\n";
    for (const auto& e : sweep) {
        out << format_double(e.alpha) << ',' << e.detections << ',' << e.matching.tp << ',' << e.matching.fp << ','
            << e.matching.fn << ',';
        if (e.matching.mean_delay) {
            out << format_double(*e.matching.mean_delay);
        }
        out << '\n';
    }
}

void write_evaluation_csv(std::ostream& out, std::span<const EvaluationRow> rows) {
    out << "detector,detections,tp,fp,fn,mean_delay\n";
    for (const auto& r : rows) {
        out << r.detector << ',' << r.detections << ',' << r.matching.tp << ',' << r.matching.fp << ','
            << r.matching.fn << ',';
        if (r.matching.mean_delay) {
            out << format_double(*r.matching.mean_delay);
        }
        out << '\n';
    }
}

}  // namespace kld
