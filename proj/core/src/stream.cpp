/// @file stream.cpp
/// @brief Stream file format, record validation and chunking.

#include "kld/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "kld/error.hpp"

namespace kld {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return {buf, ptr};
}

}  // namespace

Chunk::Chunk(std::size_t index, std::size_t dim, std::vector<double> features, std::vector<Label> labels)
    : index_(index), dim_(dim), features_(std::move(features)), labels_(std::move(labels)) {
    if (dim_ == 0) {
        throw InvariantError("chunk dimensionality must be at least 1");
    }
    if (features_.size() != labels_.size() * dim_) {
        throw InvariantError("chunk feature buffer does not match label count times dimensionality");
    }
}

void StreamMeta::validate() const {
    if (dim == 0) {
        throw UsageError("stream dimensionality p must be at least 1");
    }
    if (classes < 1) {
        throw UsageError("stream class count L must be at least 1");
    }
    if (chunk_size == 0) {
        throw UsageError("chunk size K must be at least 1");
    }
    for (std::size_t i = 0; i < ground_truth.size(); ++i) {
        if (i > 0 && ground_truth[i] <= ground_truth[i - 1]) {
            throw UsageError("ground-truth drift indices must be strictly increasing");
        }
        if (n_chunks && ground_truth[i] >= *n_chunks) {
            throw UsageError("ground-truth drift index " + std::to_string(ground_truth[i]) +
                             " is not below the chunk count " + std::to_string(*n_chunks));
        }
    }
}

std::string format_stream_header(const StreamMeta& meta) {
    std::ostringstream os;
    os << "# p=" << meta.dim << " L=" << meta.classes << " K=" << meta.chunk_size << " drifts=";
    for (std::size_t i = 0; i < meta.ground_truth.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        os << meta.ground_truth[i];
    }
    return os.str();
}

bool is_stream_header(std::string_view line) { return !line.empty() && line.front() == '#'; }

StreamMeta parse_stream_header(std::string_view line) {
    if (!is_stream_header(line)) {
        throw DataError("stream header must start with '#'");
    }
    line.remove_prefix(1);
    StreamMeta meta;
    bool have_p = false;
    bool have_l = false;
    bool have_k = false;
    std::istringstream tokens{std::string(trim(line))};
    std::string token;
    while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw DataError("malformed header token '" + token + "'");
        }
        const std::string_view key = std::string_view(token).substr(0, eq);
        const std::string_view value = std::string_view(token).substr(eq + 1);
        auto need_size = [&](std::size_t& out) {
            if (!parse_number(value, out)) {
                throw DataError("header field '" + std::string(key) + "' is not a non-negative integer");
            }
        };
        if (key == "p") {
            need_size(meta.dim);
            have_p = true;
        } else if (key == "L") {
            need_size(meta.classes);
            have_l = true;
        } else if (key == "K") {
            need_size(meta.chunk_size);
            have_k = true;
        } else if (key == "drifts") {
            if (!trim(value).empty()) {
                for (auto part : split(value, ',')) {
                    std::size_t idx = 0;
                    if (!parse_number(part, idx)) {
                        throw DataError("header drifts list contains a non-integer entry");
                    }
                    meta.ground_truth.push_back(idx);
                }
            }
        } else {
            throw DataError("unknown header field '" + std::string(key) + "'");
        }
    }
    if (!have_p || !have_l || !have_k) {
        throw DataError("stream header must declare p, L and K");
    }
    try {
        meta.validate();
    } catch (const UsageError& e) {
        throw DataError(std::string("invalid stream header: ") + e.what());
    }
    return meta;
}

std::string format_record(PointView point) {
    std::string out;
    for (double v : point.input) {
        out += format_double(v);
        out += ',';
    }
    out += std::to_string(point.label);
    return out;
}

void validate_record(const LabeledPoint& point, const StreamMeta& meta, std::size_t record_number) {
    const auto where = "record " + std::to_string(record_number) + ": ";
    if (point.input.size() != meta.dim) {
        throw DataError(where + "expected " + std::to_string(meta.dim) + " features, got " +
                        std::to_string(point.input.size()));
    }
    for (std::size_t d = 0; d < point.input.size(); ++d) {
        if (!std::isfinite(point.input[d])) {
            throw DataError(where + "feature " + std::to_string(d) + " is not finite");
        }
    }
    if (point.label >= meta.classes) {
        throw DataError(where + "label " + std::to_string(point.label) + " is outside 0.." +
                        std::to_string(meta.classes - 1));
    }
}

CsvRecordSource::CsvRecordSource(std::istream& in, StreamMeta meta) : in_(&in), meta_(std::move(meta)) {
    meta_.validate();
}

std::optional<StreamMeta> CsvRecordSource::read_header(std::istream& in) {
    if (in.peek() != '#') {
        return std::nullopt;
    }
    std::string line;
    std::getline(in, line);
    return parse_stream_header(line);
}

std::optional<LabeledPoint> CsvRecordSource::next() {
    while (std::getline(*in_, line_)) {
        const auto text = trim(line_);
        if (text.empty()) {
            continue;
        }
        ++record_;
        const auto fields = split(text, ',');
        const auto where = "record " + std::to_string(record_) + ": ";
        if (fields.size() != meta_.dim + 1) {
            throw DataError(where + "expected " + std::to_string(meta_.dim + 1) + " comma-separated fields, got " +
                            std::to_string(fields.size()));
        }
        LabeledPoint point;
        point.input.resize(meta_.dim);
        for (std::size_t d = 0; d < meta_.dim; ++d) {
            if (!parse_number(fields[d], point.input[d])) {
                throw DataError(where + "feature " + std::to_string(d) + " is not a decimal number");
            }
        }
        if (!parse_number(fields[meta_.dim], point.label)) {
            throw DataError(where + "label is not a non-negative integer");
        }
        validate_record(point, meta_, record_);
        return point;
    }
    return std::nullopt;
}

VectorRecordSource::VectorRecordSource(std::vector<LabeledPoint> records, StreamMeta meta)
    : records_(std::move(records)), meta_(std::move(meta)) {
    meta_.validate();
}

std::optional<LabeledPoint> VectorRecordSource::next() {
    if (pos_ >= records_.size()) {
        return std::nullopt;
    }
    ++pos_;
    validate_record(records_[pos_ - 1], meta_, pos_);
    return records_[pos_ - 1];
}

Chunker::Chunker(RecordSource& source, StreamMeta meta) : source_(&source), meta_(std::move(meta)) {
    meta_.validate();
}

std::optional<Chunk> Chunker::next() {
    if (done_) {
        return std::nullopt;
    }
    const std::size_t k = meta_.chunk_size;
    std::vector<double> features;
    std::vector<Label> labels;
    features.reserve(k * meta_.dim);
    labels.reserve(k);
    while (labels.size() < k) {
        auto rec = source_->next();
        if (!rec) {
            done_ = true;
            dropped_ = labels.size();
            return std::nullopt;
        }
        features.insert(features.end(), rec->input.begin(), rec->input.end());
        labels.push_back(rec->label);
    }
    return Chunk(next_index_++, meta_.dim, std::move(features), std::move(labels));
}

VectorChunkSource::VectorChunkSource(std::vector<Chunk> chunks, StreamMeta meta)
    : chunks_(std::move(chunks)), meta_(std::move(meta)) {}

std::optional<Chunk> VectorChunkSource::next() {
    if (pos_ >= chunks_.size()) {
        return std::nullopt;
    }
    return chunks_[pos_++];
}

std::vector<Chunk> collect(ChunkSource& source) {
    std::vector<Chunk> out;
    while (auto c = source.next()) {
        out.push_back(std::move(*c));
    }
    return out;
}

void extend_bounds(Bounds& acc, const Chunk& chunk) {
    if (chunk.empty()) {
        return;
    }
    const std::size_t p = chunk.dim();
    std::size_t first = 0;
    if (acc.empty()) {
        acc.resize(p);
        auto x = chunk.point(0).input;
        for (std::size_t d = 0; d < p; ++d) {
            acc[d] = {x[d], x[d]};
        }
        first = 1;
    } else if (acc.size() != p) {
        throw DataError("cannot combine bounds of different dimensionality");
    }
    for (std::size_t k = first; k < chunk.size(); ++k) {
        auto x = chunk.point(k).input;
        for (std::size_t d = 0; d < p; ++d) {
            acc[d].lower = std::min(acc[d].lower, x[d]);
            acc[d].upper = std::max(acc[d].upper, x[d]);
        }
    }
}

Bounds chunk_bounds(const Chunk& chunk) {
    if (chunk.empty()) {
        throw DataError("cannot compute bounds of an empty chunk");
    }
    Bounds b;
    extend_bounds(b, chunk);
    return b;
}

Bounds chunk_bounds(const Chunk& a, const Chunk& b) {
    if (a.empty() && b.empty()) {
        throw DataError("cannot compute bounds of empty chunks");
    }
    Bounds out;
    extend_bounds(out, a);
    extend_bounds(out, b);
    return out;
}

void write_stream(std::ostream& out, const StreamMeta& meta, ChunkSource& chunks) {
    out << format_stream_header(meta) << '\n';
    while (auto c = chunks.next()) {
        for (std::size_t k = 0; k < c->size(); ++k) {
            out << format_record(c->point(k)) << '\n';
        }
    }
}

}  // namespace kld
