/// @file stream.hpp
/// @brief Chunked labeled data streams: points, chunks, metadata and ingestion.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kld {

using Label = std::uint32_t;

/// One input vector with its class label.
struct LabeledPoint {
    std::vector<double> input;
    Label label = 0;
};

/// Non-owning view of a point stored inside a Chunk.
struct PointView {
    std::span<const double> input;
    Label label;
};

/// Fixed-size ordered batch of labeled points. Features are stored row-major
/// (point k occupies features[k*dim, (k+1)*dim)).
class Chunk {
public:
    Chunk() = default;
    Chunk(std::size_t index, std::size_t dim, std::vector<double> features, std::vector<Label> labels);

    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }

    [[nodiscard]] PointView point(std::size_t k) const {
        return {std::span<const double>(features_).subspan(k * dim_, dim_), labels_[k]};
    }
    [[nodiscard]] std::span<const double> features() const noexcept { return features_; }
    [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }

    friend bool operator==(const Chunk&, const Chunk&) = default;

private:
    std::size_t index_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> features_;
    std::vector<Label> labels_;
};

/// Stream-level metadata carried alongside the records.
struct StreamMeta {
    std::size_t dim = 0;         ///< p, feature count
    std::size_t classes = 2;     ///< L, labels are 0..L-1
    std::size_t chunk_size = 0;  ///< K
    std::optional<std::size_t> n_chunks;
    std::vector<std::size_t> ground_truth;  ///< drift-center chunk indices
    bool truth_known = true;                ///< false for header-less input
    std::string generator;                  ///< provenance tag, e.g. "xoshiro256**/splitmix64"

    /// Throws UsageError when a field is out of range.
    void validate() const;

    friend bool operator==(const StreamMeta&, const StreamMeta&) = default;
};

/// Header line of the stream file format:
/// `# p=<int> L=<int> K=<int> drifts=<comma-separated ints or empty>`
[[nodiscard]] std::string format_stream_header(const StreamMeta& meta);
[[nodiscard]] StreamMeta parse_stream_header(std::string_view line);
[[nodiscard]] bool is_stream_header(std::string_view line);

/// One CSV record line: p features then the integer label.
[[nodiscard]] std::string format_record(PointView point);

/// Produces records one at a time; nullopt at end of input.
class RecordSource {
public:
    virtual ~RecordSource() = default;
    virtual std::optional<LabeledPoint> next() = 0;
};

/// Parses comma-separated records from a text stream. An optional leading
/// header line is consumed by `read_header`, which must be called first.
class CsvRecordSource final : public RecordSource {
public:
    CsvRecordSource(std::istream& in, StreamMeta meta);

    /// Reads the header line if present. Returns the parsed metadata, or
    /// nullopt (without consuming anything) when the input is headerless.
    static std::optional<StreamMeta> read_header(std::istream& in);

    std::optional<LabeledPoint> next() override;

    [[nodiscard]] std::size_t records_read() const noexcept { return record_; }

private:
    std::istream* in_;
    StreamMeta meta_;
    std::size_t record_ = 0;
    std::string line_;
};

/// Serves records from memory, validating them like the CSV reader does.
class VectorRecordSource final : public RecordSource {
public:
    VectorRecordSource(std::vector<LabeledPoint> records, StreamMeta meta);
    std::optional<LabeledPoint> next() override;

private:
    std::vector<LabeledPoint> records_;
    StreamMeta meta_;
    std::size_t pos_ = 0;
};

/// Validates one record against the stream metadata; throws DataError naming
/// the 1-based record number.
void validate_record(const LabeledPoint& point, const StreamMeta& meta, std::size_t record_number);

/// Produces chunks one at a time; nullopt once the stream is exhausted.
class ChunkSource {
public:
    virtual ~ChunkSource() = default;
    virtual std::optional<Chunk> next() = 0;
    [[nodiscard]] virtual const StreamMeta& meta() const = 0;
    /// Records discarded so far (a trailing partial chunk).
    [[nodiscard]] virtual std::size_t dropped() const { return 0; }
};

/// Groups records into chunks of exactly K points. A trailing partial chunk
/// is dropped; its size is reported by dropped().
class Chunker final : public ChunkSource {
public:
    Chunker(RecordSource& source, StreamMeta meta);

    std::optional<Chunk> next() override;
    [[nodiscard]] const StreamMeta& meta() const override { return meta_; }

    /// Records discarded from the trailing partial chunk. Final only after
    /// next() has returned nullopt.
    [[nodiscard]] std::size_t dropped() const override { return dropped_; }

private:
    RecordSource* source_;
    StreamMeta meta_;
    std::size_t next_index_ = 0;
    std::size_t dropped_ = 0;
    bool done_ = false;
};

/// Serves a pre-built list of chunks.
class VectorChunkSource final : public ChunkSource {
public:
    VectorChunkSource(std::vector<Chunk> chunks, StreamMeta meta);
    std::optional<Chunk> next() override;
    [[nodiscard]] const StreamMeta& meta() const override { return meta_; }

private:
    std::vector<Chunk> chunks_;
    StreamMeta meta_;
    std::size_t pos_ = 0;
};

/// Drains a chunk source into a vector.
[[nodiscard]] std::vector<Chunk> collect(ChunkSource& source);

/// Closed interval [lower, upper] on one axis.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

using Bounds = std::vector<Interval>;

/// Componentwise min/max over every point of the given chunks.
[[nodiscard]] Bounds chunk_bounds(const Chunk& chunk);
[[nodiscard]] Bounds chunk_bounds(const Chunk& a, const Chunk& b);
/// Widens `acc` in place so it also covers `chunk`. `acc` may be empty.
void extend_bounds(Bounds& acc, const Chunk& chunk);

/// Writes header plus records of every chunk in the stream file format.
void write_stream(std::ostream& out, const StreamMeta& meta, ChunkSource& chunks);

}  // namespace kld
