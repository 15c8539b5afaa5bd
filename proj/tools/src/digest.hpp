/// @file digest.hpp
/// @brief SHA-256 of files and of everything written through a stream.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <streambuf>
#include <string>
#include <string_view>

namespace kld::cli {

class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t size);
    /// Lowercase hex digest; the hasher cannot be updated afterwards.
    std::string hex();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::string sha256_hex(std::string_view data);
/// Throws DataError when the file cannot be read.
[[nodiscard]] std::string sha256_file(const std::string& path);

/// Forwards output to `target` while hashing it.
class HashingStreambuf final : public std::streambuf {
public:
    explicit HashingStreambuf(std::streambuf* target) : target_(target) {}
    std::string hex() { return hash_.hex(); }

protected:
    int_type overflow(int_type ch) override;
    std::streamsize xsputn(const char* s, std::streamsize n) override;
    int sync() override;

private:
    std::streambuf* target_;
    Sha256 hash_;
};

}  // namespace kld::cli
