/// @file digest.cpp

#include "digest.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "kld/error.hpp"

namespace kld::cli {

struct Sha256::Impl {
    EVP_MD_CTX* ctx = nullptr;
    bool done = false;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
    impl_->ctx = EVP_MD_CTX_new();
    if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
        throw InvariantError("cannot initialise SHA-256");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(impl_->ctx); }

void Sha256::update(const void* data, std::size_t size) {
    if (impl_->done) {
        throw InvariantError("SHA-256 updated after finalisation");
    }
    EVP_DigestUpdate(impl_->ctx, data, size);
}

std::string Sha256::hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (impl_->done) {
        throw InvariantError("SHA-256 finalised twice");
    }
    EVP_DigestFinal_ex(impl_->ctx, md, &len);
    impl_->done = true;
    std::string out;
    out.reserve(2 * len);
    static constexpr char digits[] = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(digits[md[i] >> 4]);
        out.push_back(digits[md[i] & 0xF]);
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data.data(), data.size());
    return h.hex();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read '" + path + "'");
    }
    Sha256 h;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

HashingStreambuf::int_type HashingStreambuf::overflow(int_type ch) {
    if (traits_type::eq_int_type(ch, traits_type::eof())) {
        return traits_type::not_eof(ch);
    }
    const char c = traits_type::to_char_type(ch);
    hash_.update(&c, 1);
    return target_->sputc(c);
}

std::streamsize HashingStreambuf::xsputn(const char* s, std::streamsize n) {
    hash_.update(s, static_cast<std::size_t>(n));
    return target_->sputn(s, n);
}

int HashingStreambuf::sync() { return target_->pubsync(); }

}  // namespace kld::cli
