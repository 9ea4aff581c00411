#include "compchall/hashcodec.hpp"

#include <openssl/evp.h>

#include <limits>
#include <stdexcept>

#include "compchall/errors.hpp"

namespace compchall {

namespace {

const EVP_MD* resolve_md(const std::string& name) {
    const EVP_MD* md = EVP_get_digestbyname(name.c_str());
    if (md == nullptr) {
        throw ConfigError("unsupported hash algorithm: " + name);
    }
    return md;
}

}  // namespace

HashConfig HashConfig::for_algorithm(std::string_view name) {
    HashConfig cfg;
    cfg.algorithm = std::string(name);
    cfg.digest_len = static_cast<std::size_t>(EVP_MD_get_size(resolve_md(cfg.algorithm)));
    return cfg;
}

Bytes encode_fields(FieldTag tag, std::span<const Bytes> fields) {
    std::size_t total = 1;
    for (const Bytes& f : fields) {
        if (f.size() > std::numeric_limits<std::uint32_t>::max()) {
            throw EncodingError("field exceeds 2^32 - 1 bytes");
        }
        total += 4 + f.size();
    }
    Bytes out;
    out.reserve(total);
    out.push_back(static_cast<std::uint8_t>(tag));
    for (const Bytes& f : fields) {
        put_u32_be(out, static_cast<std::uint32_t>(f.size()));
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

Bytes encode_fields(FieldTag tag, std::initializer_list<Bytes> fields) {
    return encode_fields(tag, std::span<const Bytes>(fields.begin(), fields.size()));
}

Digest digest(std::span<const std::uint8_t> data, const HashConfig& cfg) {
    const EVP_MD* md = resolve_md(cfg.algorithm);
    Digest out;
    out.bytes.resize(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    // thread_local context: digest() is on the solver's hot path.
    thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, md, nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.bytes.data(), &len) != 1) {
        throw ConfigError("digest computation failed for " + cfg.algorithm);
    }
    out.bytes.resize(len);
    return out;
}

Digest hash_tuple(FieldTag tag, std::span<const Bytes> fields, const HashConfig& cfg) {
    return digest(encode_fields(tag, fields), cfg);
}

Digest hash_tuple(FieldTag tag, std::initializer_list<Bytes> fields, const HashConfig& cfg) {
    return digest(encode_fields(tag, fields), cfg);
}

Bytes encode_r(std::uint32_t r, std::uint32_t k_bits) {
    if (k_bits > 32) {
        throw std::domain_error("puzzle width k exceeds 32 bits");
    }
    if (k_bits < 32 && r >= (std::uint32_t{1} << k_bits)) {
        throw std::domain_error("r out of range for a " + std::to_string(k_bits) + "-bit puzzle");
    }
    Bytes out;
    out.reserve(4);
    put_u32_be(out, r);
    return out;
}

Bytes hash_chain(std::span<const std::uint8_t> seed, std::uint64_t m, const HashConfig& cfg) {
    Bytes value(seed.begin(), seed.end());
    for (std::uint64_t i = 0; i < m; ++i) {
        value = hash_tuple(FieldTag::Chain, {value}, cfg).bytes;
    }
    return value;
}

struct TupleHasher::Impl {
    const EVP_MD* md;
    EVP_MD_CTX* ctx;
};

TupleHasher::TupleHasher(const HashConfig& cfg)
    : impl_(new Impl{resolve_md(cfg.algorithm), EVP_MD_CTX_new()}) {
    if (impl_->ctx == nullptr) {
        delete impl_;
        throw ConfigError("could not allocate digest context");
    }
}

TupleHasher::~TupleHasher() {
    EVP_MD_CTX_free(impl_->ctx);
    delete impl_;
}

Digest TupleHasher::hash(std::span<const std::uint8_t> encoded) {
    Digest out;
    out.bytes.resize(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (EVP_DigestInit_ex(impl_->ctx, impl_->md, nullptr) != 1 ||
        EVP_DigestUpdate(impl_->ctx, encoded.data(), encoded.size()) != 1 ||
        EVP_DigestFinal_ex(impl_->ctx, out.bytes.data(), &len) != 1) {
        throw ConfigError("digest computation failed");
    }
    out.bytes.resize(len);
    return out;
}

}  // namespace compchall
