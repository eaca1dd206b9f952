#include "cmjudge/hash.hpp"

#include "cmjudge/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <memory>

namespace cmjudge {

namespace {

std::string to_hex(const unsigned char *digest, unsigned len) {
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw Error("sha256 computation failed");
    }
    return to_hex(digest.data(), len);
}

std::string sha256_file_hex(const std::string &path) {
    std::unique_ptr<FILE, decltype(&std::fclose)> f(std::fopen(path.c_str(), "rb"), &std::fclose);
    if (!f)
        throw Error("cannot open file for hashing: " + path);

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("sha256 computation failed");

    std::array<char, 1 << 16> buf;
    size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), f.get())) > 0) {
        if (EVP_DigestUpdate(ctx.get(), buf.data(), n) != 1)
            throw Error("sha256 computation failed");
    }
    if (std::ferror(f.get()))
        throw Error("read error while hashing: " + path);

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw Error("sha256 computation failed");
    return to_hex(digest.data(), len);
}

} // namespace cmjudge
