#include "ragcritic/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ragcritic/errors.hpp"

namespace ragcritic {

namespace {

std::string digest_to_hex(const unsigned char* digest, unsigned int length) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw Error("sha256 init failed");
        }
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const char* data, size_t size) {
        if (EVP_DigestUpdate(ctx_, data, size) != 1) throw Error("sha256 update failed");
    }

    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int length = 0;
        if (EVP_DigestFinal_ex(ctx_, digest, &length) != 1) {
            throw Error("sha256 final failed");
        }
        return digest_to_hex(digest, length);
    }

private:
    EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 hasher;
    hasher.update(bytes.data(), bytes.size());
    return hasher.hex();
}

std::string sha256_hex_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw ConfigError("cannot open file for digest: " + path.string());
    Sha256 hasher;
    char buffer[1 << 16];
    while (stream.read(buffer, sizeof(buffer)) || stream.gcount() > 0) {
        hasher.update(buffer, static_cast<size_t>(stream.gcount()));
    }
    return hasher.hex();
}

std::string utc_timestamp_now() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["config_digest"] = manifest.config_digest;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [input_path, digest] : manifest.input_digests) {
        inputs.push_back({{"path", input_path}, {"digest", digest}});
    }
    doc["input_digests"] = inputs;
    doc["seed"] = manifest.seed;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;
    doc["record_counts"] = {{"read", manifest.records_read},
                            {"processed", manifest.records_processed},
                            {"failed", manifest.records_failed}};
    doc["tool_version"] = manifest.tool_version;

    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw ConfigError("cannot write manifest: " + path.string());
    stream << doc.dump(2) << "\n";
}

}  // namespace ragcritic
