#include "eiscong/cache.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <atomic>
#include <thread>
#include <unistd.h>

#include "eiscong/errors.hpp"

namespace eiscong {

namespace fs = std::filesystem;

std::string content_checksum(const std::string& payload) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

CacheStore::CacheStore(std::string root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
}

CacheStore CacheStore::from_environment() {
    const char* env = std::getenv("EISCONG_CACHE_DIR");
    return CacheStore(env && *env ? env : "eiscong-cache");
}

std::string CacheStore::path_for(const std::string& key) const {
    // filename-safe key: keep alnum, map the rest to '_', plus a checksum suffix
    std::string safe;
    for (char c : key)
        safe += (std::isalnum((unsigned char)c) || c == '-' || c == '.') ? c : '_';
    if (safe.size() > 80) safe.resize(80);
    return root_ + "/" + safe + "-" + content_checksum(key) + ".json";
}

std::optional<std::string> CacheStore::get(const std::string& key) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string whole = ss.str();
    // format: first line checksum, rest payload
    size_t nl = whole.find('\n');
    if (nl == std::string::npos) return std::nullopt;
    std::string sum = whole.substr(0, nl);
    std::string payload = whole.substr(nl + 1);
    if (content_checksum(payload) != sum) return std::nullopt; // corrupt: recompute upstream
    return payload;
}

void CacheStore::put(const std::string& key, const std::string& payload) const {
    static std::atomic<unsigned long> counter{0};
    std::string final_path = path_for(key);
    std::string tmp_path = final_path + ".tmp" + std::to_string((unsigned long)::getpid()) + "-" +
                           std::to_string(counter.fetch_add(1)) + "-" +
                           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp_path, std::ios::trunc);
        if (!out) fail(errc::internal_error, "cannot write cache entry " + tmp_path);
        out << content_checksum(payload) << "\n" << payload;
    }
    std::error_code ec;
    fs::rename(tmp_path, final_path, ec);
    if (ec) {
        fs::remove(tmp_path, ec);
        fail(errc::internal_error, "cache rename failed for " + final_path);
    }
}

} // namespace eiscong
