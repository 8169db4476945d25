#pragma once

#include <optional>
#include <string>

namespace eiscong {

/// Persistent key-value store of checksummed JSON entries with atomic
/// (write-temp-then-rename) replacement. Keys are the stable labels defined by
/// the other modules.
class CacheStore {
public:
    explicit CacheStore(std::string root);
    /// honors EISCONG_CACHE_DIR, falls back to ./eiscong-cache
    static CacheStore from_environment();

    const std::string& root() const { return root_; }

    /// payload for the key; empty when missing or corrupt (corrupt entries are
    /// reported as missing so callers recompute)
    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& payload) const;
    bool contains(const std::string& key) const { return get(key).has_value(); }

    std::string path_for(const std::string& key) const;

private:
    std::string root_;
};

/// FNV-1a checksum used by the cache entries.
std::string content_checksum(const std::string& payload);

} // namespace eiscong
