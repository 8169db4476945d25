#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eiscong/eisenstein.hpp"

namespace eiscong {

/// Ingested Hecke eigenvalue table for a Hilbert cusp form.
struct CuspFormData {
    long d = 0;
    OIdeal level;
    long weight = 0;
    std::string character_label;
    long declared_bound = 0;
    // sorted by (norm, hnf); one row per prime ideal
    std::vector<std::pair<OIdeal, CycloNumber>> eigenvalues;
    std::string provenance;

    std::optional<CycloNumber> eigenvalue_at(const OIdeal& prime) const;
};

/// Parses an `eiscong.hmf.v1` file. SchemaMismatch / DuplicatePrime / MalformedValue.
CuspFormData parse_eigenvalue_file(const std::string& path);
CuspFormData parse_eigenvalue_text(const std::string& json_text);
std::string serialize_eigenvalue_file(const CuspFormData& data);

/// Translates one row of the documented public-database JSON shape into the
/// native `eiscong.hmf.v1` format (see README for the mapping).
std::string translate_public_row(const std::string& json_text);

/// Fetches `label` from a remote endpoint serving public-database rows,
/// translates it, and stores it in the cache. Never invoked by tests.
std::string fetch_remote(const std::string& label, const std::string& endpoint,
                         const std::string& cache_dir);

} // namespace eiscong
