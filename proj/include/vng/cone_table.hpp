#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vng/cones.hpp"

namespace vng {

/// Solvency cones keyed by Markov transition "u->v".
///
/// Keys may use "*" for either endpoint. Lookup tries "u->v", "*->v", "u->*"
/// and "*->*" in that order, so the most specific entry wins. Transitions out
/// of an unlabeled tree root (no known previous state) only match keys whose
/// source is "*".
class ConeTable {
public:
    ConeTable() = default;

    /// A table with a single "*->*" entry.
    static ConeTable uniform(ConeSpec cone);

    void set(const std::string& key, ConeSpec cone);
    void set(std::string_view from, std::string_view to, ConeSpec cone);

    const ConeSpec& resolve(std::optional<std::string_view> from, std::string_view to) const;
    const ConeSpec* find(std::optional<std::string_view> from, std::string_view to) const;

    /// Common asset count; throws DimensionError on an empty table.
    std::size_t n() const;
    bool empty() const { return entries_.empty(); }
    const std::map<std::string, ConeSpec>& entries() const { return entries_; }

    static std::string key(std::string_view from, std::string_view to);
    /// Splits "u->v"; throws SchemaError on malformed keys.
    static std::pair<std::string, std::string> parse_key(std::string_view key);

private:
    std::map<std::string, ConeSpec> entries_;
};

}  // namespace vng
