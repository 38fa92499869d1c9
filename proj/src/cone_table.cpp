#include "vng/cone_table.hpp"

#include "vng/error.hpp"

namespace vng {

ConeTable ConeTable::uniform(ConeSpec cone) {
    ConeTable t;
    t.set("*", "*", std::move(cone));
    return t;
}

std::string ConeTable::key(std::string_view from, std::string_view to) {
    std::string k(from);
    k += "->";
    k += to;
    return k;
}

std::pair<std::string, std::string> ConeTable::parse_key(std::string_view key) {
    const auto pos = key.find("->");
    if (pos == std::string_view::npos || pos == 0 || pos + 2 >= key.size())
        throw SchemaError("cone key '" + std::string(key) + "' is not of the form from->to");
    return {std::string(key.substr(0, pos)), std::string(key.substr(pos + 2))};
}

void ConeTable::set(const std::string& k, ConeSpec cone) {
    auto [from, to] = parse_key(k);
    set(from, to, std::move(cone));
}

void ConeTable::set(std::string_view from, std::string_view to, ConeSpec cone) {
    if (!entries_.empty() && entries_.begin()->second.n() != cone.n())
        throw DimensionError("cone table: entry " + key(from, to) + " has " + std::to_string(cone.n()) +
                             " assets, table has " + std::to_string(entries_.begin()->second.n()));
    entries_.insert_or_assign(key(from, to), std::move(cone));
}

const ConeSpec* ConeTable::find(std::optional<std::string_view> from, std::string_view to) const {
    auto lookup = [&](std::string_view f, std::string_view t) -> const ConeSpec* {
        auto it = entries_.find(key(f, t));
        return it == entries_.end() ? nullptr : &it->second;
    };
    if (from) {
        if (auto* c = lookup(*from, to)) return c;
    }
    if (auto* c = lookup("*", to)) return c;
    if (from) {
        if (auto* c = lookup(*from, "*")) return c;
    }
    return lookup("*", "*");
}

const ConeSpec& ConeTable::resolve(std::optional<std::string_view> from, std::string_view to) const {
    if (const auto* c = find(from, to)) return *c;
    throw DomainError("no cone for transition " + key(from ? *from : "*", to));
}

std::size_t ConeTable::n() const {
    if (entries_.empty()) throw DimensionError("cone table is empty");
    return entries_.begin()->second.n();
}

}  // namespace vng
