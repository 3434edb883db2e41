#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace affhom {

enum class SymbolKind : std::uint8_t {
    group_parameter,  // a[i,j], b[i], c[j], d
    field_parameter,  // T[i], A[i,j], B[i], C[j], D
    jet_coefficient,  // F[...], G[...]
    branch_parameter, // theta, eta, anything else
    coordinate,       // x, y, z, w, u (only used while parsing fields)
};

std::string_view to_string(SymbolKind kind);

// Interned named symbol. Identity is the intern id; names are unique per
// process and a name keeps the kind it was first created with.
class Symbol {
public:
    static Symbol intern(SymbolKind kind, std::string_view name);
    // Kind inferred from the naming convention listed on SymbolKind.
    static Symbol named(std::string_view name);
    static std::optional<Symbol> find(std::string_view name);

    // "F[2,1]"-style indexed names.
    static Symbol indexed(SymbolKind kind, std::string_view head, std::span<const int> index);

    const std::string& name() const;
    SymbolKind kind() const;
    std::uint32_t id() const noexcept { return id_; }

    friend bool operator==(Symbol, Symbol) = default;
    friend std::strong_ordering operator<=>(Symbol, Symbol) = default;

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_;
};

SymbolKind infer_kind(std::string_view name);

// Orders symbols by name.
struct ByName {
    bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

// Print order inside monomials: group parameters, branch parameters, jet
// symbols, field parameters, coordinates; by name within a kind.
struct PrintOrder {
    bool operator()(Symbol a, Symbol b) const;
};

} // namespace affhom
