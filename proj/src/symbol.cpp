#include <affhom/symbol.hpp>

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <affhom/errors.hpp>

namespace affhom {

namespace {

struct SymbolInfo {
    std::string name;
    SymbolKind kind;
};

class Registry {
public:
    static Registry& instance()
    {
        static Registry registry;
        return registry;
    }

    std::uint32_t intern(SymbolKind kind, std::string_view name)
    {
        {
            std::shared_lock lock(mutex_);
            if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
                check_kind(it->second, kind);
                return it->second;
            }
        }
        std::unique_lock lock(mutex_);
        if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
            check_kind(it->second, kind);
            return it->second;
        }
        const auto id = static_cast<std::uint32_t>(infos_.size());
        infos_.push_back(SymbolInfo{std::string(name), kind});
        by_name_.emplace(std::string(name), id);
        return id;
    }

    std::optional<std::uint32_t> find(std::string_view name) const
    {
        std::shared_lock lock(mutex_);
        if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
            return it->second;
        }
        return std::nullopt;
    }

    const SymbolInfo& info(std::uint32_t id) const
    {
        std::shared_lock lock(mutex_);
        return infos_[id];
    }

private:
    void check_kind(std::uint32_t id, SymbolKind kind) const
    {
        if (infos_[id].kind != kind) {
            throw PreconditionError("symbol '" + infos_[id].name + "' already exists with kind "
                                    + std::string(to_string(infos_[id].kind)));
        }
    }

    mutable std::shared_mutex mutex_;
    // deque: references stay valid while new symbols are appended
    std::deque<SymbolInfo> infos_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
};

bool has_head(std::string_view name, std::string_view head)
{
    return name == head || (name.size() > head.size() && name.substr(0, head.size()) == head
                            && name[head.size()] == '[');
}

} // namespace

std::string_view to_string(SymbolKind kind)
{
    switch (kind) {
    case SymbolKind::group_parameter:
        return "group-parameter";
    case SymbolKind::field_parameter:
        return "field-parameter";
    case SymbolKind::jet_coefficient:
        return "jet-coefficient";
    case SymbolKind::branch_parameter:
        return "branch-parameter";
    case SymbolKind::coordinate:
        return "coordinate";
    }
    return "unknown";
}

SymbolKind infer_kind(std::string_view name)
{
    for (std::string_view head : {"a", "b", "c", "d"}) {
        if (has_head(name, head)) {
            return SymbolKind::group_parameter;
        }
    }
    for (std::string_view head : {"T", "A", "B", "C", "D"}) {
        if (has_head(name, head)) {
            return SymbolKind::field_parameter;
        }
    }
    for (std::string_view head : {"F", "G"}) {
        if (has_head(name, head)) {
            return SymbolKind::jet_coefficient;
        }
    }
    for (std::string_view coord : {"x", "y", "z", "w", "u"}) {
        if (name == coord) {
            return SymbolKind::coordinate;
        }
    }
    return SymbolKind::branch_parameter;
}

Symbol Symbol::intern(SymbolKind kind, std::string_view name)
{
    return Symbol(Registry::instance().intern(kind, name));
}

Symbol Symbol::named(std::string_view name)
{
    return intern(infer_kind(name), name);
}

std::optional<Symbol> Symbol::find(std::string_view name)
{
    if (auto id = Registry::instance().find(name)) {
        return Symbol(*id);
    }
    return std::nullopt;
}

Symbol Symbol::indexed(SymbolKind kind, std::string_view head, std::span<const int> index)
{
    std::string name(head);
    if (!index.empty()) {
        name += '[';
        for (std::size_t i = 0; i < index.size(); ++i) {
            if (i != 0) {
                name += ',';
            }
            name += std::to_string(index[i]);
        }
        name += ']';
    }
    return intern(kind, name);
}

const std::string& Symbol::name() const
{
    return Registry::instance().info(id_).name;
}

SymbolKind Symbol::kind() const
{
    return Registry::instance().info(id_).kind;
}

bool PrintOrder::operator()(Symbol a, Symbol b) const
{
    auto rank = [](SymbolKind k) {
        switch (k) {
        case SymbolKind::group_parameter:
            return 0;
        case SymbolKind::branch_parameter:
            return 1;
        case SymbolKind::jet_coefficient:
            return 2;
        case SymbolKind::field_parameter:
            return 3;
        case SymbolKind::coordinate:
            return 4;
        }
        return 5;
    };
    const int ra = rank(a.kind());
    const int rb = rank(b.kind());
    if (ra != rb) {
        return ra < rb;
    }
    return a.name() < b.name();
}

} // namespace affhom
