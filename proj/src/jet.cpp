#include <affhom/jet.hpp>

#include <string>

namespace affhom {

Symbol jet_symbol(std::string_view head, const Exponents& alpha)
{
    std::vector<int> idx;
    for (int i = 0; i < alpha.size(); ++i) {
        idx.push_back(alpha[i]);
    }
    return Symbol::indexed(SymbolKind::jet_coefficient, head, idx);
}

Exponents jet_index(Symbol s)
{
    const std::string& name = s.name();
    const auto open = name.find('[');
    if (open == std::string::npos || name.back() != ']') {
        throw ParseError("'" + name + "' is not an indexed jet symbol");
    }
    std::vector<int> idx;
    std::size_t pos = open + 1;
    while (pos < name.size() - 1) {
        const auto comma = name.find(',', pos);
        const auto end = comma == std::string::npos ? name.size() - 1 : comma;
        idx.push_back(std::stoi(name.substr(pos, end - pos)));
        pos = end + 1;
    }
    Exponents e(static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        e.set(static_cast<int>(i), idx[i]);
    }
    return e;
}

PSeries generic_transverse_jet(int num_vars, int bound, std::string_view head)
{
    PSeries s(num_vars, bound);
    if (bound >= 2) {
        Exponents e(num_vars);
        e.set(0, 2);
        s.set(e, ParamPoly(Rational(1, 2)));
    }
    for (int d = 3; d <= bound; ++d) {
        for_each_of_degree(num_vars, d, [&](const Exponents& e) {
            if (e.transverse_degree() <= 1) {
                s.set(e, ParamPoly(jet_symbol(head, e)) * (Rational(1) / multi_factorial(e)));
            }
        });
    }
    return s;
}

Substitution rename_jet_symbols(const PSeries& s, std::string_view from, std::string_view to)
{
    Substitution sub;
    for (const auto& [e, c] : s.terms()) {
        for (Symbol sym : c.symbols()) {
            const std::string& name = sym.name();
            if (name.size() > from.size() && name.compare(0, from.size(), from) == 0 && name[from.size()] == '[') {
                sub.emplace(sym, ParamPoly(Symbol::named(std::string(to) + name.substr(from.size()))));
            }
        }
    }
    return sub;
}

} // namespace affhom
