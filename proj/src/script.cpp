#include <affhom/script.hpp>

#include <fstream>
#include <map>
#include <sstream>

#include <affhom/equivalence.hpp>
#include <affhom/errors.hpp>
#include <affhom/expr_parser.hpp>
#include <affhom/hessian.hpp>
#include <affhom/jet.hpp>
#include <affhom/models.hpp>
#include <affhom/series_io.hpp>
#include <affhom/symmetry.hpp>

namespace affhom {

namespace {

struct Arity {
    std::size_t min;
    std::size_t max;
};

const std::map<std::string, Arity, std::less<>>& step_arity()
{
    constexpr std::size_t any = 64;
    static const std::map<std::string, Arity, std::less<>> table{
        {"dimension", {1, 1}},
        {"jet", {2, 2}},
        {"map", {1, 6}},
        {"assume-zero", {1, 1}},
        {"assume-nonzero", {1, 1}},
        {"normalize", {5, 6}},
        {"stabilize-through", {1, 1}},
        {"assign", {3, any}},
        {"extend-jet", {1, 1}},
        {"propagate-order", {1, 1}},
        {"propagate-through", {1, 1}},
        {"branch", {1, 1}},
        {"end", {0, 0}},
        {"expect-forced", {3, any}},
        {"expect-contradiction", {0, any}},
        {"expect-conflict", {5, any}},
        {"expect-split", {1, 1}},
        {"expect-cylinder", {0, 0}},
        {"expect-trivial-isotropy", {1, 1}},
        {"emit-model", {1, 1}},
    };
    return table;
}

std::vector<std::string> split_words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string t; in >> t;) {
        w.push_back(t);
    }
    return w;
}

// text after the first n words
std::string tail(const ScriptStep& step, std::size_t n)
{
    std::istringstream in(step.text);
    std::string skip;
    for (std::size_t i = 0; i < n; ++i) {
        in >> skip;
    }
    std::string rest;
    std::getline(in, rest);
    const auto b = rest.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : rest.substr(b);
}

int to_int(const ScriptStep& step, const std::string& w)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(w, &used);
        if (used == w.size()) {
            return v;
        }
    } catch (const std::logic_error&) {
    }
    throw ParseError("line " + std::to_string(step.line) + ": expected an integer, got '" + w + "'");
}

Symbol jet_name(const ScriptStep& step, const std::string& w, char head)
{
    const Symbol s = Symbol::named(w);
    if (s.kind() != SymbolKind::jet_coefficient || w.front() != head) {
        throw ParseError("line " + std::to_string(step.line) + ": expected a " + std::string(1, head)
                         + "-jet symbol, got '" + w + "'");
    }
    return s;
}

// Failed expectation: aborts the replay.
struct ExpectationFailure {
    std::string message;
};

struct Frame {
    std::string label;
    std::optional<NormalizationState> state;
    int propagated = 0;
    std::optional<PropagationOutcome> last;
    std::optional<Contradiction> contradiction;
};

class Runner {
public:
    explicit Runner(const BranchScript& s) : script_(s) {}

    ScriptReport run()
    {
        report_.text = "script " + script_.name + "\n";
        frames_.push_back(Frame{"root", std::nullopt, 0, std::nullopt, std::nullopt});
        if (script_.steps.empty()) {
            report_.text += "no steps; initial state: no dimension, no jet\n";
        }
        for (const auto& step : script_.steps) {
            ++report_.steps;
            try {
                execute(step);
            } catch (const ExpectationFailure& f) {
                ++report_.expectations_failed;
                say(step, "FAIL " + f.message);
                break;
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                report_.error = "line " + std::to_string(step.line) + ": " + e.what();
                say(step, "ERROR " + std::string(e.what()));
                break;
            }
        }
        std::string models;
        for (const auto& m : report_.models) {
            models += (models.empty() ? "" : ", ") + m;
        }
        report_.text += "summary: " + std::to_string(report_.steps) + " steps, "
                        + std::to_string(report_.expectations_passed) + " expectations passed, "
                        + std::to_string(report_.expectations_failed) + " failed; models emitted: "
                        + (models.empty() ? "none" : models) + "\n";
        report_.text += std::string("result: ") + (report_.ok() ? "ok" : "FAILED") + "\n";
        return report_;
    }

private:
    const BranchScript& script_;
    ScriptReport report_;
    std::vector<Frame> frames_;
    int n_ = 0;

    Frame& top() { return frames_.back(); }

    std::string path() const
    {
        std::string p;
        for (std::size_t i = 1; i < frames_.size(); ++i) {
            p += (p.empty() ? "" : "/") + frames_[i].label;
        }
        return p.empty() ? "root" : p;
    }

    void say(const ScriptStep& step, const std::string& what)
    {
        report_.text += "[" + path() + "] " + step.text + (what.empty() ? "" : ": " + what) + "\n";
    }

    void detail(const std::string& line) { report_.text += "    " + line + "\n"; }

    void pass(const ScriptStep& step, const std::string& what)
    {
        ++report_.expectations_passed;
        say(step, "pass" + (what.empty() ? "" : " (" + what + ")"));
    }

    NormalizationState& state(const ScriptStep& step)
    {
        if (!top().state) {
            throw PreconditionError("line " + std::to_string(step.line) + ": no jet loaded");
        }
        return *top().state;
    }

    void require_alive(const ScriptStep& step)
    {
        if (top().contradiction) {
            throw PreconditionError("line " + std::to_string(step.line)
                                    + ": branch already ended in a contradiction");
        }
    }

    SymbolSet jet_registry(const NormalizationState& st) const
    {
        SymbolSet r;
        for (Symbol s : st.map.registry) {
            if (s.kind() == SymbolKind::jet_coefficient && s.name().front() == 'F') {
                r.insert(s);
            }
        }
        return r;
    }

    std::filesystem::path resolve(const std::string& file) const
    {
        const std::filesystem::path p(file);
        if (p.is_absolute()) {
            return p;
        }
        if (!script_.base_dir.empty() && std::filesystem::exists(script_.base_dir / p)) {
            return script_.base_dir / p;
        }
        return data_path(file);
    }

    void execute(const ScriptStep& step)
    {
        const auto& w = step.words;
        const std::string& k = w[0];
        if (k == "dimension") {
            n_ = to_int(step, w[1]);
            if (n_ < 2 || n_ > 4) {
                throw PreconditionError("dimension must be 2, 3 or 4");
            }
            say(step, "");
            return;
        }
        if (n_ == 0) {
            throw PreconditionError("line " + std::to_string(step.line) + ": 'dimension' must come first");
        }
        if (k == "branch") {
            Frame f = top();
            f.label = w[1];
            frames_.push_back(std::move(f));
            say(step, "");
        } else if (k == "end") {
            say(step, "");
            frames_.pop_back();
        } else if (k == "jet") {
            PSeries F;
            if (w[1] == "generic") {
                F = rank1_complete(generic_transverse_jet(n_, to_int(step, w[2]), "F"));
            } else if (w[1] == "file") {
                F = rank1_complete(load_pseries(resolve(w[2])));
            } else {
                throw ParseError("line " + std::to_string(step.line) + ": expected 'jet generic' or 'jet file'");
            }
            if (F.num_vars() != n_) {
                throw PreconditionError("jet has " + std::to_string(F.num_vars()) + " variables, expected "
                                        + std::to_string(n_));
            }
            top().state = NormalizationState::initial(F, AffineMapSym::general(n_));
            top().propagated = 0;
            say(step, "F through order " + std::to_string(F.bound()));
        } else if (k == "map") {
            NormalizationState& st = state(step);
            if (!st.log.empty()) {
                throw PreconditionError("the map must be chosen before any normalization");
            }
            AffineMapSym map;
            if (w[1] == "general" && w.size() == 2) {
                map = AffineMapSym::general(n_);
            } else if (w[1] == "identity" && w.size() == 2) {
                map = AffineMapSym::identity(n_);
            } else if (w[1] == "diagonal" && static_cast<int>(w.size()) == n_ + 3) {
                std::vector<ParamPoly> diag;
                for (std::size_t i = 2; i < w.size(); ++i) {
                    diag.push_back(parse_poly(w[i]));
                }
                map = AffineMapSym::diagonal(diag);
            } else {
                throw ParseError("line " + std::to_string(step.line) + ": malformed map step");
            }
            st = NormalizationState::initial(st.F, map);
            say(step, "");
        } else if (k == "assume-zero") {
            require_alive(step);
            NormalizationState& st = state(step);
            st = assume_zero(st, jet_name(step, w[1], 'F'));
            say(step, "");
        } else if (k == "assume-nonzero") {
            require_alive(step);
            NormalizationState& st = state(step);
            st = assume_nonzero(st, jet_name(step, w[1], 'F'));
            say(step, "");
        } else if (k == "normalize") {
            normalize(step);
        } else if (k == "stabilize-through") {
            require_alive(step);
            NormalizationState& st = state(step);
            const StabilityResult r = stability_check(st, to_int(step, w[1]));
            st = stabilize_through(st, to_int(step, w[1]));
            say(step, "");
            std::istringstream lines(r.to_text());
            for (std::string line; std::getline(lines, line);) {
                detail(line.substr(line.find_first_not_of(' ')));
            }
        } else if (k == "assign") {
            require_alive(step);
            if (w[2] != ":=") {
                throw ParseError("line " + std::to_string(step.line) + ": expected 'assign <sym> := <expr>'");
            }
            NormalizationState& st = state(step);
            st = assign_jet(st, jet_name(step, w[1], 'F'), parse_poly(tail(step, 3)));
            say(step, "");
        } else if (k == "extend-jet") {
            NormalizationState& st = state(step);
            const int b = to_int(step, w[1]);
            st.F = extend_jet(st.F, b, "F");
            st.G = extend_jet(st.G, b, "G");
            say(step, "F through order " + std::to_string(b));
        } else if (k == "propagate-order") {
            require_alive(step);
            say(step, "");
            const int order = to_int(step, w[1]);
            propagate(order);
            top().propagated = std::max(top().propagated, order);
        } else if (k == "propagate-through") {
            require_alive(step);
            say(step, "");
            const int order = to_int(step, w[1]);
            for (int j = top().propagated + 1; j <= order && !top().contradiction; ++j) {
                propagate(j);
                top().propagated = j;
            }
        } else if (k.starts_with("expect-")) {
            expect(step);
        } else if (k == "emit-model") {
            emit(step);
        } else {
            throw ParseError("line " + std::to_string(step.line) + ": unknown step '" + k + "'");
        }
    }

    void normalize(const ScriptStep& step)
    {
        require_alive(step);
        const auto& w = step.words;
        if (w[2] != ":=" || w[4] != "solving" || (w.size() == 7 && w[6] != "mirror")) {
            throw ParseError("line " + std::to_string(step.line)
                             + ": expected 'normalize <G-sym> := <value> solving <sym> [mirror]'");
        }
        if (w.size() < 6) {
            throw ParseError("line " + std::to_string(step.line) + ": missing the solved symbol");
        }
        NormalizationState& st = state(step);
        const Symbol g = jet_name(step, w[1], 'G');
        const std::size_t notes = st.notes.size();
        st = normalize_step(st, jet_index(g), parse_rational(w[3]), Symbol::named(w[5]), w.size() == 7);
        say(step, "");
        for (std::size_t i = notes; i < st.notes.size(); ++i) {
            detail(st.notes[i]);
        }
    }

    void propagate(int order)
    {
        NormalizationState& st = *top().state;
        if (order + 1 > st.F.bound()) {
            throw PreconditionError("propagation at order " + std::to_string(order) + " needs the jet through order "
                                    + std::to_string(order + 1));
        }
        PropagationOutcome out = propagate_homogeneity(st.F, jet_registry(st), order);
        for (const auto& [s, v] : out.forced) {
            st = assign_jet(st, s, v);
            detail("order " + std::to_string(order) + ": forced " + s.name() + " = " + v.to_string());
        }
        if (out.contradiction) {
            detail("order " + std::to_string(order) + ": " + out.contradiction->to_text());
            top().contradiction = out.contradiction;
        } else if (out.split_request) {
            detail("order " + std::to_string(order) + ": undecided " + out.split_request->name());
        }
        top().last = std::move(out);
    }

    ParamPoly jet_value(const NormalizationState& st, Symbol s) const
    {
        const Exponents alpha = jet_index(s);
        if (alpha.degree() > st.F.bound()) {
            throw PreconditionError(s.name() + " lies beyond the jet bound");
        }
        return st.F.coefficient(alpha) * multi_factorial(alpha);
    }

    void expect(const ScriptStep& step)
    {
        const auto& w = step.words;
        const std::string& k = w[0];
        if (k == "expect-forced") {
            if (w[2] != "=") {
                throw ParseError("line " + std::to_string(step.line) + ": expected 'expect-forced <sym> = <expr>'");
            }
            const Symbol s = jet_name(step, w[1], 'F');
            const ParamPoly want = parse_poly(tail(step, 3));
            const ParamPoly got = jet_value(state(step), s);
            if (got != want) {
                throw ExpectationFailure{s.name() + ": expected " + want.to_string() + ", got " + got.to_string()};
            }
            pass(step, "");
        } else if (k == "expect-contradiction") {
            const auto& c = top().contradiction;
            if (!c) {
                throw ExpectationFailure{"no contradiction reached"};
            }
            if (w.size() >= 2 && c->transitivity != w[1]) {
                throw ExpectationFailure{"contradiction on " + c->transitivity + ", expected " + w[1]};
            }
            if (w.size() >= 3 && c->value != parse_poly(tail(step, 2))) {
                throw ExpectationFailure{"coefficient " + c->value.to_string() + ", expected " + tail(step, 2)};
            }
            pass(step, c->to_text());
        } else if (k == "expect-conflict") {
            const auto& c = top().contradiction;
            const std::string rest = tail(step, 3);
            const auto vs = rest.find(" vs ");
            if (w[2] != "=" || vs == std::string::npos) {
                throw ParseError("line " + std::to_string(step.line)
                                 + ": expected 'expect-conflict <sym> = <expr> vs <expr>'");
            }
            if (!c || !c->conflict) {
                throw ExpectationFailure{"no conflicting values recorded"};
            }
            const Symbol s = jet_name(step, w[1], 'F');
            const ParamPoly a = parse_poly(rest.substr(0, vs));
            const ParamPoly b = parse_poly(rest.substr(vs + 4));
            const Conflict& got = *c->conflict;
            if (got.symbol != s || got.forced != a || got.alternative != b) {
                throw ExpectationFailure{"conflict " + got.symbol.name() + " = " + got.forced.to_string() + " vs "
                                         + got.alternative.to_string()};
            }
            pass(step, "");
        } else if (k == "expect-split") {
            const Symbol s = jet_name(step, w[1], 'F');
            const auto& last = top().last;
            if (!last || !last->split_request || *last->split_request != s) {
                throw ExpectationFailure{"last propagation left "
                                         + (last && last->split_request ? last->split_request->name()
                                                                        : std::string("nothing"))
                                         + " undecided"};
            }
            pass(step, "");
        } else if (k == "expect-cylinder") {
            const NormalizationState& st = state(step);
            for (const auto& [e, c] : st.F.terms()) {
                if (e.transverse_degree() > 0) {
                    throw ExpectationFailure{"coefficient " + e.index_string() + " = " + c.to_string()
                                             + " depends on the transverse variables"};
                }
            }
            pass(step, "verdict: cylinder, F depends on x only through order " + std::to_string(st.F.bound()));
        } else if (k == "expect-trivial-isotropy") {
            const StabilityResult r = stability_check(state(step), to_int(step, w[1]));
            if (!r.free_parameters.empty() || !r.relations.empty() || !(r.map == AffineMapSym::identity(n_))) {
                throw ExpectationFailure{"residual map " + r.map.to_text()};
            }
            pass(step, "isotropy reduced to the identity");
        } else {
            throw ParseError("line " + std::to_string(step.line) + ": unknown step '" + k + "'");
        }
    }

    void emit(const ScriptStep& step)
    {
        const ModelSpec& m = find_model(step.words[1]);
        const NormalizationState& st = state(step);
        if (top().contradiction) {
            throw ExpectationFailure{"branch ended in a contradiction"};
        }
        if (m.n != n_) {
            throw ExpectationFailure{m.name + " lives in dimension " + std::to_string(m.n)};
        }
        SeriesHeader h;
        const PSeries full = load_pseries(data_path(m.listing), &h);
        const int order = std::min(st.F.bound(), full.bound());
        const PSeries listed = full.truncated(order);
        const PSeries ours = st.F.truncated(order);
        int diffs = 0;
        std::string first;
        for (int d = 0; d <= order; ++d) {
            for_each_of_degree(n_, d, [&](const Exponents& e) {
                const ParamPoly a = ours.coefficient(e) * multi_factorial(e);
                const ParamPoly b = listed.coefficient(e) * multi_factorial(e);
                if (a != b) {
                    if (diffs++ == 0) {
                        first = e.index_string() + ": derived " + a.to_string() + ", listed " + b.to_string();
                    }
                }
            });
        }
        if (diffs > 0) {
            throw ExpectationFailure{std::to_string(diffs) + " coefficients differ from the listing, first " + first};
        }
        report_.models.push_back(m.name);
        pass(step, "jet matches the listing through order " + std::to_string(order));
    }
};

} // namespace

BranchScript parse_branch_script(std::istream& in, std::string name, std::filesystem::path base_dir)
{
    BranchScript script{std::move(name), std::move(base_dir), {}};
    int depth = 0;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = raw.substr(0, hash);
        auto w = split_words(line);
        if (w.empty()) {
            continue;
        }
        const auto it = step_arity().find(w[0]);
        if (it == step_arity().end()) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown step '" + w[0] + "'");
        }
        const std::size_t args = w.size() - 1;
        if (args < it->second.min || args > it->second.max) {
            throw ParseError("line " + std::to_string(line_no) + ": wrong number of arguments for '" + w[0] + "'");
        }
        if (w[0] == "branch") {
            ++depth;
        } else if (w[0] == "end" && --depth < 0) {
            throw ParseError("line " + std::to_string(line_no) + ": 'end' without 'branch'");
        }
        std::string text;
        for (const auto& t : w) {
            text += (text.empty() ? "" : " ") + t;
        }
        script.steps.push_back(ScriptStep{line_no, std::move(text), std::move(w)});
    }
    if (depth != 0) {
        throw ParseError("unterminated branch in " + script.name);
    }
    return script;
}

BranchScript load_branch_script(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open script " + path.string());
    }
    return parse_branch_script(in, path.filename().string(), path.parent_path());
}

ScriptReport run_branch_script(const BranchScript& script)
{
    return Runner(script).run();
}

} // namespace affhom
