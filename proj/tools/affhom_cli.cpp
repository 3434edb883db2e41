#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <affhom/errors.hpp>
#include <affhom/hessian.hpp>
#include <affhom/models.hpp>
#include <affhom/script.hpp>
#include <affhom/series_io.hpp>
#include <affhom/symmetry.hpp>

using namespace affhom;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string model;
    std::optional<int> order;
    std::string in;
    std::string out;
    std::string theta;
    std::string script;
};

std::optional<Rational> theta_of(const Options& o)
{
    if (o.theta.empty()) {
        return std::nullopt;
    }
    return parse_rational(o.theta);
}

int require_order(const Options& o)
{
    if (!o.order) {
        throw PreconditionError("--order is required");
    }
    return *o.order;
}

void emit(const Options& o, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) {
        throw PreconditionError("cannot write " + o.out);
    }
    f << text;
}

// Series from --in or from --model at the given bound.
PSeries input_series(const Options& o, int bound)
{
    if (!o.in.empty() == !o.model.empty()) {
        throw PreconditionError("give exactly one of --in and --model");
    }
    if (!o.in.empty()) {
        return load_pseries(o.in);
    }
    return model_series(o.model, bound, theta_of(o));
}

int cmd_expand(const Options& o)
{
    const PSeries s = model_series(o.model, require_order(o), theta_of(o));
    std::ostringstream text;
    write_series(text, s);
    emit(o, text.str());
    return exit_pass;
}

int cmd_verify(const Options& o)
{
    const VerificationReport r = verify_model(o.model, require_order(o), theta_of(o));
    emit(o, r.to_text());
    return r.pass ? exit_pass : exit_fail;
}

int cmd_hessian(const Options& o)
{
    const PSeries F = input_series(o, o.model.empty() ? 0 : require_order(o));
    const HessianReport r = check_hessian_rank1(F);
    emit(o, r.to_text(base_variable_names(F.num_vars())));
    return r.rank1 ? exit_pass : exit_fail;
}

int cmd_symmetry(const Options& o)
{
    const int order = require_order(o);
    const PSeries P = input_series(o, order + 1);
    if (P.bound() < order + 1) {
        throw PreconditionError("the series must be known through order " + std::to_string(order + 1));
    }
    const RSeries F = lower(P);
    const SymmetryResult r = solve_symmetry(F, order);
    std::ostringstream out;
    out << "symmetry dimension at order " << order << ": " << r.dimension << "\n";
    out << "symmetry dimension at order " << order - 1 << ": " << r.dimension_previous << "\n";
    out << (r.stabilized() ? "stabilized" : "not stabilized") << "\n";
    for (std::size_t i = 0; i < r.basis.size(); ++i) {
        out << "  f" << i + 1 << " = " << render_field(r.basis[i]) << "\n";
    }
    int status = exit_pass;
    if (!o.model.empty()) {
        const ModelSpec& m = find_model(o.model);
        std::vector<RField> gens;
        for (const auto& g : model_generators(m, theta_of(o))) {
            gens.push_back(lower(g));
        }
        const bool same = same_span(r.basis, gens);
        out << "span equals the generators of " << m.name << ": " << (same ? "yes" : "no") << "\n";
        status = same ? exit_pass : exit_fail;
    }
    emit(o, out.str());
    return status;
}

int cmd_bracket(const Options& o)
{
    const ModelSpec& m = find_model(o.model);
    const auto theta = theta_of(o);
    const auto gens = model_generators(m, theta);
    std::ostringstream out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        out << "e" << i + 1 << " = " << render_field(gens[i]) << "\n";
    }
    bool ok = true;
    for (const auto& b : check_brackets(m, theta)) {
        out << "[e" << b.i << ", e" << b.j << "] = " << b.expected << ": " << (b.ok ? "ok" : "FAIL")
            << (b.ok ? "" : " (computed " + b.computed + ")") << "\n";
        ok = ok && b.ok;
    }
    emit(o, out.str());
    return ok ? exit_pass : exit_fail;
}

int cmd_classify(const Options& o)
{
    if (o.script.empty()) {
        throw PreconditionError("--script is required");
    }
    const ScriptReport r = run_branch_script(load_branch_script(o.script));
    emit(o, r.text);
    return r.ok() ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"affhom: exact jets, symmetries and classification trees of affinely homogeneous hypersurfaces"};
    app.require_subcommand(1);
    Options o;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--out", o.out, "write the report here instead of standard output");
        return sub;
    };

    CLI::App* expand = add("expand", "Taylor expansion of a catalog model");
    expand->add_option("--model", o.model, "model name")->required();
    expand->add_option("--order", o.order, "truncation order")->required();
    expand->add_option("--theta", o.theta, "parameter value p/q");

    CLI::App* verify = add("verify", "tangency, brackets, Hessian and listing checks of a model");
    verify->add_option("--model", o.model, "model name")->required();
    verify->add_option("--order", o.order, "series order")->required();
    verify->add_option("--theta", o.theta, "parameter value p/q");

    CLI::App* hessian = add("hessian", "rank-1 check of the Hessian");
    hessian->add_option("--in", o.in, "series file");
    hessian->add_option("--model", o.model, "model name");
    hessian->add_option("--order", o.order, "series order for --model");
    hessian->add_option("--theta", o.theta, "parameter value p/q");

    CLI::App* symmetry = add("symmetry", "affine symmetry algebra of a series");
    symmetry->add_option("--in", o.in, "series file");
    symmetry->add_option("--model", o.model, "model name");
    symmetry->add_option("--order", o.order, "order of the tangency equations")->required();
    symmetry->add_option("--theta", o.theta, "parameter value p/q");

    CLI::App* bracket = add("bracket", "bracket table of a model's generators");
    bracket->add_option("--model", o.model, "model name")->required();
    bracket->add_option("--theta", o.theta, "parameter value p/q");

    CLI::App* classify = add("classify", "replay a branch script");
    classify->add_option("--script", o.script, "script file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (expand->parsed()) {
            return cmd_expand(o);
        }
        if (verify->parsed()) {
            return cmd_verify(o);
        }
        if (hessian->parsed()) {
            return cmd_hessian(o);
        }
        if (symmetry->parsed()) {
            return cmd_symmetry(o);
        }
        if (bracket->parsed()) {
            return cmd_bracket(o);
        }
        return cmd_classify(o);
    } catch (const PreconditionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
}
