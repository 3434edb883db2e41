#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace affhom {

struct ScriptStep {
    int line = 0;
    std::string text;
    std::vector<std::string> words;
};

// Line-oriented branch script; '#' starts a comment. Steps:
//   dimension <n>
//   jet generic <bound> | jet file <path>
//   map general | map identity | map diagonal <p_1> ... <p_n> <p_u>
//   assume-zero <sym> | assume-nonzero <sym>
//   normalize <G-sym> := <rational> solving <sym> [mirror]
//   stabilize-through <order>
//   assign <F-sym> := <expr>
//   extend-jet <bound>
//   propagate-order <order> | propagate-through <order>
//   branch <label> ... end
//   expect-forced <F-sym> = <expr>
//   expect-contradiction [<T-sym or 1> [<value>]]
//   expect-conflict <F-sym> = <expr> vs <expr>
//   expect-split <F-sym>
//   expect-cylinder
//   expect-trivial-isotropy <order>
//   emit-model <name>
struct BranchScript {
    std::string name;
    std::filesystem::path base_dir; // resolves relative jet files
    std::vector<ScriptStep> steps;
};

// Checks keywords, arity and branch nesting; throws ParseError.
BranchScript parse_branch_script(std::istream& in, std::string name, std::filesystem::path base_dir = {});
BranchScript load_branch_script(const std::filesystem::path& path);

struct ScriptReport {
    std::string text;
    int steps = 0;
    int expectations_passed = 0;
    int expectations_failed = 0;
    std::vector<std::string> models; // emitted, in order
    std::optional<std::string> error; // illegal step, with its line
    bool ok() const { return expectations_failed == 0 && !error; }
};

// Replays the script. Stops at the first failing expectation or illegal step.
ScriptReport run_branch_script(const BranchScript& script);

} // namespace affhom
