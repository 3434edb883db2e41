#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "test_support.hpp"

#include <affhom/series_io.hpp>

using namespace affhom;

namespace {

const std::filesystem::path scratch = std::filesystem::temp_directory_path() / "affhom_cli_test";

int run(const std::string& args)
{
    std::filesystem::create_directories(scratch);
    const std::string cmd =
        std::string(AFFHOM_CLI) + " " + args + " > " + (scratch / "stdout").string() + " 2> " + (scratch / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string out()
{
    return slurp(scratch / "stdout");
}

std::string script(const char* name)
{
    return (std::filesystem::path(AFFHOM_DATA_DIR) / "scripts" / name).string();
}

} // namespace

TEST_CASE("verify exit codes")
{
    CHECK(run("verify --model cayley2 --order 10") == 0);
    CHECK(out().find("verdict: pass") != std::string::npos);
    CHECK(run("verify --model s-theta --order 9 --theta -2") == 0);
    CHECK(run("verify --model merker4-plus --order 3") == 2);
    CHECK(run("verify --model nosuch --order 5") == 2);
    CHECK(run("verify --model cayley2") == 2);
    CHECK(run("verify --model s-theta --order 9 --theta 1/0") == 2);
}

TEST_CASE("usage errors")
{
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("expand --order 5") == 2);
    CHECK(run("hessian") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("expand writes a series file")
{
    const auto file = scratch / "m3.series";
    std::filesystem::remove(file);
    CHECK(run("expand --model merker3 --order 10 --out " + file.string()) == 0);
    const RSeries s = load_series(file);
    CHECK(s.bound() == 10);
    CHECK(s.coefficient({6, 0, 4}) == ratio(7, 48));
}

TEST_CASE("symmetry and hessian on a series file")
{
    const auto file = scratch / "c2.series";
    REQUIRE(run("expand --model cayley2 --order 12 --out " + file.string()) == 0);
    CHECK(run("symmetry --in " + file.string() + " --order 10") == 0);
    CHECK(out().find("symmetry dimension at order 10: 4") != std::string::npos);
    CHECK(out().find("stabilized") != std::string::npos);
    CHECK(run("symmetry --model cayley2 --order 10") == 0);
    CHECK(out().find("span equals the generators of cayley2: yes") != std::string::npos);
    CHECK(run("symmetry --in " + file.string() + " --order 12") == 2);
    CHECK(run("hessian --in " + file.string()) == 0);
    CHECK(out().find("rank1: yes") != std::string::npos);

    std::ofstream(scratch / "bad.series") << "vars=2 bound=4\n2 0 : 1/2\n0 2 : 1\n";
    CHECK(run("hessian --in " + (scratch / "bad.series").string()) == 1);
}

TEST_CASE("bracket tables")
{
    CHECK(run("bracket --model merker4-plus") == 0);
    CHECK(out().find("[e1, e3] = -4/15*e4: ok") != std::string::npos);
    CHECK(run("bracket --model s-theta") == 0);
    CHECK(out().find("[e1, e2] = 0: ok") != std::string::npos);
}

TEST_CASE("classify replays the trees")
{
    for (const char* name : {"tree-n2", "tree-n3", "tree-n4"}) {
        CHECK(run("classify --script " + script(name)) == 0);
    }
    const std::string first = (run("classify --script " + script("tree-n2")), out());
    CHECK(first == (run("classify --script " + script("tree-n2")), out()));

    std::ofstream(scratch / "failing") << "dimension 2\njet generic 4\nexpect-contradiction\n";
    CHECK(run("classify --script " + (scratch / "failing").string()) == 1);
    std::ofstream(scratch / "malformed") << "dimension 2\nfrobnicate\n";
    CHECK(run("classify --script " + (scratch / "malformed").string()) == 2);
    CHECK(run("classify --script " + (scratch / "missing").string()) == 2);
}
