#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <affhom/series.hpp>

namespace affhom {

// Header line "vars=<k> bound=<N> [key=value ...]". Extra keys are kept.
struct SeriesHeader {
    int vars = 0;
    int bound = 0;
    std::map<std::string, std::string> extra;
};

// Lines "e1 ... ek : coefficient"; '#' starts a comment. Coefficients may be
// polynomial expressions for the symbolic reader.
PSeries read_pseries(std::istream& in, SeriesHeader* header = nullptr);
RSeries read_series(std::istream& in, SeriesHeader* header = nullptr);
PSeries load_pseries(const std::filesystem::path& path, SeriesHeader* header = nullptr);
RSeries load_series(const std::filesystem::path& path, SeriesHeader* header = nullptr);

void write_series(std::ostream& out, const RSeries& s);
void write_series(std::ostream& out, const PSeries& s);
std::string series_text(const RSeries& s);

// Human-readable sum, e.g. "1/2*x^2 + 1/2*x^2*y", with the given variable names.
std::string render_series(const RSeries& s, const std::vector<std::string>& names);

// Series of a polynomial expression in the named coordinates; other symbols
// stay in the coefficients. Terms above the bound are dropped.
PSeries series_from_poly(const ParamPoly& p, const std::vector<std::string>& names, int bound);
// Same for text such as "x^2/2 + 1/2*x^2*y", with the default names.
PSeries parse_pseries(std::string_view text, int num_vars, int bound);
// Rational version; throws PreconditionError on a symbolic coefficient.
RSeries parse_series(std::string_view text, int num_vars, int bound);

// Default variable names: x, y (n = 2); x, y, z; x, y, z, w.
std::vector<std::string> base_variable_names(int n);

} // namespace affhom
