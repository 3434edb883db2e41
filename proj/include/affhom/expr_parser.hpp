#pragma once

#include <string_view>

#include <affhom/param_poly.hpp>

namespace affhom {

// Parses polynomial expressions such as "-1/2*a[1,1]^2*F[2,1] + 3" or
// "(1 - y) + 1/3*theta*u". Symbols are interned with their inferred kind.
// Division is allowed by monomials only; "^" takes a signed integer.
ParamPoly parse_poly(std::string_view text);

} // namespace affhom
