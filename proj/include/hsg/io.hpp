#pragma once

#include <string>
#include <string_view>

#include "hsg/abp.hpp"
#include "hsg/circuit.hpp"
#include "hsg/mmtensor.hpp"

namespace hsg {

/// `.acir`: optional `ninputs <n>` (inferred from the inputs when absent),
/// gate lines `g<k> input|const|add|mul ...` with dense ids, and one or more
/// `output g<i> ...` lines. `#` starts a comment. Errors are ParseError with
/// the offending line.
Circuit parse_acir(std::string_view text);
/// Canonical form: `ninputs` first, default edge scalars omitted, one output line.
std::string serialize_acir(const Circuit& c);

/// `.tabp`: `dims n1 ... n_{m+1}`, `nvars v`, then `M<i> <row> <col> = <affine>`
/// lines, all indices zero based. Absent entries are 0.
TraceAbp parse_tabp(std::string_view text);
std::string serialize_tabp(const TraceAbp& a);

/// `.dec`: `tensor n m p`, `terms r`, then for each term the lines
/// `u: ...` (n*m), `v: ...` (m*p), `w: ...` (n*p) of series literals.
Decomposition parse_dec(std::string_view text);
std::string serialize_dec(const Decomposition& d);

/// Shortest literal for a series (trailing zero coefficients dropped).
std::string series_literal(const EpsSeries& s);

/// Whole file; throws ArgumentError if it cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace hsg
