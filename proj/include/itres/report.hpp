#ifndef ITRES_REPORT_HPP
#define ITRES_REPORT_HPP

#include "itres/rational.hpp"

#include <string>

namespace itres {

// Deterministic self-check report (JSON, sorted keys, no timing so that
// byte-identical output is reproducible across runs and thread counts).
// Returns the JSON text; `ok` reports the overall verdict.
std::string selftest_report(bool& ok);

} // namespace itres

#endif
