#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cubicsum/exp_sums.hpp"
#include "cubicsum/factor.hpp"
#include "cubicsum/factor_plan.hpp"
#include "cubicsum/harness.hpp"
#include "cubicsum/quad_field.hpp"

namespace cubicsum {

enum class Format { csv, json };

// Parses "csv" | "json"; anything else throws invalid_input.
Format parse_format(const std::string& s);

// Shortest-roundtrip decimal form of a double (never locale-dependent).
std::string format_double(double x);

// Every writer emits a complete document terminated by a single LF.  JSON
// documents use insertion-ordered keys and big integers rendered as decimal
// strings, so identical data always serializes to identical bytes.  Wall-clock
// fields (e.g. suite runtimes) are deliberately excluded.
void write_approx(std::ostream& os, Format fmt, const RationalApprox& approx);
void write_sum(std::ostream& os, Format fmt, const std::string& alpha,
               int64_t n, const SumValue& value);
void write_spectrum(std::ostream& os, Format fmt, int64_t a, int64_t q,
                    const std::vector<SumValue>& spectrum);
void write_split(std::ostream& os, Format fmt, const FactorSplit& split);
// CSV schema (pinned): trial,lhs,rhs,ratio — per-record inputs are JSON-only.
void write_suite(std::ostream& os, Format fmt, const SuiteReport& report);
// CSV carries the per-r rows; the aggregate block and per-(r,m[,u]) cells are
// JSON-only.
void write_trace(std::ostream& os, Format fmt, const TraceReport& report);
// CSV schema (pinned): N,abs_sum,running_sup,slope — plug-through extras are
// JSON-only.
void write_scan(std::ostream& os, Format fmt, const std::string& alpha,
                const std::vector<ScanRecord>& records);
// CSV schema (pinned): n,v,v0,exponent.
void write_abc(std::ostream& os, Format fmt, int64_t d,
               const std::vector<AbcRow>& rows);

}  // namespace cubicsum
