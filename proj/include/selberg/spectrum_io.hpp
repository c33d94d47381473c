// Spectrum cache file format (v1):
//   # selberg-spectrum v1 X=<X> weight=<spec>
//   n,m_num,m_den,log_eps,lambda_bar,components
//   3,1,1,9.6242365011920694e-01,2.2536526727392757e+00,1:5:1:1:1
//   ...
// components are u:D:j:h:lam joined by '|'; floats use 17 significant
// digits so write -> read -> write is byte-identical.
#pragma once

#include <filesystem>

#include "selberg/spectrum.hpp"

namespace selberg::spectrum {

// Atomic write (temp file + rename).  Throws std::runtime_error on I/O failure.
void write_cache(const SpectrumTable& table, const std::filesystem::path& path);

// Parses a cache file; throws std::runtime_error with a line number on
// malformed input.
SpectrumTable read_cache(const std::filesystem::path& path);

// Weight-table file: CSV lines "D,lambda" with '#' comments.
std::map<long long, mpq_class> read_weight_table(const std::filesystem::path& path);

// Exact rational from a decimal string like "2", "1/3" or "0.25".
mpq_class parse_rational(const std::string& s);
std::string format_rational(const mpq_class& q);

std::string format_double(double v);  // %.17g
}  // namespace selberg::spectrum
