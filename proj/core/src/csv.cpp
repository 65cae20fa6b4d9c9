#include "idtrack/csv.hpp"

#include <cstdio>
#include <ostream>

namespace idtrack {

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void write_csv(std::ostream& out, const CsvContext& context, std::span<const SweepRow> rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << context.scenario << ',' << context.algo << ',' << format_fixed(row.lambda, 4) << ','
        << (row.gamma_mean ? format_fixed(*row.gamma_mean, 4) : std::string()) << ','
        << format_fixed(row.avg_sensors_awake) << ',' << format_fixed(row.avg_tracking_error) << ','
        << row.runs << ',' << context.horizon << ',' << context.seed << '\n';
  }
}

}  // namespace idtrack
