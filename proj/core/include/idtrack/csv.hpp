#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "idtrack/sweep.hpp"

namespace idtrack {

inline constexpr std::string_view kCsvHeader =
    "scenario,algo,lambda,gamma_mean,avg_sensors_awake,avg_tracking_error,runs,horizon,seed";

struct CsvContext {
  std::string scenario;
  std::string algo;
  std::size_t horizon = 30;
  std::uint64_t seed = 0;
};

/// Header plus one line per row. Numbers use fixed precision so output is
/// byte-stable; gamma_mean is empty for planners without a confidence index.
void write_csv(std::ostream& out, const CsvContext& context, std::span<const SweepRow> rows);

std::string format_fixed(double value, int digits = 6);

}  // namespace idtrack
