#pragma once
// CSV files for series and kernels.
//
//   series:  t,value     t = 0, 1, ...
//   kernel:  lag,value   lag = -K/2 ... K/2-1
//
// Values are written with 17 significant digits so a round trip is exact.

#include "wrt/signals.hpp"

#include <filesystem>
#include <string>

namespace wrt::io {

std::string format_double(double v);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);
void write_kernel_csv(const std::filesystem::path& path, const Kernel& kernel);

// The first line is a header and is skipped. Blank lines are ignored; the
// first column must count up from 0 (series) or from -K/2 (kernel).
TimeSeries read_series_csv(const std::filesystem::path& path);
Kernel read_kernel_csv(const std::filesystem::path& path);

// Writes through a temporary sibling and renames it into place.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

} // namespace wrt::io
