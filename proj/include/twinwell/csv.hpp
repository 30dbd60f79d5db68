#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twinwell {

// Fixed "%.15g" formatting so reruns are byte-identical.
std::string format_number(double v);

void write_csv_header(std::ostream& os, const std::vector<std::string>& columns);
void write_csv_row(std::ostream& os, const std::vector<double>& values);

}  // namespace twinwell
