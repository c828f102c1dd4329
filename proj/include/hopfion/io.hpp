#pragma once

#include <string>
#include <vector>

#include "hopfion/types.hpp"

namespace hopfion {

// File-system or format problem in user-supplied input or output paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

// Writes to a sibling temporary file, then renames over `path`. The parent
// directory must exist.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// index,x,y,z
std::string curve_csv(const std::vector<Point3>& curve);

}  // namespace hopfion
