#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chrgen::cli {

/// Exit statuses of the command-line driver.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kLimitBreach = 2;

/// Runs one chrgen command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chrgen::cli
