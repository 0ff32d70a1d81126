#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ringlab::cli {

/// Exit codes: 0 success, 1 validation/usage failure, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// "a,b,c" or inclusive "start:step:stop" (endpoint kept within half a step).
std::vector<double> parse_real_list(const std::string& text);

/// Flat key=value lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace ringlab::cli
