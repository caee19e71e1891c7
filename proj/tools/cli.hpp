#pragma once
#include <string>
#include <vector>

namespace padyn::cli {

struct Outcome {
  int exit_code = 0;  // 0 ok, 1 usage or domain error, 2 verification failure
  std::string out;
  std::string err;
};

// args excludes the program name.
Outcome run(const std::vector<std::string>& args);

}  // namespace padyn::cli
