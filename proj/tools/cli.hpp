#pragma once

#include <string>
#include <vector>

namespace nctopos::cli {

  struct Outcome {
    int         code = 0;  // 0 ok, 1 negative verdict, 2 input error
    std::string out;
    std::string err;
  };

  // args excludes the program name.
  Outcome run_command(std::vector<std::string> const& args);

}  // namespace nctopos::cli
