#include <string>
#include <vector>

#include "csamp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return csamp::cli_main(args);
}
