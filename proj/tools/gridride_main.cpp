#include <string>
#include <vector>

#include "gridride/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gridride::cli::dispatch(args);
}
