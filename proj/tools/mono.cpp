#include <cstdio>
#include <string>
#include <vector>

#include "mono/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const mono::CommandResult result = mono::cli_dispatch(args);
  const std::string out = result.render();
  std::fwrite(out.data(), 1, out.size(), stdout);
  return result.status;
}
