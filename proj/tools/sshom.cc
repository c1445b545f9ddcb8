#include <iostream>
#include <string>
#include <vector>

#include "sshom/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sshom::runCli(args, std::cout, std::cerr);
}
