#include <string>
#include <vector>

#include "wgame/cli.hpp"

int main(int argc, char** argv) {
  return wgame::cli::run(std::vector<std::string>(argv, argv + argc));
}
