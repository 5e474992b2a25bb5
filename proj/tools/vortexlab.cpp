// Command-line driver. Subcommands are registered as the library modules
// land; see README.md for usage.

#include <cstdio>

int main() {
  std::fprintf(stderr, "vortexlab: no subcommands wired up yet\n");
  return 2;
}
