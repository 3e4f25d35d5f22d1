#include "swarm_lssvm/cli.hpp"

int main(int argc, char** argv) { return swarm_lssvm::cli_main(argc, argv); }
