#include "plasmaflow/cli.hpp"

int main(int argc, char** argv) { return plasmaflow::cli_main(argc, argv); }
