#include "slicesim/cli.hpp"

int main(int argc, char** argv) { return slicesim::cli_main(argc, argv); }
