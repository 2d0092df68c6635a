#include "swmac/cli.hpp"

int main(int argc, char** argv) { return swmac::cli_main(argc, argv); }
