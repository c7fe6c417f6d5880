#include "gfa/cli.hpp"

int main(int argc, char** argv) { return gfa::cli_main(argc, argv); }
