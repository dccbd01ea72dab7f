#include "tickforge/cli.hpp"

int main(int argc, char** argv) { return tickforge::cli_main(argc, argv); }
