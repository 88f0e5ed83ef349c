#include "gwp/cli.hpp"

int main(int argc, char** argv) { return gwp::cli_main(argc, argv); }
