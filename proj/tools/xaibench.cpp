#include "xaibench/harness/cli.hpp"

int main(int argc, char** argv) { return xaibench::harness::cli_dispatch(argc, argv); }
