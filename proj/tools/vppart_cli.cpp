#include "vppart/cli.hpp"

int main(int argc, char** argv) { return vppart::run_cli(argc, argv); }
