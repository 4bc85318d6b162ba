#include "bimu/cli.hpp"

int main(int argc, char** argv) { return bimu::run_cli(argc, argv); }
