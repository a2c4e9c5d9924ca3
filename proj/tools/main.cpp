#include "tokencomp/cli.hpp"

int main(int argc, char** argv) { return tokencomp::run_cli(argc, argv); }
