#include "tmd/cli.hpp"

int main(int argc, char** argv) { return tmd::cli::run(argc, argv); }
