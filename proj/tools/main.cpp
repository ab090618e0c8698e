#include "clump/cli.hpp"

int main(int argc, char** argv) { return clump::cli::run(argc, argv); }
