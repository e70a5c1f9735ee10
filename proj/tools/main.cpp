#include "rosterflow/cli.hpp"

int main(int argc, char** argv) { return rosterflow::cli::run(argc, argv); }
