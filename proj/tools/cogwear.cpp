#include "cli.hpp"

int main(int argc, char** argv) { return cogwear::cli::run(argc, argv); }
