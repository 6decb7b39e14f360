#include "rydimer/cli.hpp"

int main(int argc, char** argv) { return rydimer::cli::run(argc, argv); }
