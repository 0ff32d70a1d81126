#include "ringlab/cli.hpp"

int main(int argc, char** argv) { return ringlab::cli::run(argc, argv); }
