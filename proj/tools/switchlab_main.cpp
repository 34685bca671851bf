#include "switchlab/cli.hpp"

int main(int argc, char** argv) { return switchlab::cli::run(argc, argv); }
