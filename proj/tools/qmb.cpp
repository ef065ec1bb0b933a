#include "qmb/cli.hpp"

int main(int argc, char** argv) { return qmb::cli::run(argc, argv); }
