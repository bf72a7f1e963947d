#include "syk/cli.hpp"

int main(int argc, char** argv) { return syk::cli::run(argc, argv); }
