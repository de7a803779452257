#include "dchaos/cli/app.hpp"

int main(int argc, char** argv) { return dchaos::cli::run(argc, argv); }
