#include "lcc/cli.hpp"

int main(int argc, char** argv) { return lcc::run(argc, argv); }
