#include "flqkd/runner.hpp"

int main(int argc, char** argv) { return flqkd::cli_main(argc, argv); }
