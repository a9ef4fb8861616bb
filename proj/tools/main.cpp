#include "wmrs/cli.hpp"

int main(int argc, char** argv) { return wmrs::cli_main(argc, argv); }
