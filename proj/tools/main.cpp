#include "qwcage/cli.hpp"

int main(int argc, char** argv) { return qwcage::cli_main(argc, argv); }
