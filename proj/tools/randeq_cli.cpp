#include "randeq/harness/cli.hpp"

int main(int argc, char** argv) { return randeq::harness::cli_main(argc, argv); }
