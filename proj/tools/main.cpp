#include "ogp/cli.hpp"

int main(int argc, char** argv) { return ogp::run_cli(argc, argv); }
