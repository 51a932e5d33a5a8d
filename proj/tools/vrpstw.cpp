#include "vrpstw/cli.hpp"

int main(int argc, char** argv) { return vrpstw::run_cli(argc, argv); }
