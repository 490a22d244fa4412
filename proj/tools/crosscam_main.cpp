#include "crosscam/cli.hpp"

int main(int argc, char** argv) { return crosscam::cli_main(argc, argv); }
