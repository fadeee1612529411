#include "jobrunner/cli.hpp"

int main(int argc, char** argv) { return jobrunner::run_cli(argc, argv); }
