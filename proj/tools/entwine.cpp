#include "entwine/experiments.hpp"

int main(int argc, char** argv) { return entwine::cli_main(argc, argv); }
