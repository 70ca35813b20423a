#include "cli.hpp"

int main(int argc, char** argv) { return dunkl::cli::dispatch(argc, argv); }
