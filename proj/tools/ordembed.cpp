#include "ordembed/cli.hpp"

int main(int argc, char** argv) { return ordembed::cli::dispatch(argc, argv); }
