#include <burgers_poisson/cli.hpp>

int main(int argc, char** argv) { return bp::cli::main_entry(argc, argv); }
