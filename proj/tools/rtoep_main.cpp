#include "rtoep/cli.hpp"

int main(int argc, char** argv) { return rtoep::main_entry(argc, argv); }
