#include "crossq/app/commands.hpp"

int main(int argc, char **argv) { return crossq::app::run(argc, argv); }
