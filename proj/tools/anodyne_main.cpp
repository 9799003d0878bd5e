#include "anodyne/cli.hpp"

int main(int argc, char** argv) { return anodyne::run_cli(argc, argv); }
