#include "lasalt/diagio.hpp"

int main(int argc, char** argv) {
  return lasalt::io::cli_main(argc, argv);
}
