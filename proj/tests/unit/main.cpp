#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "pharmachain/crypto.hpp"

int main(int argc, char** argv) {
  pharmachain::crypto_init();
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
