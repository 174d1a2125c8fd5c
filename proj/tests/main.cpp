#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "orbsmooth/chart.hpp"

int main(int argc, char** argv) {
  // the round sphere must come out with sec = +1 before anything else runs
  orbsmooth::verify_sign_convention();
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
