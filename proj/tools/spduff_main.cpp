#include <spduff/spduff.h>

int main(int argc, char** argv) {
  return spduff_run(argc, const_cast<const char* const*>(argv));
}
