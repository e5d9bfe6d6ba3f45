#include <cstdio>

int main() {
  std::puts("heis4-verify: command line not wired up yet");
  return 0;
}
