#include <iostream>

int main() {
  std::cout << "betafact placeholder\n";
  return 0;
}
