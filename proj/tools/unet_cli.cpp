#include <iostream>

int main() {
  std::cout << "unet cli placeholder\n";
  return 0;
}
