#include <iostream>
#include "gsr/gsr_core.hpp"
int main() {
  std::vector<gsr::GsrPoint> p = {{"a", 0.0, 0.0, 1}, {"b", 1.0, 2.0, 1}};
  std::cout << gsr::gsr_slope(p).slope << "\n";
}
