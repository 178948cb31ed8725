// Writes the shipped fixture documents into the given directory.
#include "coisocalc/fixtures.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  for (const auto& [name, doc] : coisocalc::fixtures::all_documents()) {
    std::ofstream out(dir + "/" + name);
    if (!out) {
      std::cerr << "cannot write " << dir << "/" << name << "\n";
      return 2;
    }
    out << doc.dump(2) << "\n";
    std::cout << name << "\n";
  }
  return 0;
}
