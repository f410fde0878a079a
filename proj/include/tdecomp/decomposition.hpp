#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tdecomp/graph.hpp"

namespace tdecomp {

// alpha[i] = number of classes that must be copies of family member i.
using AlphaVector = std::vector<std::size_t>;

// Parses "a1,a2,..." (whitespace tolerated). Throws std::invalid_argument.
AlphaVector parse_alpha(const std::string& text);
std::string format_alpha(const AlphaVector& alpha);

// Which part of the pipeline produced a class. Declaration order is the
// output sort order. Classes read back from a file carry `unspecified`.
enum class Provenance { greedy_red, gpp, via_h, unspecified };

std::string to_string(Provenance p);

struct DecompClass {
  std::size_t family_index = 0;
  Provenance provenance = Provenance::unspecified;
  std::vector<Edge> edges;
};

struct Decomposition {
  std::size_t k = 0;  // family size
  std::vector<DecompClass> classes;
};

// Sorts by (provenance, family index, first edge).
void sort_classes(Decomposition& d);

// Header "k", then one line per class: "i m_i u1 v1 ... um vm".
void write_decomposition(std::ostream& out, const Decomposition& d);
// Throws std::runtime_error on malformed input.
Decomposition read_decomposition(std::istream& in);
Decomposition read_decomposition_file(const std::string& path);
void write_decomposition_file(const std::string& path, const Decomposition& d);

} // namespace tdecomp
