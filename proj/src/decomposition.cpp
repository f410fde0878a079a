#include "tdecomp/decomposition.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tdecomp {

AlphaVector parse_alpha(const std::string& text) {
  AlphaVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw std::invalid_argument("alpha: empty entry in '" + text + "'");
    }
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("alpha: '" + item + "' is not an integer");
    }
    if (used != item.size() || value < 0) {
      throw std::invalid_argument("alpha: '" + item + "' is not a nonnegative integer");
    }
    out.push_back(static_cast<std::size_t>(value));
  }
  if (out.empty()) {
    throw std::invalid_argument("alpha: no entries");
  }
  return out;
}

std::string format_alpha(const AlphaVector& alpha) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0) {
      s += ',';
    }
    s += std::to_string(alpha[i]);
  }
  return s;
}

std::string to_string(Provenance p) {
  switch (p) {
  case Provenance::greedy_red:
    return "greedy-red";
  case Provenance::gpp:
    return "G''";
  case Provenance::via_h:
    return "G*-via-H";
  case Provenance::unspecified:
    break;
  }
  return "unspecified";
}

void sort_classes(Decomposition& d) {
  auto first_edge = [](const DecompClass& c) {
    return c.edges.empty() ? std::pair<Vertex, Vertex>{0, 0}
                           : std::pair<Vertex, Vertex>{c.edges[0].u, c.edges[0].v};
  };
  std::stable_sort(d.classes.begin(), d.classes.end(),
                   [&](const DecompClass& a, const DecompClass& b) {
                     return std::tuple(a.provenance, a.family_index, first_edge(a)) <
                            std::tuple(b.provenance, b.family_index, first_edge(b));
                   });
}

void write_decomposition(std::ostream& out, const Decomposition& d) {
  out << d.k << '\n';
  for (const auto& c : d.classes) {
    out << c.family_index << ' ' << c.edges.size();
    for (const auto& e : c.edges) {
      out << ' ' << e.u << ' ' << e.v;
    }
    out << '\n';
  }
}

Decomposition read_decomposition(std::istream& in) {
  Decomposition d;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ls(line);
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("decomposition line " + std::to_string(line_no) + ": " + why);
    };
    if (!header) {
      long long k = -1;
      if (!(ls >> k) || k < 0) {
        fail("expected family size");
      }
      d.k = static_cast<std::size_t>(k);
      header = true;
      continue;
    }
    long long index = -1;
    long long count = -1;
    if (!(ls >> index >> count) || index < 0 || count < 0) {
      fail("expected '<index> <edge count>'");
    }
    DecompClass c;
    c.family_index = static_cast<std::size_t>(index);
    for (long long e = 0; e < count; ++e) {
      long long u = -1;
      long long v = -1;
      if (!(ls >> u >> v) || u < 0 || v < 0) {
        fail("expected " + std::to_string(count) + " vertex pairs");
      }
      c.edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    std::string extra;
    if (ls >> extra) {
      fail("trailing data '" + extra + "'");
    }
    d.classes.push_back(std::move(c));
  }
  if (!header) {
    throw std::runtime_error("decomposition: missing header");
  }
  return d;
}

Decomposition read_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return read_decomposition(in);
}

void write_decomposition_file(const std::string& path, const Decomposition& d) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write_decomposition(out, d);
}

} // namespace tdecomp
