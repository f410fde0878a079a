// tdecomp: generate random graphs, decompose them into tree families,
// verify decompositions, and run the threshold and divisibility experiments.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdecomp/decomposition.hpp"
#include "tdecomp/experiments.hpp"
#include "tdecomp/graph.hpp"
#include "tdecomp/total.hpp"
#include "tdecomp/tree.hpp"
#include "tdecomp/verify.hpp"

namespace {

using namespace tdecomp;

constexpr int exit_failure_report = 2;
constexpr int exit_bad_input = 3;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto load(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw BadInput(what + ": " + e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad grid entry '" + item + "'");
    }
    grid.push_back(v);
  }
  return grid;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-family decompositions of random graphs"};
  app.require_subcommand(1);

  // gen
  std::size_t gen_n = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  bool gen_colored = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Sample G(n, p) and write it as an edge list");
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--p", gen_p, "edge probability")->required()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_flag("--colored", gen_colored, "red with probability p/15, blue with 14p/15");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // decompose
  std::string dec_graph, dec_family, dec_alpha, dec_mode = "relaxed", dec_out;
  double dec_cprime = 8.0;
  std::uint64_t dec_seed = 0;
  bool dec_trace = false;
  auto* dec = app.add_subcommand("decompose", "Totally decompose a graph into a tree family");
  dec->add_option("--graph", dec_graph, "graph file")->required();
  dec->add_option("--family", dec_family, "family file, one tree per line")->required();
  dec->add_option("--alpha", dec_alpha, "copies per member, a1,a2,...")->required();
  dec->add_option("--cprime", dec_cprime, "density constant: p = C' ln n / n");
  dec->add_option("--mode", dec_mode, "strict or relaxed")
      ->check(CLI::IsMember({"strict", "relaxed"}));
  dec->add_option("--seed", dec_seed, "random seed");
  dec->add_option("--out", dec_out, "decomposition file (stdout if omitted)");
  dec->add_flag("--trace", dec_trace, "stage trace on stderr");

  // verify
  std::string ver_graph, ver_family, ver_alpha, ver_decomp;
  auto* ver = app.add_subcommand("verify", "Check a decomposition; exit 0 if valid, 1 if not");
  ver->add_option("--graph", ver_graph, "graph file")->required();
  ver->add_option("--family", ver_family, "family file")->required();
  ver->add_option("--alpha", ver_alpha, "copies per member")->required();
  ver->add_option("--decomposition", ver_decomp, "decomposition file")->required();

  // sweep
  std::size_t sw_n = 500, sw_trials = 30;
  std::string sw_family, sw_grid = "0.2,0.5,1,2,4,8", sw_out;
  std::uint64_t sw_seed = 1;
  auto* sw = app.add_subcommand("sweep", "Success rate over a grid of densities");
  sw->add_option("--n", sw_n, "vertex count");
  sw->add_option("--family", sw_family, "family file {H, K2}")->required();
  sw->add_option("--grid", sw_grid, "comma-separated C' values");
  sw->add_option("--trials", sw_trials, "trials per grid cell")->check(CLI::PositiveNumber);
  sw->add_option("--seed", sw_seed, "random seed");
  sw->add_option("--out", sw_out, "CSV file (stdout if omitted)");

  // divisibility
  std::size_t dv_n = 1000, dv_h = 3, dv_trials = 2000;
  double dv_p = -1.0;
  std::uint64_t dv_seed = 1;
  auto* dv = app.add_subcommand("divisibility", "Fraction of G(n, p) with h | e(G)");
  dv->set_help_flag("--help", "Print this help message and exit");
  dv->add_option("--n", dv_n, "vertex count");
  dv->add_option("--p", dv_p, "edge probability (default 8 ln n / n)");
  dv->add_option("--h", dv_h, "divisor")->check(CLI::PositiveNumber);
  dv->add_option("--trials", dv_trials, "trial count")->check(CLI::PositiveNumber);
  dv->add_option("--seed", dv_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Rng rng(gen_seed);
      Graph g = gen_colored ? gen_colored_gnp(gen_n, gen_p, rng) : gen_gnp(gen_n, gen_p, rng);
      std::ostringstream text;
      write_graph(text, g);
      emit(gen_out, text.str());
      return 0;
    }

    if (*dec) {
      Graph g = load("graph", [&] { return read_graph_file(dec_graph); });
      Family family = load("family", [&] { return read_family_file(dec_family); });
      AlphaVector alpha = load("alpha", [&] { return parse_alpha(dec_alpha); });
      Rng rng(dec_seed);
      if (!g.colored()) {
        g = color_randomly(g, 1.0 / 15.0, rng);
      }
      TotalParams params;
      params.mode = dec_mode == "strict" ? Mode::strict : Mode::relaxed;
      params.cprime = dec_cprime;
      if (dec_trace) {
        params.trace = [](const std::string& line) { std::cerr << line << '\n'; };
      }
      try {
        Rng run = rng.split(1);
        auto result = decompose_total(g, family, alpha, params, run);
        std::ostringstream text;
        write_decomposition(text, result.decomposition);
        emit(dec_out, text.str());
        return 0;
      } catch (const TotalDecompositionFailed& e) {
        std::cerr << "failure phase=" << e.last_phase() << '\n';
        for (const auto& [phase, count] : e.histogram()) {
          std::cerr << "  " << phase << ' ' << count << '\n';
        }
        std::cerr << e.what() << '\n';
        return exit_failure_report;
      } catch (const std::invalid_argument& e) {
        std::cerr << "failure phase=input\n" << e.what() << '\n';
        return exit_failure_report;
      }
    }

    if (*ver) {
      Graph g = load("graph", [&] { return read_graph_file(ver_graph); });
      Family family = load("family", [&] { return read_family_file(ver_family); });
      AlphaVector alpha = load("alpha", [&] { return parse_alpha(ver_alpha); });
      Decomposition d = load("decomposition", [&] { return read_decomposition_file(ver_decomp); });
      auto violations = verify_decomposition(g, family, alpha, d);
      for (const auto& v : violations) {
        std::cout << v.to_string() << '\n';
      }
      if (violations.empty()) {
        std::cout << "ok\n";
        return 0;
      }
      return 1;
    }

    if (*sw) {
      SweepConfig cfg;
      cfg.n = sw_n;
      cfg.family = load("family", [&] { return read_family_file(sw_family); });
      cfg.grid = load("grid", [&] { return parse_grid(sw_grid); });
      cfg.trials = sw_trials;
      cfg.seed = sw_seed;
      std::ostringstream text;
      write_sweep_csv(text, threshold_sweep(cfg));
      emit(sw_out, text.str());
      return 0;
    }

    if (*dv) {
      double p = dv_p >= 0.0 ? dv_p : 8.0 * std::log(static_cast<double>(dv_n)) / static_cast<double>(dv_n);
      double fraction = divisibility_experiment(dv_n, p, dv_h, dv_trials, dv_seed);
      std::cout << std::setprecision(6) << fraction << '\n';
      return 0;
    }
  } catch (const BadInput& e) {
    std::cerr << e.what() << '\n';
    return exit_bad_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
