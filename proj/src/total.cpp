#include "tdecomp/total.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace tdecomp {

using boost::multiprecision::cpp_int;

void check_feasible(const Family& family, const AlphaVector& alpha, std::size_t edge_count) {
  if (alpha.size() != family.size()) {
    throw std::invalid_argument("alpha has " + std::to_string(alpha.size()) +
                                " entries for a family of " + std::to_string(family.size()));
  }
  cpp_int total = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    total += cpp_int(alpha[i]) * family.edges(i);
  }
  if (total != edge_count) {
    std::ostringstream msg;
    msg << "infeasible alpha: sum alpha_i h_i = " << total << " but e(G) = " << edge_count;
    throw std::invalid_argument(msg.str());
  }
}

FamilySplit split_family(const Family& family, const AlphaVector& alpha, std::size_t edge_count) {
  check_feasible(family, alpha, edge_count);
  const cpp_int c = family.total_edges();
  FamilySplit split;
  for (std::size_t i = 0; i < family.size(); ++i) {
    // alpha_i < m / (20 c^2)  <=>  20 c^2 alpha_i < m
    if (20 * c * c * alpha[i] < edge_count) {
      split.f1.push_back(i);
    } else {
      split.f2.push_back(i);
    }
  }
  if (split.f2.empty()) {
    throw std::logic_error("split_family: F2 is empty for a feasible alpha");
  }
  return split;
}

std::vector<DecompClass> greedy_red_phase(const Graph& g, const Family& family,
                                          const std::vector<GreedyTask>& tasks, EdgeMask& used,
                                          Rng& rng, int attempts) {
  used.resize(g.m(), false);
  std::vector<DecompClass> out;
  std::size_t needed = 0;
  std::size_t available = 0;
  for (const auto& task : tasks) {
    needed += task.count * family.edges(task.family_index);
  }
  EdgeMask forbidden(g.m(), true);
  for (EdgeId e = 0; e < g.m(); ++e) {
    bool red = g.colored() && g.color(e) == Color::red;
    forbidden[e] = used[e] || !red;
    available += forbidden[e] ? 0 : 1;
  }
  if (needed > available) {
    throw GreedyPhaseFailed("rare members need " + std::to_string(needed) + " red edges, only " +
                            std::to_string(available) + " are free");
  }
  for (const auto& task : tasks) {
    const Tree& t = family.trees[task.family_index];
    for (std::size_t copy = 0; copy < task.count; ++copy) {
      auto edges = embed_tree(g, t, forbidden, rng, attempts);
      if (!edges) {
        throw GreedyPhaseFailed("no red copy of member " + std::to_string(task.family_index) +
                                " (copy " + std::to_string(copy + 1) + " of " +
                                std::to_string(task.count) + ")");
      }
      DecompClass c{task.family_index, Provenance::greedy_red, {}};
      for (auto e : *edges) {
        used[e] = true;
        forbidden[e] = true;
        c.edges.push_back(g.edge(e));
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<std::uint64_t> compute_ti(const std::vector<std::uint64_t>& alpha, std::uint64_t c,
                                      Mode mode) {
  cpp_int sum = 0;
  for (auto a : alpha) {
    sum += a;
  }
  if (sum == 0) {
    throw std::invalid_argument("compute_ti: alpha sums to zero");
  }
  const cpp_int scale = cpp_int(2000) * c * c;
  std::vector<std::uint64_t> t;
  for (auto a : alpha) {
    cpp_int ti = scale * a / sum;
    if (mode == Mode::strict && (ti < 100 || ti > scale)) {
      std::ostringstream msg;
      msg << "compute_ti: t_i = " << ti << " outside [100, " << scale << "]";
      throw std::domain_error(msg.str());
    }
    t.push_back(ti.convert_to<std::uint64_t>());
  }
  return t;
}

QPlan plan_q_b(std::uint64_t e_prime, std::uint64_t h, const std::vector<std::uint64_t>& t,
               const std::vector<std::uint64_t>& alpha, Mode mode) {
  if (h == 0) {
    throw std::invalid_argument("plan_q_b: h = 0");
  }
  if (t.size() != alpha.size()) {
    throw std::invalid_argument("plan_q_b: t and alpha differ in length");
  }
  QPlan plan;
  cpp_int q = cpp_int(99) * e_prime / (cpp_int(100) * h);
  if (mode == Mode::relaxed) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == 0) {
        continue;
      }
      cpp_int cap = cpp_int(alpha[i]) / t[i];
      if (cap < q) {
        q = cap;
        plan.clamped = true;
      }
    }
  }
  plan.q = q.convert_to<std::uint64_t>();
  for (std::size_t i = 0; i < t.size(); ++i) {
    cpp_int b = cpp_int(alpha[i]) - cpp_int(t[i]) * q;
    if (b < 0) {
      std::ostringstream msg;
      msg << "plan_q_b: b_" << i << " = " << b << " < 0 (t_i q > alpha_i)";
      throw std::domain_error(msg.str());
    }
    plan.b.push_back(b.convert_to<std::uint64_t>());
  }
  return plan;
}

RelaxedChoice choose_relaxed_t(const std::vector<std::uint64_t>& alpha,
                               const std::vector<std::uint64_t>& sizes, std::uint64_t e_prime,
                               std::uint64_t h_max) {
  if (alpha.empty() || alpha.size() != sizes.size()) {
    throw std::invalid_argument("choose_relaxed_t: alpha and sizes must match and be nonempty");
  }
  std::optional<RelaxedChoice> best;
  auto consider = [&](const std::vector<std::uint64_t>& t, std::uint64_t h) {
    auto plan = plan_q_b(e_prime, h, t, alpha, Mode::relaxed);
    std::uint64_t gpp = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      gpp += plan.b[i] * sizes[i];
    }
    if (!best || gpp < best->gpp_edges || (gpp == best->gpp_edges && h < best->h)) {
      best = RelaxedChoice{t, std::move(plan), h, gpp};
    }
  };
  // Every t with h = sum t_i h_i in [1, h_max]; members with t_i = 0 go to G'' whole.
  std::vector<std::uint64_t> t(alpha.size(), 0);
  auto walk = [&](auto&& self, std::size_t i, std::uint64_t h) -> void {
    if (i == t.size()) {
      if (h > 0) {
        consider(t, h);
      }
      return;
    }
    const std::uint64_t top = alpha[i] == 0 ? 0 : (h_max - h) / sizes[i];
    for (std::uint64_t x = 0; x <= top; ++x) {
      t[i] = x;
      self(self, i + 1, h + x * sizes[i]);
    }
    t[i] = 0;
  };
  walk(walk, 0, 0);
  if (!best) {
    // No member fits under h_max: one copy of the smallest member with alpha > 0.
    std::size_t pick = alpha.size();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0 && (pick == alpha.size() || sizes[i] < sizes[pick])) {
        pick = i;
      }
    }
    if (pick == alpha.size()) {
      throw std::invalid_argument("choose_relaxed_t: all alpha are zero");
    }
    t.assign(alpha.size(), 0);
    t[pick] = 1;
    consider(t, sizes[pick]);
  }
  return *best;
}

GppResult build_gpp(const Graph& g, const EdgeMask& used, const Family& family,
                    std::vector<GppRequest> requests, std::size_t cap, Rng& rng, int attempts) {
  GppResult out;
  out.mask.assign(g.m(), false);
  std::stable_sort(requests.begin(), requests.end(), [&](const GppRequest& a, const GppRequest& b) {
    return std::pair(family.edges(a.family_index), a.family_index) <
           std::pair(family.edges(b.family_index), b.family_index);
  });
  const std::size_t n = g.n();
  std::vector<std::size_t> degree(n, 0);
  EdgeMask forbidden(g.m(), false);
  for (EdgeId e = 0; e < g.m(); ++e) {
    forbidden[e] = e < used.size() && used[e];
  }
  std::vector<Vertex> order(n);
  std::vector<std::uint64_t> tiebreak(n);
  std::vector<bool> allowed(n);
  for (const auto& req : requests) {
    const Tree& t = family.trees[req.family_index];
    for (std::size_t copy = 0; copy < req.count; ++copy) {
      std::iota(order.begin(), order.end(), 0);
      for (auto& x : tiebreak) {
        x = rng();
      }
      const std::size_t half = (n + 1) / 2;
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half),
                        order.end(), [&](Vertex a, Vertex b) {
                          return std::pair(degree[a], tiebreak[a]) <
                                 std::pair(degree[b], tiebreak[b]);
                        });
      std::fill(allowed.begin(), allowed.end(), false);
      for (std::size_t k = 0; k < half; ++k) {
        Vertex v = order[k];
        allowed[v] = degree[v] + t.max_degree() <= cap;
      }
      auto edges = embed_tree_within(g, t, forbidden, allowed, rng, attempts);
      if (!edges) {
        throw GppFailed("no copy of member " + std::to_string(req.family_index) +
                        " fits the low-degree half under cap " + std::to_string(cap) +
                        " (copy " + std::to_string(copy + 1) + " of " +
                        std::to_string(req.count) + ")");
      }
      DecompClass c{req.family_index, Provenance::gpp, {}};
      for (auto e : *edges) {
        const auto& ed = g.edge(e);
        out.mask[e] = true;
        forbidden[e] = true;
        out.max_degree = std::max({out.max_degree, ++degree[ed.u], ++degree[ed.v]});
        c.edges.push_back(ed);
      }
      out.classes.push_back(std::move(c));
    }
  }
  if (out.max_degree > cap) {
    throw GppFailed("Delta(G'') = " + std::to_string(out.max_degree) + " exceeds cap " +
                    std::to_string(cap));
  }
  return out;
}

namespace {

struct PlanOutcome {
  std::vector<std::uint64_t> t;
  QPlan plan;
  std::uint64_t h = 0;
};

PlanOutcome plan_h(const Family& family, const AlphaVector& alpha, const FamilySplit& split,
                   std::uint64_t e_prime, const TotalParams& params) {
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> sizes;
  for (auto i : split.f2) {
    a.push_back(alpha[i]);
    sizes.push_back(family.edges(i));
  }
  PlanOutcome out;
  if (params.mode == Mode::strict) {
    out.t = compute_ti(a, family.total_edges(), Mode::strict);
    for (std::size_t j = 0; j < a.size(); ++j) {
      out.h += out.t[j] * sizes[j];
    }
    out.plan = plan_q_b(e_prime, out.h, out.t, a, Mode::strict);
  } else {
    auto choice = choose_relaxed_t(a, sizes, e_prime, params.h_max);
    out.t = std::move(choice.t);
    out.plan = std::move(choice.plan);
    out.h = choice.h;
  }
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? "," : "") + std::to_string(v[i]);
  }
  return s;
}

} // namespace

TotalResult decompose_total(const Graph& g, const Family& family, const AlphaVector& alpha,
                            const TotalParams& params, Rng& rng) {
  check_feasible(family, alpha, g.m());
  TotalResult result;
  result.decomposition.k = family.size();
  auto& report = result.report;
  if (g.m() == 0) {
    report.attempts = 1;
    return result;
  }
  auto trace = [&](const std::string& line) {
    if (params.trace) {
      params.trace(line);
    }
  };
  report.split = split_family(family, alpha, g.m());
  for (auto i : report.split.f2) {
    report.e_prime += alpha[i] * family.edges(i);
  }

  // The arithmetic plan does not depend on randomness; a domain error here is final.
  PlanOutcome plan;
  try {
    plan = plan_h(family, alpha, report.split, report.e_prime, params);
  } catch (const std::domain_error& e) {
    throw TotalDecompositionFailed(std::string("plan: ") + e.what(), "plan", {{"plan", 1}});
  }
  report.t = plan.t;
  report.h = plan.h;
  report.q = plan.plan.q;
  report.b = plan.plan.b;
  report.q_clamped = plan.plan.clamped;
  {
    std::ostringstream d;
    d << "phase=plan f1=" << report.split.f1.size() << " f2=" << report.split.f2.size()
      << " t=" << join_u64(report.t) << " h=" << report.h << " q=" << report.q
      << " b=" << join_u64(report.b) << (report.q_clamped ? " clamped=1" : "");
    trace(d.str());
  }

  // Concatenated tree H: t_i copies of each F2 member, in F2 order.
  std::vector<ConcatPart> parts;
  std::vector<std::size_t> part_family;
  for (std::size_t j = 0; j < report.split.f2.size(); ++j) {
    for (std::uint64_t r = 0; r < report.t[j]; ++r) {
      parts.push_back({family.trees[report.split.f2[j]], std::nullopt});
      part_family.push_back(report.split.f2[j]);
    }
  }
  std::optional<Concatenation> concat;
  if (report.q > 0) {
    concat = concatenate(parts);
  }

  const double log_n = std::log(static_cast<double>(std::max<std::size_t>(g.n(), 2)));
  const double cap_mult = params.mode == Mode::strict ? 0.04 : params.gpp_cap_multiplier;
  report.gpp_cap = static_cast<std::size_t>(std::floor(cap_mult * params.cprime * log_n));

  std::string last_phase;
  for (std::size_t attempt = 1; attempt <= params.retries; ++attempt) {
    report.attempts = attempt;
    Rng run = rng.split(attempt);
    try {
      EdgeMask used(g.m(), false);
      std::vector<GreedyTask> tasks;
      for (auto i : report.split.f1) {
        if (alpha[i] > 0) {
          tasks.push_back({i, alpha[i]});
        }
      }
      auto classes = greedy_red_phase(g, family, tasks, used, run);
      trace("phase=greedy-red attempt=" + std::to_string(attempt) +
            " status=ok classes=" + std::to_string(classes.size()));

      std::vector<GppRequest> requests;
      for (std::size_t j = 0; j < report.split.f2.size(); ++j) {
        if (report.b[j] > 0) {
          requests.push_back({report.split.f2[j], static_cast<std::size_t>(report.b[j])});
        }
      }
      auto gpp = build_gpp(g, used, family, requests, report.gpp_cap, run);
      report.gpp_max_degree = gpp.max_degree;
      report.gpp_edges = 0;
      for (EdgeId e = 0; e < g.m(); ++e) {
        report.gpp_edges += gpp.mask[e] ? 1 : 0;
      }
      trace("phase=gpp attempt=" + std::to_string(attempt) + " status=ok edges=" +
            std::to_string(report.gpp_edges) + " max_degree=" + std::to_string(gpp.max_degree));
      classes.insert(classes.end(), std::make_move_iterator(gpp.classes.begin()),
                     std::make_move_iterator(gpp.classes.end()));

      // G* = E' minus G''.
      Graph gstar(g.n());
      std::vector<EdgeId> back;
      for (EdgeId e = 0; e < g.m(); ++e) {
        if (!used[e] && !gpp.mask[e]) {
          gstar.add_edge(g.edge(e).u, g.edge(e).v);
          back.push_back(e);
        }
      }
      report.gstar_edges = gstar.m();
      if (gstar.m() != report.q * report.h) {
        throw std::logic_error("decompose_total: e(G*) = " + std::to_string(gstar.m()) +
                               " differs from q h = " + std::to_string(report.q * report.h));
      }
      if (gstar.m() > 0) {
        HParams engine = params.engine;
        engine.mode = params.mode;
        if (!engine.trace && params.trace) {
          engine.trace = params.trace;
        }
        auto hd = [&] {
          try {
            return decompose_H(gstar, concat->tree, engine, run);
          } catch (const DecompositionFailed& e) {
            throw PhaseFailure("htree", e.what());
          }
        }();
        report.mend = hd.mend;
        for (const auto& copy : hd.classes) {
          std::vector<DecompClass> expanded(parts.size());
          for (std::size_t p = 0; p < parts.size(); ++p) {
            expanded[p].family_index = part_family[p];
            expanded[p].provenance = Provenance::via_h;
          }
          for (std::size_t slot = 0; slot < copy.size(); ++slot) {
            auto part = concat->originator[hd.slot_edge[slot]];
            expanded[part].edges.push_back(g.edge(back[copy[slot]]));
          }
          classes.insert(classes.end(), std::make_move_iterator(expanded.begin()),
                         std::make_move_iterator(expanded.end()));
        }
      }
      result.decomposition.classes = std::move(classes);
      sort_classes(result.decomposition);
      return result;
    } catch (const PhaseFailure& e) {
      last_phase = e.phase();
      ++report.histogram[e.phase()];
      trace("phase=" + e.phase() + " attempt=" + std::to_string(attempt) +
            " status=fail detail=" + e.what());
    }
  }
  std::ostringstream msg;
  msg << "total decomposition failed after " << params.retries << " attempts (last phase "
      << last_phase << "):";
  for (const auto& [phase, count] : report.histogram) {
    msg << ' ' << phase << '=' << count;
  }
  throw TotalDecompositionFailed(msg.str(), last_phase, report.histogram);
}

} // namespace tdecomp
