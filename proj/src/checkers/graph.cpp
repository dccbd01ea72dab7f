#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "tickforge/checkers.hpp"

namespace tickforge {

std::size_t default_node_budget() {
  const char* env = std::getenv("TICKFORGE_NODE_BUDGET");
  if (env == nullptr || *env == '\0') return 5'000'000;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw Error(std::string("TICKFORGE_NODE_BUDGET must be a positive integer, got '") + env + "'");
  return static_cast<std::size_t>(v);
}

std::size_t StateGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : out) n += e.size();
  return n;
}

namespace {

struct Expansion {
  bool critical = false;
  std::vector<std::pair<int, DeltaRep>> succ;
};

Expansion expand(const DeltaRep& d, const SpecModel& spec) {
  Expansion e;
  const Configuration rep = materialize(d);
  e.critical = is_critical(rep, spec.critical);
  auto choices = enabled_steps(rep, spec);
  if (choices.empty()) {
    e.succ.emplace_back(kTickRule, abstract(tick(rep), d.dmax()));
  } else {
    for (auto& c : choices) e.succ.emplace_back(static_cast<int>(c.rule_index), abstract(c.result, d.dmax()));
  }
  return e;
}

}  // namespace

std::shared_ptr<StateGraph> build_graph(const SpecModel& spec, const GraphOptions& opt) {
  const SpecStats stats = analyze(spec);
  if (!stats.balanced) throw Error("the specification is not balanced; state exploration needs balanced rules");
  auto g = std::make_shared<StateGraph>();
  g->dmax = stats.dmax;
  g->root = g->store.intern(abstract(spec.initial, stats.dmax)).first;
  g->out.emplace_back();
  g->critical.push_back(false);

  std::vector<std::size_t> frontier{g->root};
  const std::size_t threads = std::max<std::size_t>(opt.threads, 1);
  while (!frontier.empty()) {
    std::vector<Expansion> exp(frontier.size());
    const std::size_t workers = std::min(threads, frontier.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < frontier.size(); ++i) exp[i] = expand(g->store.at(frontier[i]), spec);
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < frontier.size(); i += workers) exp[i] = expand(g->store.at(frontier[i]), spec);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::size_t from = frontier[i];
      g->critical[from] = exp[i].critical;
      std::set<std::pair<int, std::size_t>> seen;
      for (auto& [rule, rep] : exp[i].succ) {
        auto [id, inserted] = g->store.intern(rep);
        if (inserted) {
          if (g->store.size() > opt.node_budget)
            throw ResourceExhausted("state exploration exceeded the node budget of " + std::to_string(opt.node_budget));
          g->out.emplace_back();
          g->critical.push_back(false);
          next.push_back(id);
        }
        if (seen.insert({rule, id}).second) g->out[from].push_back({id, rule});
      }
    }
    frontier = std::move(next);
  }
  return g;
}

}  // namespace tickforge
