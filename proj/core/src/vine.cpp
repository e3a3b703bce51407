#include "faultflow/vine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "faultflow/parallel.hpp"

namespace faultflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> full_set(const VineEdge& e) {
  std::vector<int> s = e.cond;
  s.push_back(e.v1);
  s.push_back(e.v2);
  std::sort(s.begin(), s.end());
  return s;
}

bool contains(const std::vector<int>& s, int v) { return std::find(s.begin(), s.end(), v) != s.end(); }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// Endpoint nodes of an edge in its own tree: variables in tree 0, parent
// edges afterwards.
std::pair<int, int> endpoints(const VineEdge& e, int tree) {
  return tree == 0 ? std::pair{e.v1, e.v2} : std::pair{e.p1, e.p2};
}

bool share_node(std::pair<int, int> a, std::pair<int, int> b) {
  return a.first == b.first || a.first == b.second || a.second == b.first || a.second == b.second;
}

}  // namespace

struct VineModel::Cache {
  std::vector<double> u;                           // dependent uniforms, NaN if unknown
  std::vector<std::vector<std::array<double, 2>>> out;  // [tree][edge] outputs for v1, v2
};

VineModel::VineModel(int dim, std::vector<std::vector<VineEdge>> trees,
                     std::vector<stats::EmpiricalDistribution> marginals)
    : dim_(dim), trees_(std::move(trees)), marginals_(std::move(marginals)) {
  if (dim_ < 1) throw std::invalid_argument("vine: dimension must be >= 1");
  if (!marginals_.empty() && marginals_.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("vine: one marginal per dimension required");
  if (trees_.size() != static_cast<std::size_t>(std::max(dim_ - 1, 0)))
    throw std::invalid_argument("vine: expected dim-1 trees");

  for (int t = 0; t < static_cast<int>(trees_.size()); ++t) {
    const auto& tree = trees_[t];
    const int nodes = dim_ - t;
    if (static_cast<int>(tree.size()) != nodes - 1)
      throw std::invalid_argument("vine: tree " + std::to_string(t) + " must have " + std::to_string(nodes - 1) + " edges");
    UnionFind uf(nodes);
    for (const auto& e : tree) {
      if (e.v1 == e.v2 || e.v1 < 0 || e.v2 < 0 || e.v1 >= dim_ || e.v2 >= dim_)
        throw std::invalid_argument("vine: invalid conditioned pair");
      if (static_cast<int>(e.cond.size()) != t) throw std::invalid_argument("vine: conditioning set size must equal tree level");
      const auto [a, b] = endpoints(e, t);
      if (a < 0 || b < 0 || a >= nodes || b >= nodes) throw std::invalid_argument("vine: edge endpoint out of range");
      if (!uf.unite(a, b)) throw std::invalid_argument("vine: tree " + std::to_string(t) + " contains a cycle");
      if (t > 0) {
        const auto& pa = trees_[t - 1][e.p1];
        const auto& pb = trees_[t - 1][e.p2];
        if (!share_node(endpoints(pa, t - 1), endpoints(pb, t - 1)))
          throw std::invalid_argument("vine: proximity condition violated");
        auto fa = e.cond;
        fa.push_back(e.v1);
        std::sort(fa.begin(), fa.end());
        auto fb = e.cond;
        fb.push_back(e.v2);
        std::sort(fb.begin(), fb.end());
        if (fa != full_set(pa) || fb != full_set(pb) || (pa.v1 != e.v1 && pa.v2 != e.v1) ||
            (pb.v1 != e.v2 && pb.v2 != e.v2))
          throw std::invalid_argument("vine: edge is inconsistent with its parent edges");
      }
    }
  }

  // Sampling order: peel a conditioned variable of the top edge that is a
  // leaf in every tree.
  std::vector<std::vector<bool>> active(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) active[t].assign(trees_[t].size(), true);
  std::vector<int> removed;
  std::vector<std::vector<int>> removed_chain;
  int remaining = dim_;
  while (remaining > 2) {
    const int top = remaining - 2;
    int top_edge = -1;
    for (std::size_t e = 0; e < trees_[top].size(); ++e)
      if (active[top][e]) top_edge = static_cast<int>(e);
    bool done = false;
    for (int x : {trees_[top][top_edge].v1, trees_[top][top_edge].v2}) {
      std::vector<int> chain(static_cast<std::size_t>(top + 1), -1);
      bool ok = true;
      for (int t = 0; t <= top && ok; ++t) {
        int count = 0;
        for (std::size_t e = 0; e < trees_[t].size(); ++e) {
          if (!active[t][e]) continue;
          const auto& ed = trees_[t][e];
          if (contains(ed.cond, x)) ok = false;
          if (ed.v1 == x || ed.v2 == x) {
            ++count;
            chain[t] = static_cast<int>(e);
          }
        }
        ok = ok && count == 1;
      }
      if (!ok) continue;
      for (int t = 0; t <= top; ++t) active[t][chain[t]] = false;
      removed.push_back(x);
      removed_chain.push_back(std::move(chain));
      done = true;
      break;
    }
    if (!done) throw std::invalid_argument("vine: structure admits no sampling order");
    --remaining;
  }
  order_.clear();
  chain_.clear();
  if (dim_ == 1) {
    order_ = {0};
    chain_ = {{}};
  } else {
    int last = -1;
    for (std::size_t e = 0; e < trees_[0].size(); ++e)
      if (active[0][e]) last = static_cast<int>(e);
    order_ = {trees_[0][last].v1, trees_[0][last].v2};
    chain_ = {{}, {last}};
    for (std::size_t k = removed.size(); k-- > 0;) {
      order_.push_back(removed[k]);
      chain_.push_back(removed_chain[k]);
    }
  }
}

VineModel VineModel::independence(int dim) {
  std::vector<std::vector<VineEdge>> trees;
  if (dim >= 2) {
    // D-vine on 0..dim-1 with independence pairs.
    std::vector<VineEdge> t0;
    for (int i = 0; i + 1 < dim; ++i) t0.push_back({i, i + 1, {}, -1, -1, BivariateCopula::independence()});
    trees.push_back(std::move(t0));
    for (int t = 1; t < dim - 1; ++t) {
      std::vector<VineEdge> tree;
      for (int i = 0; i + t + 1 < dim; ++i) {
        VineEdge e;
        e.v1 = i;
        e.v2 = i + t + 1;
        for (int c = i + 1; c <= i + t; ++c) e.cond.push_back(c);
        e.p1 = i;
        e.p2 = i + 1;
        e.copula = BivariateCopula::independence();
        tree.push_back(std::move(e));
      }
      trees.push_back(std::move(tree));
    }
  }
  return VineModel(dim, std::move(trees));
}

std::size_t VineModel::edge_count() const {
  std::size_t n = 0;
  for (const auto& t : trees_) n += t.size();
  return n;
}

double VineModel::input(Cache& c, int tree, int edge, int var) const {
  if (tree == 0) {
    const double v = c.u[var];
    if (std::isnan(v)) throw std::logic_error("vine: variable requested before it is known");
    return v;
  }
  const auto& e = trees_[tree][edge];
  return output(c, tree - 1, var == e.v1 ? e.p1 : e.p2, var);
}

double VineModel::output(Cache& c, int tree, int edge, int var) const {
  const auto& e = trees_[tree][edge];
  const int slot = var == e.v1 ? 0 : 1;
  double& memo = c.out[tree][edge][slot];
  if (!std::isnan(memo)) return memo;
  const double u1 = input(c, tree, edge, e.v1);
  const double u2 = input(c, tree, edge, e.v2);
  memo = slot == 0 ? e.copula.h2(u1, u2) : e.copula.h1(u1, u2);
  return memo;
}

namespace {
double clamp01(double u) { return std::clamp(u, 1e-12, 1.0 - 1e-12); }
}  // namespace

double VineModel::log_density(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("vine: dimension mismatch");
  Cache c;
  c.u.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) c.u[i] = clamp01(u[i]);
  c.out.resize(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) c.out[t].assign(trees_[t].size(), {kNaN, kNaN});
  double ld = 0.0;
  for (int t = 0; t < static_cast<int>(trees_.size()); ++t)
    for (int e = 0; e < static_cast<int>(trees_[t].size()); ++e) {
      const auto& ed = trees_[t][e];
      ld += ed.copula.log_pdf(input(c, t, e, ed.v1), input(c, t, e, ed.v2));
    }
  return ld;
}

double VineModel::density(std::span<const double> u) const { return std::exp(log_density(u)); }

std::vector<double> VineModel::rosenblatt(std::span<const double> u_hat) const {
  if (u_hat.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("vine: dimension mismatch");
  Cache c;
  c.u.resize(u_hat.size());
  for (std::size_t i = 0; i < u_hat.size(); ++i) c.u[i] = clamp01(u_hat[i]);
  c.out.resize(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) c.out[t].assign(trees_[t].size(), {kNaN, kNaN});
  std::vector<double> w(u_hat.size());
  w[order_[0]] = c.u[order_[0]];
  for (std::size_t k = 1; k < order_.size(); ++k)
    w[order_[k]] = output(c, static_cast<int>(k) - 1, chain_[k][k - 1], order_[k]);
  return w;
}

std::vector<double> VineModel::inverse_rosenblatt(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("vine: dimension mismatch");
  Cache c;
  c.u.assign(u.size(), kNaN);
  c.out.resize(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) c.out[t].assign(trees_[t].size(), {kNaN, kNaN});
  c.u[order_[0]] = clamp01(u[order_[0]]);
  for (std::size_t k = 1; k < order_.size(); ++k) {
    const int x = order_[k];
    double w = clamp01(u[x]);
    for (int t = static_cast<int>(k) - 1; t >= 0; --t) {
      const int e = chain_[k][t];
      const auto& ed = trees_[t][e];
      c.out[t][e][x == ed.v1 ? 0 : 1] = w;
      const int other = x == ed.v1 ? ed.v2 : ed.v1;
      const double in_other = input(c, t, e, other);
      w = x == ed.v1 ? ed.copula.h2_inverse(w, in_other) : ed.copula.h1_inverse(in_other, w);
      w = clamp01(w);
    }
    c.u[x] = w;
  }
  return c.u;
}

std::vector<double> VineModel::sample_y(std::span<const double> u) const {
  if (marginals_.size() != static_cast<std::size_t>(dim_)) throw std::logic_error("vine: marginals not fitted");
  auto v = inverse_rosenblatt(u);
  for (int j = 0; j < dim_; ++j) v[j] = marginals_[j].quantile(v[j]);
  return v;
}

double VineModel::loglik(const std::vector<std::vector<double>>& rows) const {
  double ll = 0.0;
  for (const auto& r : rows) ll += log_density(r);
  return ll;
}

namespace {

struct Candidate {
  double weight;
  int a, b;
};

std::vector<double> column(const std::vector<std::vector<double>>& rows, int j) {
  std::vector<double> c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) c[i] = rows[i][j];
  return c;
}

}  // namespace

namespace {

using Outputs = std::array<std::vector<double>, 2>;  // h-outputs for v1, v2

// Single-family option sets.  Index 0 is independence.
std::vector<BivariateFitOptions> family_classes(const BivariateFitOptions& allowed) {
  BivariateFitOptions none;
  none.allow_gaussian = none.allow_student_t = none.allow_clayton = none.allow_gumbel = none.allow_frank =
      none.allow_checkerboard = none.independence_test = false;
  std::vector<BivariateFitOptions> out{none};
  auto add = [&](bool on, bool BivariateFitOptions::*flag) {
    if (!on) return;
    auto o = none;
    o.*flag = true;
    out.push_back(o);
  };
  add(allowed.allow_gaussian, &BivariateFitOptions::allow_gaussian);
  add(allowed.allow_student_t, &BivariateFitOptions::allow_student_t);
  add(allowed.allow_clayton, &BivariateFitOptions::allow_clayton);
  add(allowed.allow_gumbel, &BivariateFitOptions::allow_gumbel);
  add(allowed.allow_frank, &BivariateFitOptions::allow_frank);
  add(allowed.allow_checkerboard, &BivariateFitOptions::allow_checkerboard);
  return out;
}

std::size_t class_of(const BivariateCopula& c, const std::vector<BivariateFitOptions>& classes) {
  for (std::size_t k = 1; k < classes.size(); ++k) {
    const auto& o = classes[k];
    switch (c.family()) {
      case CopulaFamily::gaussian: if (o.allow_gaussian) return k; break;
      case CopulaFamily::student_t: if (o.allow_student_t) return k; break;
      case CopulaFamily::clayton: if (o.allow_clayton) return k; break;
      case CopulaFamily::gumbel: if (o.allow_gumbel) return k; break;
      case CopulaFamily::frank: if (o.allow_frank) return k; break;
      case CopulaFamily::checkerboard: if (o.allow_checkerboard) return k; break;
      case CopulaFamily::independence: break;
    }
  }
  return 0;
}

// A vine with fixed structure and per-edge family class, together with the
// pseudo-observations flowing through it.
struct FitState {
  std::vector<std::vector<VineEdge>> trees;
  std::vector<std::vector<std::size_t>> cls;
  std::vector<std::vector<double>> ll;
  std::vector<std::vector<Outputs>> out;

  double aic() const {
    double a = 0.0;
    for (std::size_t t = 0; t < trees.size(); ++t)
      for (std::size_t e = 0; e < trees[t].size(); ++e) a += 2.0 * trees[t][e].copula.n_params() - 2.0 * ll[t][e];
    return a;
  }

  std::pair<const std::vector<double>*, const std::vector<double>*> inputs(
      const std::vector<std::vector<double>>& cols, std::size_t t, std::size_t e) const {
    const auto& edge = trees[t][e];
    if (t == 0) return {&cols[edge.v1], &cols[edge.v2]};
    const auto& prev = trees[t - 1];
    const auto& a = prev[edge.p1];
    const auto& b = prev[edge.p2];
    return {&out[t - 1][edge.p1][a.v1 == edge.v1 ? 0 : 1], &out[t - 1][edge.p2][b.v1 == edge.v2 ? 0 : 1]};
  }

  void set_outputs(const std::vector<std::vector<double>>& cols, std::size_t t, std::size_t e) {
    const auto [x, y] = inputs(cols, t, e);
    const auto& c = trees[t][e].copula;
    Outputs o{std::vector<double>(x->size()), std::vector<double>(x->size())};
    for (std::size_t i = 0; i < x->size(); ++i) {
      o[0][i] = c.h2((*x)[i], (*y)[i]);
      o[1][i] = c.h1((*x)[i], (*y)[i]);
    }
    out[t][e] = std::move(o);
  }

  // Re-estimates the edges fed, directly or not, by edge e of tree t.  They
  // keep their family and shape; only the dependence parameter moves.
  void settle_after(const std::vector<std::vector<double>>& cols, std::size_t t, std::size_t e,
                    const std::vector<BivariateFitOptions>& classes) {
    std::vector<char> dirty(trees[t].size(), 0);
    dirty[e] = 1;
    for (std::size_t tt = t + 1; tt < trees.size(); ++tt) {
      std::vector<char> next(trees[tt].size(), 0);
      for (std::size_t k = 0; k < trees[tt].size(); ++k) {
        const auto& edge = trees[tt][k];
        if (!dirty[edge.p1] && !dirty[edge.p2]) continue;
        next[k] = 1;
        if (cls[tt][k] != 0) {
          auto o = classes[cls[tt][k]];
          if (edge.copula.family() == CopulaFamily::student_t) o.student_t_nu = edge.copula.par2();
          const auto [x, y] = inputs(cols, tt, k);
          const auto r = fit_bivariate(*x, *y, o);
          trees[tt][k].copula = r.copula;
          ll[tt][k] = r.loglik;
        }
        set_outputs(cols, tt, k);
      }
      dirty = std::move(next);
    }
  }
};

// Greedy per-edge AIC ignores what a family choice does to the conditioned
// pseudo-observations of later trees.  Revisit each dependent edge, try the
// best member of every other family with the downstream edges re-estimated,
// and keep the change when the AIC of the whole vine drops.
void refine_families(FitState& s, const std::vector<std::vector<double>>& cols,
                     const std::vector<BivariateFitOptions>& classes, int max_sweeps) {
  if (classes.size() <= 2) return;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t t = 0; t < s.trees.size(); ++t)
      for (std::size_t e = 0; e < s.trees[t].size(); ++e) {
        if (s.cls[t][e] == 0) continue;  // kept independent by the Kendall test
        const auto [x, y] = s.inputs(cols, t, e);
        std::vector<FitState> cand(classes.size());
        std::vector<double> score(classes.size(), std::numeric_limits<double>::infinity());
        parallel_for(classes.size(), [&](std::size_t k) {
          if (k == 0 || k == s.cls[t][e]) return;
          FitState c = s;
          const auto r = fit_bivariate(*x, *y, classes[k]);
          c.trees[t][e].copula = r.copula;
          c.cls[t][e] = k;
          c.ll[t][e] = r.loglik;
          c.set_outputs(cols, t, e);
          c.settle_after(cols, t, e, classes);
          score[k] = c.aic();
          cand[k] = std::move(c);
        });
        std::size_t best = 0;
        double best_aic = s.aic();
        for (std::size_t k = 1; k < classes.size(); ++k)
          if (score[k] < best_aic - 1e-9 * std::abs(best_aic)) {
            best_aic = score[k];
            best = k;
          }
        if (best != 0) {
          s = std::move(cand[best]);
          changed = true;
        }
      }
    if (!changed) break;
  }
}

}  // namespace

VineModel fit_vine(const std::vector<std::vector<double>>& rows, const VineFitOptions& opts) {
  if (rows.empty()) throw std::invalid_argument("fit_vine: no data");
  const int d = static_cast<int>(rows.front().size());
  if (d < 2) throw std::invalid_argument("fit_vine: need at least two dimensions");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != d) throw std::invalid_argument("fit_vine: ragged data");

  std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) cols[j] = column(rows, j);
  const auto classes = family_classes(opts.pair);

  FitState s;
  for (int t = 0; t < d - 1; ++t) {
    std::vector<Candidate> cand;
    std::vector<VineEdge> proto;
    std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>> inputs;

    auto add_candidate = [&](VineEdge e, const std::vector<double>* x, const std::vector<double>* y, int a, int b) {
      const double w = (opts.dvine && t == 0 && std::abs(a - b) != 1) ? -1.0 : std::abs(stats::kendall_tau(*x, *y));
      if (w < 0.0) return;
      cand.push_back({w, a, b});
      proto.push_back(std::move(e));
      inputs.emplace_back(x, y);
    };

    int nodes;
    if (t == 0) {
      nodes = d;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) add_candidate({i, j, {}, -1, -1, {}}, &cols[i], &cols[j], i, j);
    } else {
      const auto& prev = s.trees.back();
      const auto& prev_out = s.out.back();
      nodes = static_cast<int>(prev.size());
      for (int a = 0; a < nodes; ++a)
        for (int b = a + 1; b < nodes; ++b) {
          if (!share_node(endpoints(prev[a], t - 1), endpoints(prev[b], t - 1))) continue;
          const auto fa = full_set(prev[a]), fb = full_set(prev[b]);
          std::vector<int> common, only_a, only_b;
          std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(common));
          std::set_difference(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(only_a));
          std::set_difference(fb.begin(), fb.end(), fa.begin(), fa.end(), std::back_inserter(only_b));
          if (only_a.size() != 1 || only_b.size() != 1) continue;
          const int x = only_a[0], y = only_b[0];
          if ((prev[a].v1 != x && prev[a].v2 != x) || (prev[b].v1 != y && prev[b].v2 != y)) continue;
          const auto* ix = &prev_out[a][prev[a].v1 == x ? 0 : 1];
          const auto* iy = &prev_out[b][prev[b].v1 == y ? 0 : 1];
          add_candidate({x, y, common, a, b, {}}, ix, iy, a, b);
        }
    }

    std::vector<std::size_t> idx(cand.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return cand[p].weight > cand[q].weight; });
    UnionFind uf(nodes);
    std::vector<std::size_t> picked;
    for (std::size_t k : idx) {
      if (!uf.unite(cand[k].a, cand[k].b)) continue;
      picked.push_back(k);
      if (static_cast<int>(picked.size()) == nodes - 1) break;
    }
    if (static_cast<int>(picked.size()) != nodes - 1) throw std::runtime_error("fit_vine: could not build a spanning tree");

    std::vector<BivariateFitResult> fits(picked.size());
    parallel_for(picked.size(), [&](std::size_t i) {
      fits[i] = fit_bivariate(*inputs[picked[i]].first, *inputs[picked[i]].second, opts.pair);
    });
    s.trees.emplace_back();
    s.cls.emplace_back();
    s.ll.emplace_back();
    s.out.emplace_back(picked.size());
    for (std::size_t i = 0; i < picked.size(); ++i) {
      VineEdge e = proto[picked[i]];
      e.copula = fits[i].copula;
      s.trees.back().push_back(std::move(e));
      s.cls.back().push_back(class_of(fits[i].copula, classes));
      s.ll.back().push_back(fits[i].loglik);
      s.set_outputs(cols, static_cast<std::size_t>(t), i);
    }
  }
  if (opts.refine_sweeps > 0) refine_families(s, cols, classes, opts.refine_sweeps);
  return VineModel(d, std::move(s.trees));
}

VineModel fit_vine_to_data(const std::vector<std::vector<double>>& y_rows, const VineFitOptions& opts) {
  if (y_rows.empty()) throw std::invalid_argument("fit_vine_to_data: no data");
  const int d = static_cast<int>(y_rows.front().size());
  std::vector<std::vector<double>> u(y_rows.size(), std::vector<double>(static_cast<std::size_t>(d)));
  std::vector<stats::EmpiricalDistribution> marg;
  for (int j = 0; j < d; ++j) {
    const auto col = column(y_rows, j);
    const auto po = stats::pseudo_observations(col);
    for (std::size_t i = 0; i < y_rows.size(); ++i) u[i][j] = po[i];
    marg.emplace_back(col);
  }
  const VineModel m = fit_vine(u, opts);
  return VineModel(d, m.trees(), std::move(marg));
}

std::vector<std::vector<double>> kendall_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const int d = static_cast<int>(rows.front().size());
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) cols[j] = column(rows, j);
  std::vector<std::vector<double>> m(d, std::vector<double>(d, 1.0));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) m[i][j] = m[j][i] = stats::kendall_tau(cols[i], cols[j]);
  return m;
}

}  // namespace faultflow
