#include "carnot/algebra.hpp"

#include <functional>
#include <mutex>
#include <regex>

#include "carnot/linsolve.hpp"

namespace carnot {

namespace {

std::string label_text(const Stratification& g, int i) {
  BasisLabel l = g.label_of(i);
  return "e(" + std::to_string(l.layer) + "," + std::to_string(l.slot) + ")";
}

SparseCombination normalized(SparseCombination c) {
  std::map<int, Rational> acc;
  for (auto& [i, v] : c) acc[i] += v;
  SparseCombination out;
  for (auto& [i, v] : acc)
    if (v != 0) out.emplace_back(i, v);
  return out;
}

SparseCombination negated(SparseCombination c) {
  for (auto& [i, v] : c) v = -v;
  return c;
}

std::vector<Rational> dense(const Stratification& g, const SparseCombination& c) {
  std::vector<Rational> v(g.dim(), Rational(0));
  for (const auto& [i, x] : c) v[i] += x;
  return v;
}

}  // namespace

int Stratification::homogeneous_dimension() const {
  int q = 0;
  for (int j = 0; j < step(); ++j) q += (j + 1) * layer_dims_[j];
  return q;
}

int Stratification::flat_index(BasisLabel label) const {
  if (label.layer < 1 || label.layer > step() || label.slot < 1 || label.slot > layer_dims_[label.layer - 1])
    throw Error(ErrorKind::InvalidArgument, "basis label (" + std::to_string(label.layer) + "," +
                                                std::to_string(label.slot) + ") out of range");
  return layer_offset_[label.layer - 1] + label.slot - 1;
}

BasisLabel Stratification::label_of(int i) const {
  int layer = layer_of_.at(i);
  return {layer, i - layer_offset_[layer - 1] + 1};
}

SparseCombination Stratification::basis_bracket(int a, int b) const {
  if (a == b) return {};
  bool flip = a > b;
  auto it = constants_.find(flip ? std::make_pair(b, a) : std::make_pair(a, b));
  if (it == constants_.end()) return {};
  return flip ? negated(it->second) : it->second;
}

GroupPtr build_algebra(const std::vector<int>& layer_dims, const std::vector<BracketEntry>& table,
                       const std::string& name, const std::vector<std::string>& names) {
  if (layer_dims.empty()) throw Error(ErrorKind::InvalidArgument, "at least one layer is required");
  for (int d : layer_dims)
    if (d <= 0) throw Error(ErrorKind::InvalidArgument, "layer dimensions must be positive");

  std::shared_ptr<Stratification> g(new Stratification());
  g->name_ = name;
  g->layer_dims_ = layer_dims;
  int offset = 0;
  for (std::size_t j = 0; j < layer_dims.size(); ++j) {
    g->layer_offset_.push_back(offset);
    for (int s = 0; s < layer_dims[j]; ++s) g->layer_of_.push_back(static_cast<int>(j) + 1);
    offset += layer_dims[j];
  }
  g->dim_ = offset;
  const int n = g->dim_;

  for (const auto& e : table) {
    if (e.left < 0 || e.left >= n || e.right < 0 || e.right >= n)
      throw Error(ErrorKind::InvalidArgument, "bracket table references basis index outside 0.." +
                                                  std::to_string(n - 1));
    for (const auto& [c, v] : e.result)
      if (c < 0 || c >= n) throw Error(ErrorKind::InvalidArgument, "bracket result index out of range");
    SparseCombination res = normalized(e.result);
    if (e.left == e.right) {
      if (!res.empty())
        throw Error(ErrorKind::AntisymmetryViolation,
                    "[" + label_text(*g, e.left) + "," + label_text(*g, e.left) + "] must vanish");
      continue;
    }
    auto key = e.left < e.right ? std::make_pair(e.left, e.right) : std::make_pair(e.right, e.left);
    if (e.left > e.right) res = negated(res);
    auto [it, inserted] = g->constants_.try_emplace(key, res);
    if (!inserted && it->second != res)
      throw Error(ErrorKind::AntisymmetryViolation,
                  "[" + label_text(*g, key.first) + "," + label_text(*g, key.second) +
                      "] listed twice with entries that are not negatives of each other");
  }
  for (auto it = g->constants_.begin(); it != g->constants_.end();)
    it = it->second.empty() ? g->constants_.erase(it) : std::next(it);

  const int r = g->step();
  // Grading: [g_i, g_j] lies in g_{i+j}, and vanishes past the top layer.
  for (const auto& [key, comb] : g->constants_) {
    int target = g->layer_of(key.first) + g->layer_of(key.second);
    for (const auto& [c, v] : comb)
      if (target > r || g->layer_of(c) != target)
        throw Error(ErrorKind::NotGraded, "[" + label_text(*g, key.first) + "," +
                                              label_text(*g, key.second) + "] has a component on " +
                                              label_text(*g, c));
  }

  auto bracket_dense = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    return g->bracket_coords<Rational>(a, b);
  };
  auto unit = [&](int i) {
    std::vector<Rational> v(n, Rational(0));
    v[i] = 1;
    return v;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        auto ea = unit(a), eb = unit(b), ec = unit(c);
        auto t1 = bracket_dense(ea, bracket_dense(eb, ec));
        auto t2 = bracket_dense(eb, bracket_dense(ec, ea));
        auto t3 = bracket_dense(ec, bracket_dense(ea, eb));
        for (int k = 0; k < n; ++k)
          if (t1[k] + t2[k] + t3[k] != 0)
            throw Error(ErrorKind::JacobiViolation, "triple (" + label_text(*g, a) + ", " +
                                                        label_text(*g, b) + ", " + label_text(*g, c) + ")");
      }

  // Stratification: [g_1, g_j] spans g_{j+1}.
  for (int j = 1; j < r; ++j) {
    int next_dim = layer_dims[j];
    std::vector<std::vector<Rational>> rows;
    for (int i = 0; i < layer_dims[0]; ++i)
      for (int s = 0; s < layer_dims[j - 1]; ++s) {
        int b = g->layer_offset_[j - 1] + s;
        auto v = dense(*g, g->basis_bracket(i, b));
        rows.push_back(std::vector<Rational>(v.begin() + g->layer_offset_[j],
                                             v.begin() + g->layer_offset_[j] + next_dim));
      }
    RationalMatrix m(static_cast<Eigen::Index>(rows.size()), next_dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < next_dim; ++c) m(static_cast<Eigen::Index>(i), c) = rows[i][c];
    if (exact_rank(m) != next_dim)
      throw Error(ErrorKind::NotStratified,
                  "[g_1, g_" + std::to_string(j) + "] does not span layer " + std::to_string(j + 1));
  }

  for (const auto& [key, comb] : g->constants_)
    for (const auto& [c, v] : comb) g->dense_terms_.emplace_back(key.first, key.second, c, to_double(v));

  auto grading = std::make_shared<Grading>();
  for (int i = 0; i < n; ++i) grading->weights.push_back(g->layer_of(i));
  grading->distinguished = layer_dims[0] - 1;
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != n) throw Error(ErrorKind::InvalidArgument, "one name per basis vector");
    grading->names = names;
  } else {
    for (int i = 0; i < n; ++i) {
      BasisLabel l = g->label_of(i);
      grading->names.push_back(l.layer == 1 ? "x" + std::to_string(l.slot)
                                            : "x" + std::to_string(l.layer) + "_" + std::to_string(l.slot));
    }
  }
  auto doubled = std::make_shared<Grading>();
  doubled->weights = grading->weights;
  doubled->weights.insert(doubled->weights.end(), grading->weights.begin(), grading->weights.end());
  doubled->distinguished = grading->distinguished;
  doubled->names = grading->names;
  for (const auto& s : grading->names) doubled->names.push_back(s + "'");
  g->grading_ = grading;
  g->doubled_ = doubled;
  return g;
}

GroupPtr heisenberg(int n) {
  if (n < 1) throw Error(ErrorKind::UnknownName, "heisenberg(n) needs n >= 1");
  std::vector<BracketEntry> table;
  for (int i = 0; i < n; ++i) table.push_back({i, n + i, {{2 * n, Rational(1)}}});
  std::vector<std::string> names;
  if (n == 1) {
    names = {"x", "y", "t"};
  } else {
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
    names.push_back("t");
  }
  return build_algebra({2 * n, 1}, table, "heisenberg" + std::to_string(n), names);
}

GroupPtr engel() {
  std::vector<BracketEntry> table{{0, 1, {{2, Rational(1)}}}, {0, 2, {{3, Rational(1)}}}};
  return build_algebra({2, 1, 1}, table, "engel", {"x", "y", "z", "w"});
}

GroupPtr free_step2(int m) {
  if (m < 2) throw Error(ErrorKind::UnknownName, "free_step2(m) needs m >= 2");
  std::vector<BracketEntry> table;
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
  int k = m;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      table.push_back({i, j, {{k++, Rational(1)}}});
      names.push_back("y" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  return build_algebra({m, m * (m - 1) / 2}, table, "free_step2_" + std::to_string(m), names);
}

GroupPtr builtin_group(const std::string& name) {
  static const std::regex heis(R"(heisenberg(?:\((\d+)\)|_?(\d+)))");
  static const std::regex free2(R"(free_step2(?:\((\d+)\)|_?(\d+)))");
  static std::mutex mutex;
  static std::map<std::string, GroupPtr> cache;
  std::smatch m;
  auto number = [&]() { return std::stoi(m[1].matched ? m[1].str() : m[2].str()); };
  std::string key;
  std::function<GroupPtr()> make;
  if (std::regex_match(name, m, heis)) {
    int n = number();
    key = "heisenberg" + std::to_string(n);
    make = [n] { return heisenberg(n); };
  } else if (std::regex_match(name, m, free2)) {
    int k = number();
    key = "free_step2_" + std::to_string(k);
    make = [k] { return free_step2(k); };
  } else if (name == "engel") {
    key = "engel";
    make = [] { return engel(); };
  } else {
    throw Error(ErrorKind::UnknownName, "no built-in group named '" + name + "'");
  }
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make()).first;
  return it->second;
}

}  // namespace carnot
