#include "qgv/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qgv/error.hpp"

namespace qgv {

namespace {

Matrix hadamard() {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// Diagonal C^{|support|-1}Z acting on the listed qubits of an n-qubit register.
Matrix controlled_phase_on(int n, const std::vector<int>& support) {
  const int dim = 1 << n;
  Matrix m = Matrix::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) {
    bool all = true;
    for (int q : support) all = all && ((i >> (n - 1 - q)) & 1);
    if (all) m(i, i) = -1.0;
  }
  return m;
}

Matrix hadamard_layer(int n, const std::vector<int>& qubits) {
  std::vector<Matrix> factors(static_cast<std::size_t>(n), identity(2));
  for (int q : qubits) factors[static_cast<std::size_t>(q)] = hadamard();
  return kron_all(factors);
}

}  // namespace

void Hypergraph::validate() const {
  if (vertex_count < 1) throw ValidationError("Hypergraph: needs at least one vertex");
  std::set<std::vector<int>> seen;
  for (const auto& e : edges) {
    if (e.empty()) throw ValidationError("Hypergraph: empty edge");
    std::vector<int> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("Hypergraph: edge repeats a vertex");
    }
    if (sorted.front() < 0 || sorted.back() >= vertex_count) {
      throw ValidationError("Hypergraph: vertex index out of range");
    }
    if (!seen.insert(sorted).second) throw ValidationError("Hypergraph: duplicate edge");
  }
}

std::vector<std::vector<int>> Hypergraph::edges_containing(int v) const {
  std::vector<std::vector<int>> out;
  for (const auto& e : edges) {
    if (std::find(e.begin(), e.end(), v) != e.end()) out.push_back(e);
  }
  return out;
}

std::string to_string(MultiControlledGate g) { return g == MultiControlledGate::CnZ ? "CnZ" : "CnX"; }

ChoiHypergraph choi_hypergraph(int n, MultiControlledGate gate) {
  if (n < 2) throw ValidationError("choi_hypergraph: n >= 2 required");
  ChoiHypergraph out{n, gate, {2 * n, {}}, {}};
  for (int i = 0; i < n; ++i) out.graph.edges.push_back({i, i + n});
  std::vector<int> outputs;
  for (int i = n; i < 2 * n; ++i) outputs.push_back(i);
  out.graph.edges.push_back(outputs);
  out.graph.validate();
  if (gate == MultiControlledGate::CnZ) {
    for (int i = 0; i < n; ++i) out.hadamard_qubits.push_back(i);
  } else {
    for (int i = 0; i < n - 1; ++i) out.hadamard_qubits.push_back(i);
    out.hadamard_qubits.push_back(2 * n - 1);
  }
  return out;
}

Matrix multi_controlled_z(int k) {
  if (k < 1) throw ValidationError("multi_controlled_z: k >= 1 required");
  std::vector<int> all(static_cast<std::size_t>(k));
  for (int q = 0; q < k; ++q) all[static_cast<std::size_t>(q)] = q;
  return controlled_phase_on(k, all);
}

Matrix multi_controlled_x(int n) {
  const Matrix h = kron(identity(1 << (n - 1)), hadamard());
  return h * multi_controlled_z(n) * h;
}

Matrix multi_controlled_unitary(int n, MultiControlledGate gate) {
  return gate == MultiControlledGate::CnZ ? multi_controlled_z(n) : multi_controlled_x(n);
}

Matrix hypergraph_state(const Hypergraph& hg) {
  hg.validate();
  const int n = hg.vertex_count;
  if (n > 12) throw ValidationError("hypergraph_state: too many vertices for a dense state");
  const int dim = 1 << n;
  Vector psi = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  for (const auto& e : hg.edges) {
    for (int i = 0; i < dim; ++i) {
      bool all = true;
      for (int q : e) all = all && ((i >> (n - 1 - q)) & 1);
      if (all) psi(i) = -psi(i);
    }
  }
  return psi;
}

Matrix dressed_hypergraph_state(const ChoiHypergraph& chg) {
  return hadamard_layer(chg.graph.vertex_count, chg.hadamard_qubits) * hypergraph_state(chg.graph);
}

Matrix NonPauliGenerator::to_matrix() const {
  Matrix m = pauli_part.to_matrix();
  for (const auto& support : controlled_phase_part) m = m * controlled_phase_on(pauli_part.n, support);
  return m;
}

std::vector<NonPauliGenerator> hypergraph_generators(const Hypergraph& hg) {
  hg.validate();
  std::vector<NonPauliGenerator> out;
  for (int v = 0; v < hg.vertex_count; ++v) {
    NonPauliGenerator g{v, PauliString::single(hg.vertex_count, v, 'X'), {}};
    for (const auto& e : hg.edges_containing(v)) {
      std::vector<int> rest;
      for (int q : e) {
        if (q != v) rest.push_back(q);
      }
      if (rest.size() == 1) {
        g.pauli_part.z[static_cast<std::size_t>(rest.front())] ^= 1;
      } else if (!rest.empty()) {
        g.controlled_phase_part.push_back(rest);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::vector<int>> coloring(const Hypergraph& hg) {
  hg.validate();
  std::vector<int> color(static_cast<std::size_t>(hg.vertex_count), -1);
  int count = 0;
  for (int v = 0; v < hg.vertex_count; ++v) {
    std::set<int> used;
    for (const auto& e : hg.edges_containing(v)) {
      for (int q : e) {
        if (q != v && color[static_cast<std::size_t>(q)] >= 0) used.insert(color[static_cast<std::size_t>(q)]);
      }
    }
    int c = 0;
    while (used.count(c)) ++c;
    color[static_cast<std::size_t>(v)] = c;
    count = std::max(count, c + 1);
  }
  std::vector<std::vector<int>> classes(static_cast<std::size_t>(count));
  for (int v = 0; v < hg.vertex_count; ++v) classes[static_cast<std::size_t>(color[static_cast<std::size_t>(v)])].push_back(v);
  return classes;
}

Matrix color_test_operator(const ChoiHypergraph& chg, const std::vector<int>& color_class) {
  const int n = chg.graph.vertex_count;
  const Matrix layer = hadamard_layer(n, chg.hadamard_qubits);
  const auto gens = hypergraph_generators(chg.graph);
  const Matrix id = identity(1 << n);
  Matrix t = id;
  for (int v : color_class) {
    if (v < 0 || v >= n) throw ValidationError("color_test_operator: vertex out of range");
    const Matrix g = layer * gens[static_cast<std::size_t>(v)].to_matrix() * layer;
    t = t * (0.5 * (id + g));
  }
  return t;
}

Strategy color_strategy(int n, MultiControlledGate gate) {
  if (n < 2 || n > 3) throw ValidationError("color_strategy: 2 <= n <= 3 required for dense construction");
  const ChoiHypergraph chg = choi_hypergraph(n, gate);
  const auto classes = coloring(chg.graph);
  const int d = 1 << n;
  const Matrix h = hadamard();
  Strategy s{d, multi_controlled_unitary(n, gate), {}};
  const double weight = 1.0 / static_cast<double>(classes.size());
  for (const auto& cls : classes) {
    // Inputs in the class are measured in X, the rest in Z; a Hadamard swaps the two.
    std::vector<Matrix> local;
    for (int q = 0; q < n; ++q) {
      const bool in_class = std::find(cls.begin(), cls.end(), q) != cls.end();
      const bool dressed = std::find(chg.hadamard_qubits.begin(), chg.hadamard_qubits.end(), q) !=
                           chg.hadamard_qubits.end();
      local.push_back(in_class != dressed ? h : identity(2));
    }
    const Matrix test = color_test_operator(chg, cls);
    auto pairs = pairs_from_block_diagonal(test, kron_all(local), weight);
    s.pairs.insert(s.pairs.end(), pairs.begin(), pairs.end());
  }
  s.validate();
  return s;
}

double controlled_phase_expectation_from_z(const Matrix& rho) {
  if (!is_square(rho) || !is_power_of_two(static_cast<int>(rho.rows()))) {
    throw ValidationError("controlled_phase_expectation_from_z: expected a qubit-register density matrix");
  }
  const auto dim = rho.rows();
  double total = 0.0;
  for (Eigen::Index z = 0; z < dim; ++z) {
    const double p = rho(z, z).real();
    total += (z == dim - 1) ? -p : p;
  }
  return total;
}

}  // namespace qgv
