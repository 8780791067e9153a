#pragma once

// Hypergraph-state description of the Choi states of C^{n-1}Z and C^{n-1}X,
// their (non-Pauli) stabilizer generators, and the coloring strategy.
//
// Vertices are 0-based: inputs 0..n-1, outputs n..2n-1.

#include <string>
#include <vector>

#include "qgv/linalg.hpp"
#include "qgv/stabilizer.hpp"
#include "qgv/strategies.hpp"

namespace qgv {

struct Hypergraph {
  int vertex_count = 0;
  std::vector<std::vector<int>> edges;  // each sorted ascending

  // Throws on out-of-range vertices, edges with repeated vertices, or duplicate edges.
  void validate() const;
  std::vector<std::vector<int>> edges_containing(int v) const;
};

enum class MultiControlledGate { CnZ, CnX };

std::string to_string(MultiControlledGate g);

struct ChoiHypergraph {
  int n = 0;
  MultiControlledGate gate = MultiControlledGate::CnZ;
  Hypergraph graph;
  std::vector<int> hadamard_qubits;  // local layer mapping |HG> to the Choi state
};

// Pair edges {i, i+n} plus one hyperedge over the outputs. n >= 2.
ChoiHypergraph choi_hypergraph(int n, MultiControlledGate gate);

// C^{k-1}Z on k qubits: I - 2|1..1><1..1|.
Matrix multi_controlled_z(int k);
// C^{n-1}X with control qubits 0..n-2 and target n-1.
Matrix multi_controlled_x(int n);
Matrix multi_controlled_unitary(int n, MultiControlledGate gate);

// prod_e C^{|e|-1}Z_e |+>^{(x) N}.
Matrix hypergraph_state(const Hypergraph& hg);

// Hadamard layer applied to hypergraph_state.
Matrix dressed_hypergraph_state(const ChoiHypergraph& chg);

// g_v = X_v prod_{e containing v} C^{|e|-2}Z_{e \ v}. Size-one remainders
// (ordinary edges) are folded into the Pauli part as Z.
struct NonPauliGenerator {
  int vertex = 0;
  PauliString pauli_part;
  std::vector<std::vector<int>> controlled_phase_part;  // supports of size >= 2

  Matrix to_matrix() const;
};

std::vector<NonPauliGenerator> hypergraph_generators(const Hypergraph& hg);

// Greedy coloring in vertex order; vertices sharing any edge get distinct colors.
std::vector<std::vector<int>> coloring(const Hypergraph& hg);

// Per-color test prod_{v in class} (I + g_v')/2 in the Choi frame (g_v' = H g_v H).
Matrix color_test_operator(const ChoiHypergraph& chg, const std::vector<int>& color_class);

// Uniform mixture of the per-color tests, realised as product-basis pairs. 2 <= n <= 3.
Strategy color_strategy(int n, MultiControlledGate gate);

// Expectation of C^{k-1}Z from a Z^{(x)k} measurement: sum_z p(z) (-1)^{[z = 1..1]}.
double controlled_phase_expectation_from_z(const Matrix& rho);

}  // namespace qgv
