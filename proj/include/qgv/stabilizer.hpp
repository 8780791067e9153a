#pragma once

// Symplectic Pauli strings, Clifford conjugation, stabilizer generators of
// Clifford Choi states, and the local strategies built from them.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qgv/linalg.hpp"
#include "qgv/strategies.hpp"

namespace qgv {

// P = i^phase * (sigma_0 (x) sigma_1 (x) ...), sigma(x, z) in {I, X, Z, Y}
// with (1, 1) denoting Y itself. Qubit 0 is the most significant tensor factor.
struct PauliString {
  int n = 0;
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  int phase = 0;  // exponent of i, kept in [0, 4)

  static PauliString identity(int n);
  // Parses e.g. "+XIZ", "-YY", "iZ", "XX"; the letters give qubits 0..n-1.
  static PauliString from_string(std::string_view text);
  // Single-letter Pauli on one qubit of an n-qubit register.
  static PauliString single(int n, int qubit, char letter);

  std::string to_string() const;
  Matrix to_matrix() const;
  bool is_identity() const;           // ignoring phase
  bool is_hermitian() const { return phase % 2 == 0; }
  int sign() const;                   // +1 or -1; throws for phase +-i
  char letter(int qubit) const;       // 'I', 'X', 'Y' or 'Z'

  bool operator==(const PauliString&) const = default;
};

PauliString multiply(const PauliString& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);

// Restriction to a contiguous range of qubits, phase dropped.
PauliString restrict_to(const PauliString& p, int first, int count);

enum class CliffordGateKind { H, S, CZ, CNOT, X, Y, Z };

struct CliffordGate {
  CliffordGateKind kind;
  int q0 = 0;
  int q1 = -1;  // second qubit for two-qubit gates
};

struct CliffordCircuit {
  int n = 0;
  std::vector<CliffordGate> gates;  // applied in order

  void validate() const;
};

// Text format: one gate per line ("H 0", "CZ 0 1"), '#' comments, optional
// "qubits N" directive (otherwise n = highest index + 1). Unknown gates throw.
CliffordCircuit parse_clifford_circuit(std::string_view text);
std::string format_clifford_circuit(const CliffordCircuit& c);

// Dense unitary of the whole circuit.
Matrix circuit_unitary(const CliffordCircuit& c);

// U p U^dagger, phase exact.
PauliString conjugate_pauli(const CliffordCircuit& c, const PauliString& p);

struct StabilizerGroup {
  int n = 0;  // qubits of the gate; generators act on 2n qubits
  std::vector<PauliString> generators;

  // Throws unless the generators commute pairwise and have symplectic rank equal to their count.
  void validate() const;
};

// Bell-pair generators X_k X_{k+n}, Z_k Z_{k+n} (k = 0..n-1, in that order)
// conjugated by the circuit acting on the output half n..2n-1.
StabilizerGroup choi_generators(const CliffordCircuit& c);

struct PauliEigenstate {
  int eigenvalue = 1;  // +1 or -1
  Matrix state;        // density matrix; maximally mixed on qubits where p is the identity
};

// Product eigenbasis of a Hermitian Pauli string. Qubits on which p acts
// trivially are left maximally mixed, so the list has 2^{|support|} entries
// (one entry with the maximally mixed state when p is the identity).
std::vector<PauliEigenstate> pauli_eigenbasis(const PauliString& p);

// Pairs realising weight * (I + S)/2 for a 2n-qubit stabilizer S = A (x) B:
// input the (conjugated) eigenstates of A, accept the matching-parity
// eigenspace of B. Eigenstates are weighted uniformly.
std::vector<VerificationPair> stabilizer_test_pairs(const PauliString& stabilizer, double weight);

// Omega = (1/2n) sum_i (I + g_i')/2, spectral gap 1/(2n).
Strategy generator_strategy(const CliffordCircuit& c);

// Uniform mixture over all 2^{2n} - 1 nontrivial stabilizers, gap 2^{2n-1}/(2^{2n}-1). n <= 4.
Strategy full_stabilizer_strategy(const CliffordCircuit& c);

// All 2^{2n} elements of the stabilizer group, identity first.
std::vector<PauliString> stabilizer_group_elements(const StabilizerGroup& g);

// Greedy grouping of generators that can share one local measurement setting
// (identical non-identity letters wherever both act). Returns generator indices.
std::vector<std::vector<int>> measurement_settings(const std::vector<PauliString>& generators);

// Upper bounds on trial numbers for n-qubit Clifford gates.
long clifford_generator_trial_bound(int n, double epsilon, double delta);
long clifford_full_trial_bound(int n, double epsilon, double delta);

}  // namespace qgv
