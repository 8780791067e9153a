#include "qgv/stabilizer.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qgv/analysis.hpp"
#include "qgv/error.hpp"

namespace qgv {

namespace {

int mod4(int k) { return ((k % 4) + 4) % 4; }

// Exponent of i picked up by sigma(x1,z1) * sigma(x2,z2).
int product_phase(int x1, int z1, int x2, int z2) {
  if (x1 == 0 && z1 == 0) return 0;
  if (x1 == 1 && z1 == 1) return z2 - x2;
  if (x1 == 1) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}

Matrix single_qubit_pauli(char letter) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ValidationError(std::string("unknown Pauli letter '") + letter + "'");
  }
  return m;
}

void check_qubit(int n, int q, const char* who) {
  if (q < 0 || q >= n) throw ValidationError(std::string(who) + ": qubit index " + std::to_string(q) + " out of range");
}

// In-place conjugation P -> G P G^dagger for one gate.
void conjugate_gate(const CliffordGate& g, PauliString& p) {
  auto& x = p.x;
  auto& z = p.z;
  switch (g.kind) {
    case CliffordGateKind::H: {
      const int q = g.q0;
      if (x[q] && z[q]) p.phase = mod4(p.phase + 2);
      std::swap(x[q], z[q]);
      break;
    }
    case CliffordGateKind::S: {
      const int q = g.q0;
      if (x[q] && z[q]) p.phase = mod4(p.phase + 2);
      z[q] ^= x[q];
      break;
    }
    case CliffordGateKind::CNOT: {
      const int c = g.q0, t = g.q1;
      if (x[c] && z[t] && (x[t] ^ z[c] ^ 1)) p.phase = mod4(p.phase + 2);
      x[t] ^= x[c];
      z[c] ^= z[t];
      break;
    }
    case CliffordGateKind::CZ: {
      // CZ = H_b CNOT_{a,b} H_b
      conjugate_gate({CliffordGateKind::H, g.q1, -1}, p);
      conjugate_gate({CliffordGateKind::CNOT, g.q0, g.q1}, p);
      conjugate_gate({CliffordGateKind::H, g.q1, -1}, p);
      break;
    }
    case CliffordGateKind::X:
      if (z[g.q0]) p.phase = mod4(p.phase + 2);
      break;
    case CliffordGateKind::Y:
      if (x[g.q0] ^ z[g.q0]) p.phase = mod4(p.phase + 2);
      break;
    case CliffordGateKind::Z:
      if (x[g.q0]) p.phase = mod4(p.phase + 2);
      break;
  }
}

bool is_two_qubit(CliffordGateKind k) { return k == CliffordGateKind::CZ || k == CliffordGateKind::CNOT; }

// Dense action of one gate on an n-qubit register.
Matrix gate_matrix(const CliffordGate& g, int n) {
  const int dim = 1 << n;
  auto bit = [n](int index, int q) { return (index >> (n - 1 - q)) & 1; };
  auto flip = [n](int index, int q) { return index ^ (1 << (n - 1 - q)); };
  const Complex i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    switch (g.kind) {
      case CliffordGateKind::H: {
        const int b = bit(col, g.q0);
        m(col & ~(1 << (n - 1 - g.q0)), col) += s;
        m(col | (1 << (n - 1 - g.q0)), col) += b ? -s : s;
        break;
      }
      case CliffordGateKind::S: m(col, col) = bit(col, g.q0) ? i : Complex(1.0); break;
      case CliffordGateKind::Z: m(col, col) = bit(col, g.q0) ? -1.0 : 1.0; break;
      case CliffordGateKind::X: m(flip(col, g.q0), col) = 1.0; break;
      case CliffordGateKind::Y: m(flip(col, g.q0), col) = bit(col, g.q0) ? -i : i; break;
      case CliffordGateKind::CZ:
        m(col, col) = (bit(col, g.q0) && bit(col, g.q1)) ? -1.0 : 1.0;
        break;
      case CliffordGateKind::CNOT:
        m(bit(col, g.q0) ? flip(col, g.q1) : col, col) = 1.0;
        break;
    }
  }
  return m;
}

int symplectic_rank(const std::vector<PauliString>& ps) {
  if (ps.empty()) return 0;
  const int n = ps.front().n;
  std::vector<std::vector<std::uint8_t>> rows;
  for (const auto& p : ps) {
    std::vector<std::uint8_t> r(p.x);
    r.insert(r.end(), p.z.begin(), p.z.end());
    rows.push_back(std::move(r));
  }
  int rank = 0;
  for (int col = 0; col < 2 * n && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r != rank && rows[r][col]) {
        for (int c = 0; c < 2 * n; ++c) rows[r][c] ^= rows[rank][c];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

PauliString PauliString::identity(int n) {
  return PauliString{n, std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0), 0};
}

PauliString PauliString::single(int n, int qubit, char letter) {
  check_qubit(n, qubit, "PauliString::single");
  PauliString p = identity(n);
  switch (letter) {
    case 'I': break;
    case 'X': p.x[qubit] = 1; break;
    case 'Z': p.z[qubit] = 1; break;
    case 'Y': p.x[qubit] = p.z[qubit] = 1; break;
    default: throw ValidationError(std::string("unknown Pauli letter '") + letter + "'");
  }
  return p;
}

PauliString PauliString::from_string(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = mod4(phase + 1);
    ++pos;
  }
  const std::string_view letters = text.substr(pos);
  if (letters.empty()) throw ValidationError("PauliString: empty letter string");
  PauliString p = identity(static_cast<int>(letters.size()));
  p.phase = phase;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const PauliString s = single(p.n, static_cast<int>(q), letters[q]);
    p.x[q] = s.x[q];
    p.z[q] = s.z[q];
  }
  return p;
}

std::string PauliString::to_string() const {
  static const char* prefixes[] = {"+", "+i", "-", "-i"};
  std::string out = prefixes[mod4(phase)];
  for (int q = 0; q < n; ++q) out += letter(q);
  return out;
}

char PauliString::letter(int qubit) const {
  if (x[qubit] && z[qubit]) return 'Y';
  if (x[qubit]) return 'X';
  if (z[qubit]) return 'Z';
  return 'I';
}

Matrix PauliString::to_matrix() const {
  Matrix m = Matrix::Ones(1, 1);
  for (int q = 0; q < n; ++q) m = kron(m, single_qubit_pauli(letter(q)));
  static const Complex phases[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return phases[mod4(phase)] * m;
}

bool PauliString::is_identity() const {
  for (int q = 0; q < n; ++q) {
    if (x[q] || z[q]) return false;
  }
  return true;
}

int PauliString::sign() const {
  if (!is_hermitian()) throw ValidationError("PauliString " + to_string() + " is not Hermitian");
  return mod4(phase) == 0 ? 1 : -1;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw ValidationError("multiply: Pauli strings of different length");
  PauliString out = PauliString::identity(a.n);
  int k = a.phase + b.phase;
  for (int q = 0; q < a.n; ++q) {
    k += product_phase(a.x[q], a.z[q], b.x[q], b.z[q]);
    out.x[q] = a.x[q] ^ b.x[q];
    out.z[q] = a.z[q] ^ b.z[q];
  }
  out.phase = mod4(k);
  return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw ValidationError("commutes: Pauli strings of different length");
  int s = 0;
  for (int q = 0; q < a.n; ++q) s += a.x[q] * b.z[q] + a.z[q] * b.x[q];
  return s % 2 == 0;
}

PauliString restrict_to(const PauliString& p, int first, int count) {
  if (first < 0 || count < 0 || first + count > p.n) throw ValidationError("restrict_to: range out of bounds");
  PauliString out = PauliString::identity(count);
  for (int q = 0; q < count; ++q) {
    out.x[q] = p.x[first + q];
    out.z[q] = p.z[first + q];
  }
  return out;
}

void CliffordCircuit::validate() const {
  if (n < 1) throw ValidationError("CliffordCircuit: needs at least one qubit");
  for (const auto& g : gates) {
    check_qubit(n, g.q0, "CliffordCircuit");
    if (is_two_qubit(g.kind)) {
      check_qubit(n, g.q1, "CliffordCircuit");
      if (g.q0 == g.q1) throw ValidationError("CliffordCircuit: two-qubit gate on a single qubit");
    }
  }
}

CliffordCircuit parse_clifford_circuit(std::string_view text) {
  CliffordCircuit c;
  int declared = -1;
  int max_index = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    const std::string where = "circuit line " + std::to_string(lineno) + ": ";
    if (name == "qubits") {
      if (!(ls >> declared) || declared < 1) throw ValidationError(where + "bad qubit count");
      continue;
    }
    CliffordGate g{CliffordGateKind::H, 0, -1};
    if (name == "H") g.kind = CliffordGateKind::H;
    else if (name == "S") g.kind = CliffordGateKind::S;
    else if (name == "X") g.kind = CliffordGateKind::X;
    else if (name == "Y") g.kind = CliffordGateKind::Y;
    else if (name == "Z") g.kind = CliffordGateKind::Z;
    else if (name == "CZ") g.kind = CliffordGateKind::CZ;
    else if (name == "CNOT") g.kind = CliffordGateKind::CNOT;
    else throw ValidationError(where + "unknown gate '" + name + "'");
    if (!(ls >> g.q0)) throw ValidationError(where + "missing qubit index");
    if (is_two_qubit(g.kind) && !(ls >> g.q1)) throw ValidationError(where + "missing second qubit index");
    std::string extra;
    if (ls >> extra) throw ValidationError(where + "unexpected token '" + extra + "'");
    max_index = std::max({max_index, g.q0, g.q1});
    c.gates.push_back(g);
  }
  c.n = declared > 0 ? declared : max_index + 1;
  c.validate();
  return c;
}

std::string format_clifford_circuit(const CliffordCircuit& c) {
  static const char* names[] = {"H", "S", "CZ", "CNOT", "X", "Y", "Z"};
  std::ostringstream out;
  out << "qubits " << c.n << "\n";
  for (const auto& g : c.gates) {
    out << names[static_cast<int>(g.kind)] << ' ' << g.q0;
    if (is_two_qubit(g.kind)) out << ' ' << g.q1;
    out << "\n";
  }
  return out.str();
}

Matrix circuit_unitary(const CliffordCircuit& c) {
  c.validate();
  Matrix u = identity(1 << c.n);
  for (const auto& g : c.gates) u = gate_matrix(g, c.n) * u;
  return u;
}

PauliString conjugate_pauli(const CliffordCircuit& c, const PauliString& p) {
  c.validate();
  if (p.n != c.n) throw ValidationError("conjugate_pauli: Pauli string length does not match circuit");
  PauliString out = p;
  for (const auto& g : c.gates) conjugate_gate(g, out);
  return out;
}

void StabilizerGroup::validate() const {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].n != 2 * n) throw ValidationError("StabilizerGroup: generator length must be 2n");
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commutes(generators[i], generators[j])) {
        throw ValidationError("StabilizerGroup: generators " + std::to_string(i) + " and " + std::to_string(j) +
                              " anticommute");
      }
    }
  }
  if (symplectic_rank(generators) != static_cast<int>(generators.size())) {
    throw ValidationError("StabilizerGroup: generators are not independent");
  }
}

StabilizerGroup choi_generators(const CliffordCircuit& c) {
  c.validate();
  const int n = c.n;
  CliffordCircuit shifted{2 * n, c.gates};
  for (auto& g : shifted.gates) {
    g.q0 += n;
    if (g.q1 >= 0) g.q1 += n;
  }
  StabilizerGroup group{n, {}};
  for (int k = 0; k < n; ++k) {
    for (int kind = 0; kind < 2; ++kind) {
      PauliString g = PauliString::identity(2 * n);
      if (kind == 0) {
        g.x[k] = g.x[k + n] = 1;
      } else {
        g.z[k] = g.z[k + n] = 1;
      }
      group.generators.push_back(conjugate_pauli(shifted, g));
    }
  }
  group.validate();
  return group;
}

std::vector<PauliEigenstate> pauli_eigenbasis(const PauliString& p) {
  const int sign = p.sign();
  std::vector<int> support;
  for (int q = 0; q < p.n; ++q) {
    if (p.x[q] || p.z[q]) support.push_back(q);
  }
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto local_ket = [&](char letter, int outcome) {
    Matrix v(2, 1);
    switch (letter) {
      case 'X': v << s, (outcome == 0 ? s : -s); break;
      case 'Y': v << s, (outcome == 0 ? s * i : -s * i); break;
      default: v << (outcome == 0 ? 1.0 : 0.0), (outcome == 0 ? 0.0 : 1.0); break;
    }
    return v;
  };

  std::vector<PauliEigenstate> out;
  const int count = 1 << support.size();
  for (int mask = 0; mask < count; ++mask) {
    Matrix state = Matrix::Ones(1, 1);
    int eigenvalue = sign;
    std::size_t next = 0;
    for (int q = 0; q < p.n; ++q) {
      if (next < support.size() && support[next] == q) {
        const int outcome = (mask >> (support.size() - 1 - next)) & 1;
        if (outcome) eigenvalue = -eigenvalue;
        state = kron(state, projector(local_ket(p.letter(q), outcome)));
        ++next;
      } else {
        state = kron(state, identity(2) / 2.0);
      }
    }
    out.push_back({eigenvalue, std::move(state)});
  }
  return out;
}

std::vector<VerificationPair> stabilizer_test_pairs(const PauliString& stabilizer, double weight) {
  if (stabilizer.n % 2 != 0) throw ValidationError("stabilizer_test_pairs: expected a 2n-qubit stabilizer");
  const int n = stabilizer.n / 2;
  const int sign = stabilizer.sign();
  const PauliString a = restrict_to(stabilizer, 0, n);
  const Matrix b = restrict_to(stabilizer, n, n).to_matrix();
  const Matrix id = identity(1 << n);
  const auto eigenstates = pauli_eigenbasis(a);
  std::vector<VerificationPair> pairs;
  const double p = weight / static_cast<double>(eigenstates.size());
  for (const auto& es : eigenstates) {
    // Accept the B-eigenspace whose parity makes sign * a * b = +1.
    const double parity = static_cast<double>(sign * es.eigenvalue);
    pairs.push_back({es.state.conjugate(), 0.5 * (id + parity * b), p});
  }
  return pairs;
}

Strategy generator_strategy(const CliffordCircuit& c) {
  const auto group = choi_generators(c);
  Strategy s{1 << c.n, circuit_unitary(c), {}};
  const double weight = 1.0 / static_cast<double>(group.generators.size());
  for (const auto& g : group.generators) {
    auto pairs = stabilizer_test_pairs(g, weight);
    s.pairs.insert(s.pairs.end(), pairs.begin(), pairs.end());
  }
  s.validate();
  return s;
}

std::vector<PauliString> stabilizer_group_elements(const StabilizerGroup& g) {
  const std::size_t k = g.generators.size();
  if (k > 20) throw ValidationError("stabilizer_group_elements: group too large to enumerate");
  std::vector<PauliString> out;
  out.reserve(std::size_t{1} << k);
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    PauliString p = PauliString::identity(2 * g.n);
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (std::size_t{1} << j)) p = multiply(p, g.generators[j]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

Strategy full_stabilizer_strategy(const CliffordCircuit& c) {
  if (c.n > 4) throw ValidationError("full_stabilizer_strategy: n <= 4 required (2^{2n} enumeration)");
  const auto group = choi_generators(c);
  const auto elements = stabilizer_group_elements(group);
  Strategy s{1 << c.n, circuit_unitary(c), {}};
  const double weight = 1.0 / static_cast<double>(elements.size() - 1);
  for (std::size_t k = 1; k < elements.size(); ++k) {
    auto pairs = stabilizer_test_pairs(elements[k], weight);
    s.pairs.insert(s.pairs.end(), pairs.begin(), pairs.end());
  }
  s.validate();
  return s;
}

std::vector<std::vector<int>> measurement_settings(const std::vector<PauliString>& generators) {
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<char>> letters;  // merged setting per group
  for (int gi = 0; gi < static_cast<int>(generators.size()); ++gi) {
    const auto& g = generators[gi];
    bool placed = false;
    for (std::size_t k = 0; k < groups.size() && !placed; ++k) {
      bool ok = true;
      for (int q = 0; q < g.n && ok; ++q) {
        const char a = letters[k][q], b = g.letter(q);
        ok = (a == 'I' || b == 'I' || a == b);
      }
      if (!ok) continue;
      for (int q = 0; q < g.n; ++q) {
        if (letters[k][q] == 'I') letters[k][q] = g.letter(q);
      }
      groups[k].push_back(gi);
      placed = true;
    }
    if (!placed) {
      groups.push_back({gi});
      std::vector<char> setting(g.n);
      for (int q = 0; q < g.n; ++q) setting[q] = g.letter(q);
      letters.push_back(std::move(setting));
    }
  }
  return groups;
}

long clifford_generator_trial_bound(int n, double epsilon, double delta) {
  return ceil_count(2.0 * n / epsilon * std::log(1.0 / delta));
}

long clifford_full_trial_bound(int n, double epsilon, double delta) {
  const double full = std::pow(2.0, 2 * n);
  return ceil_count((full - 1.0) / (full / 2.0) / epsilon * std::log(1.0 / delta));
}

}  // namespace qgv
