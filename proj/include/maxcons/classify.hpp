// Characteristics of conserved currents, leading Killing data, triviality and equivalence decisions,
// the explicit current bases, and classification by descent.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxcons/currents.hpp"
#include "maxcons/jetspace.hpp"
#include "maxcons/killing.hpp"

namespace maxcons {

// div(c) = q^{AA'} Deltabar_{AA'} + qt^{AA'} Delta_{AA'} + D_mu R^mu with R vanishing on-shell.
// Lower components at index 2A + A'. For real currents qt = conj(q).
struct Characteristic {
  SpinorField q;
  SpinorField qt;
};
Characteristic characteristic_pair(const Current& c);
SpinorField characteristic_of(const Current& c);
// Re-expansion check: lifted div(c) - (q Deltabar + qt Delta) has an Euler image vanishing on-shell,
// and q is an adjoint symmetry on-shell.
bool characteristic_verify(const Current& c, const Characteristic& ch);

// D^{A'}_{(C} Q_{A)A'} on-shell at (C, A) = (0,0), (0,1), (1,1).
std::array<Poly, 3> spinorial_curl(const SpinorField& Q);
// Largest on-shell jet order among the entries, -1 when none.
int jet_order(const std::array<Poly, 3>& c);
int jet_order(const SpinorField& f);

// Killing data read from the highest order terms of the curl.
// Odd curl order 2r+1 (even map): K real of type (2r+1, 2r+1) and kappa of type (2r-1, 2r+3) for r >= 1.
// Even curl order 2r+2 (odd map): K real of type (2r+2, 2r+2), entering the characteristic as i K.
struct LeadingKilling {
  enum class Map { None, Even, Odd };
  Map map = Map::None;
  int curl_order = -1;
  KillingSpinor K;
  std::optional<KillingSpinor> kappa;
};
class MalformedCharacteristic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
LeadingKilling extract_leading_killing(const SpinorField& Q);
// Characteristic-level leading form of a Killing spinor: K phi-term of the even or odd map.
SpinorField leading_adjoint(const KillingSpinor& K);
SpinorField leading_adjoint_chiral(const KillingSpinor& kappa);

// Basis current labels.
enum class BasisFamily { T, Tp, Z, Zp, Vplus, Vminus, Vpplus, Vpminus };
struct BasisLabel {
  ProductLabel prod;

  BasisFamily family() const;
  int weight() const;
  std::string family_name() const;
  std::string str() const;
  static BasisLabel parse(const std::string& text);
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};
const char* family_name(BasisFamily f);
enum class Form { Spinor, Tensor };
struct BasisEntry {
  BasisLabel label;
  Current current;
};
// All basis currents of weight <= w (w <= 2), labels sorted by (weight, label).
std::vector<BasisLabel> basis_labels(int w);
std::vector<BasisEntry> basis_enumerate(int w, Form form = Form::Spinor, int jobs = 1);
Current basis_current(const BasisLabel& lab, Form form = Form::Spinor);
// Leading Killing spinor of the characteristic of a basis current divided by its product element.
Scalar basis_normalization(BasisFamily f);
// Normalization shared by labels of the same block, primedness and sign twist.
Scalar basis_label_normalization(const BasisLabel& lab);
// Ratio measured on this label alone; equals basis_label_normalization when normalization is uniform.
Scalar basis_label_ratio(const BasisLabel& lab);

enum class Verdict { Trivial, NonTrivial, Inconclusive };
const char* verdict_name(Verdict v);
struct TrivialityReport {
  Verdict verdict = Verdict::Inconclusive;
  SpinorField characteristic;
  std::optional<Poly> chi;      // gauge witness with characteristic = D chi
  int chi_degree_bound = 0;
};
// Bound on the x-degree of the gauge witness: weight + 4.
TrivialityReport triviality(const Current& c);
// Throws InconclusiveError when the witness bound is exceeded.
bool is_trivial(const Current& c);
bool equivalent(const Current& a, const Current& b);
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Largest total derivative-order count over monomials (the grading of the descent).
int current_weight(const Current& c);
// Gauge witness search: chi with Q = D chi on-shell, x-degree <= bound.
std::optional<Poly> gradient_witness(const SpinorField& Q, int bound);

struct Decomposition {
  std::vector<std::pair<BasisLabel, Scalar>> terms;
  Current residual;
  bool residual_trivial = false;
  std::optional<SpinorField> linear_part;  // characteristic of a nontrivial linear residual
  std::vector<Poly> certificate;            // gauge witnesses
};
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
Decomposition classify_current(const Current& c);
// c == sum coeff * basis_current(label) + residual.
bool reconstruction_holds(const Current& c, const Decomposition& d);

// Trivial current D_nu Theta^{mu nu} for a skew tensor of on-shell polynomials given by frame pairs.
Current trivial_current(const std::array<Poly, kSkewPairs>& theta);

struct FamilyDims {
  std::string family;
  long long formula = 0;
  long long enumerated = -1;  // -1 when not enumerated
  long long rank = -1;        // -1 when not computed
  std::vector<int> degree_breakdown;
};
struct DimsReport {
  int r = 0;
  std::vector<FamilyDims> families;  // T, Z, V
};
long long dim_T(int r);
long long dim_Z(int r);
long long dim_V(int r);
// Counts by top x-degree of the basis currents of a family block.
std::vector<int> degree_breakdown(const std::vector<BasisEntry>& block);
// Rank of the evaluation matrix at seeded jet points modulo a prime.
std::size_t evaluation_rank(const std::vector<Current>& currents, std::uint64_t seed, int points = 0);
DimsReport dims_report(int r, bool with_rank = true, std::uint64_t seed = 0, int jobs = 1);

}  // namespace maxcons
