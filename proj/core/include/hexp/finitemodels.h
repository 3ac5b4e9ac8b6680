#ifndef HEXP_FINITEMODELS_H_
#define HEXP_FINITEMODELS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexp/common.h"

namespace hexp {

enum class FamilyKind {
  kPrimeField,
  kExtensionField,  // GF(p^2) with frob and insub
  kCyclicGroup,
  kF2VectorSpace,
};

std::string_view family_name(FamilyKind kind);
std::optional<FamilyKind> parse_family_kind(std::string_view name);

struct SymbolDecl {
  std::string name;
  int arity = 0;
};

// Single-sorted signature. Constants are arity-0 function symbols.
class Signature {
 public:
  void add_function(std::string name, int arity);
  void add_relation(std::string name, int arity);

  std::optional<std::size_t> function_index(std::string_view name) const;
  std::optional<std::size_t> relation_index(std::string_view name) const;

  const std::vector<SymbolDecl>& functions() const { return functions_; }
  const std::vector<SymbolDecl>& relations() const { return relations_; }

 private:
  bool has_symbol(std::string_view name) const;

  std::vector<SymbolDecl> functions_;
  std::vector<SymbolDecl> relations_;
};

// Interpretation of a function symbol. Small universes get a dense lookup
// table; large ones evaluate the same map through an arithmetic kernel so a
// GF(p) with p in the thousands does not need p^2 table entries per symbol.
class Operation {
 public:
  enum class Kernel : std::uint8_t {
    kTable,
    kConstant,
    kAddMod,
    kSubMod,
    kMulMod,
    kXor,
    kExtAdd,
    kExtSub,
    kExtMul,
  };

  static Operation from_table(int arity, std::size_t universe,
                              std::vector<Element> table);
  static Operation from_kernel(Kernel kernel, int arity, std::uint32_t p,
                               std::uint32_t r = 0);
  static Operation constant(Element value);

  int arity() const { return arity_; }
  Kernel kernel() const { return kernel_; }
  bool tabulated() const { return kernel_ == Kernel::kTable; }

  Element operator()(std::span<const Element> args) const;

  Element apply1(Element a) const {
    return kernel_ == Kernel::kTable ? table_[a] : apply_kernel(a, 0);
  }
  Element apply2(Element a, Element b) const {
    return kernel_ == Kernel::kTable ? table_[std::size_t{a} * universe_ + b]
                                     : apply_kernel(a, b);
  }

 private:
  Element apply_kernel(Element a, Element b) const;

  Kernel kernel_ = Kernel::kTable;
  int arity_ = 0;
  std::size_t universe_ = 0;
  std::uint32_t p_ = 0;
  std::uint32_t r_ = 0;
  Element constant_ = 0;
  std::vector<Element> table_;
};

// Membership table over universe^arity, row-major.
class Relation {
 public:
  Relation() = default;
  Relation(int arity, std::size_t universe, std::vector<std::uint8_t> members);

  int arity() const { return arity_; }
  bool contains(std::span<const Element> args) const;
  bool contains1(Element a) const { return members_[a] != 0; }
  std::size_t cardinality() const;

 private:
  int arity_ = 0;
  std::size_t universe_ = 0;
  std::vector<std::uint8_t> members_;
};

// A finite L-structure on the universe {0, ..., n-1}. Immutable once built.
class FiniteStructure {
 public:
  std::size_t size() const { return size_; }
  FamilyKind family() const { return family_; }
  // The family parameter: p, n, or the dimension.
  std::uint64_t parameter() const { return parameter_; }
  std::string name() const;

  const Signature& signature() const { return signature_; }
  const Operation& function(std::size_t index) const { return functions_[index]; }
  const Relation& relation(std::size_t index) const { return relations_[index]; }
  const Operation& function(std::string_view name) const;
  const Relation& relation(std::string_view name) const;

  // Interpretation of the numeral k: the k-fold sum of the unit element
  // (1 in fields, the generator 1 in Z_n, the first basis vector in F2^d).
  Element numeral(std::uint64_t k) const;

  // Exhaustively re-checks table closure and, for extension fields, the
  // frob/insub invariants. Throws Error on violation.
  void validate() const;

 private:
  friend FiniteStructure make_prime_field(std::uint64_t p);
  friend FiniteStructure make_extension_field(std::uint64_t p);
  friend FiniteStructure make_cyclic_group(std::uint64_t n);
  friend FiniteStructure make_f2_vector_space(std::uint64_t dim);

  void add_function(std::string name, Operation op);
  void add_relation(std::string name, Relation rel);

  std::size_t size_ = 0;
  FamilyKind family_ = FamilyKind::kPrimeField;
  std::uint64_t parameter_ = 0;
  Element unit_ = 0;
  std::uint64_t unit_order_ = 1;
  Signature signature_;
  std::vector<Operation> functions_;
  std::vector<Relation> relations_;
};

bool is_prime(std::uint64_t n);

// GF(p) with +, -, *, zero, one.
FiniteStructure make_prime_field(std::uint64_t p);
// GF(p^2) = GF(p)[t]/(t^2 - r), r the least non-residue; a + b*t has index
// a*p + b. Adds frob(x) = x^p and the unary relation insub = GF(p).
FiniteStructure make_extension_field(std::uint64_t p);
// Z_n with +, -, zero.
FiniteStructure make_cyclic_group(std::uint64_t n);
// F2^dim with +, -, zero; elements are bitmasks.
FiniteStructure make_f2_vector_space(std::uint64_t dim);

// Index of a + b*t in make_extension_field(p).
inline Element extension_element(std::uint64_t p, std::uint64_t a,
                                  std::uint64_t b) {
  return static_cast<Element>(a * p + b);
}

// Least quadratic non-residue mod an odd prime p.
std::uint64_t least_nonresidue(std::uint64_t p);

struct FamilySpec {
  FamilyKind kind = FamilyKind::kPrimeField;
  // Either an explicit parameter list or an inclusive range. For field
  // families the parameters are primes p, otherwise n or the dimension.
  std::vector<std::uint64_t> parameters;
  std::optional<std::uint64_t> min;
  std::optional<std::uint64_t> max;
};

// Parameters selected by the filter, in increasing order.
std::vector<std::uint64_t> family_parameters(const FamilySpec& spec);

// Builds the family in strictly increasing universe size. Throws
// EmptyFamilyError when the filter selects nothing.
std::vector<FiniteStructure> enumerate_family(const FamilySpec& spec);

FiniteStructure make_structure(FamilyKind kind, std::uint64_t parameter);

}  // namespace hexp

#endif  // HEXP_FINITEMODELS_H_
