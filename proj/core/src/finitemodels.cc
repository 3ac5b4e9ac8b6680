#include "hexp/finitemodels.h"

#include <algorithm>
#include <utility>

namespace hexp {
namespace {

// Binary operations on universes up to this size are stored as tables.
constexpr std::size_t kTabulateLimit = 256;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = result * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return result;
}

Operation maybe_tabulate(Operation op, std::size_t n) {
  if (n > kTabulateLimit || op.arity() != 2) return op;
  std::vector<Element> table(n * n);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) table[std::size_t{a} * n + b] = op.apply2(a, b);
  return Operation::from_table(2, n, std::move(table));
}

}  // namespace

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kPrimeField:
      return "prime-field";
    case FamilyKind::kExtensionField:
      return "quadratic-extension-field";
    case FamilyKind::kCyclicGroup:
      return "cyclic-group";
    case FamilyKind::kF2VectorSpace:
      return "f2-vector-space";
  }
  return "unknown";
}

std::optional<FamilyKind> parse_family_kind(std::string_view name) {
  for (FamilyKind k : {FamilyKind::kPrimeField, FamilyKind::kExtensionField,
                       FamilyKind::kCyclicGroup, FamilyKind::kF2VectorSpace}) {
    if (family_name(k) == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Signature

bool Signature::has_symbol(std::string_view name) const {
  auto same = [&](const SymbolDecl& d) { return d.name == name; };
  return std::any_of(functions_.begin(), functions_.end(), same) ||
         std::any_of(relations_.begin(), relations_.end(), same);
}

void Signature::add_function(std::string name, int arity) {
  if (arity < 0) throw Error("negative arity for symbol '" + name + "'");
  if (has_symbol(name)) throw Error("duplicate symbol '" + name + "'");
  functions_.push_back({std::move(name), arity});
}

void Signature::add_relation(std::string name, int arity) {
  if (arity < 0) throw Error("negative arity for symbol '" + name + "'");
  if (has_symbol(name)) throw Error("duplicate symbol '" + name + "'");
  relations_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Signature::function_index(std::string_view name) const {
  for (std::size_t i = 0; i < functions_.size(); ++i)
    if (functions_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Operation

Operation Operation::from_table(int arity, std::size_t universe,
                                std::vector<Element> table) {
  std::size_t expected = 1;
  for (int i = 0; i < arity; ++i) expected *= universe;
  if (table.size() != expected) throw Error("function table has wrong size");
  for (Element v : table)
    if (v >= universe) throw Error("function table leaves the universe");
  Operation op;
  op.kernel_ = Kernel::kTable;
  op.arity_ = arity;
  op.universe_ = universe;
  op.table_ = std::move(table);
  return op;
}

Operation Operation::from_kernel(Kernel kernel, int arity, std::uint32_t p,
                                 std::uint32_t r) {
  Operation op;
  op.kernel_ = kernel;
  op.arity_ = arity;
  op.p_ = p;
  op.r_ = r;
  return op;
}

Operation Operation::constant(Element value) {
  Operation op;
  op.kernel_ = Kernel::kConstant;
  op.arity_ = 0;
  op.constant_ = value;
  return op;
}

Element Operation::apply_kernel(Element a, Element b) const {
  const std::uint64_t p = p_;
  switch (kernel_) {
    case Kernel::kConstant:
      return constant_;
    case Kernel::kAddMod: {
      const std::uint64_t sum = std::uint64_t{a} + b;
      return static_cast<Element>(sum >= p ? sum - p : sum);
    }
    case Kernel::kSubMod:
      return static_cast<Element>(a >= b ? a - b : std::uint64_t{a} + p - b);
    case Kernel::kMulMod:
      return static_cast<Element>(std::uint64_t{a} * b % p);
    case Kernel::kXor:
      return a ^ b;
    case Kernel::kExtAdd: {
      const std::uint64_t a0 = a / p, a1 = a % p, b0 = b / p, b1 = b % p;
      return static_cast<Element>(((a0 + b0) % p) * p + (a1 + b1) % p);
    }
    case Kernel::kExtSub: {
      const std::uint64_t a0 = a / p, a1 = a % p, b0 = b / p, b1 = b % p;
      return static_cast<Element>(((a0 + p - b0) % p) * p + (a1 + p - b1) % p);
    }
    case Kernel::kExtMul: {
      // (a0 + a1 t)(b0 + b1 t) = (a0 b0 + r a1 b1) + (a0 b1 + a1 b0) t
      const std::uint64_t a0 = a / p, a1 = a % p, b0 = b / p, b1 = b % p;
      const std::uint64_t c0 = (a0 * b0 + (a1 * b1 % p) * r_) % p;
      const std::uint64_t c1 = (a0 * b1 + a1 * b0) % p;
      return static_cast<Element>(c0 * p + c1);
    }
    case Kernel::kTable:
      break;
  }
  return 0;
}

Element Operation::operator()(std::span<const Element> args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw Error("operation applied to wrong number of arguments");
  if (kernel_ == Kernel::kTable) {
    std::size_t idx = 0;
    for (Element a : args) idx = idx * universe_ + a;
    return table_[idx];
  }
  switch (arity_) {
    case 0:
      return apply_kernel(0, 0);
    case 1:
      return apply_kernel(args[0], 0);
    default:
      return apply_kernel(args[0], args[1]);
  }
}

// ---------------------------------------------------------------------------
// Relation

Relation::Relation(int arity, std::size_t universe,
                   std::vector<std::uint8_t> members)
    : arity_(arity), universe_(universe), members_(std::move(members)) {
  std::size_t expected = 1;
  for (int i = 0; i < arity; ++i) expected *= universe;
  if (members_.size() != expected) throw Error("relation table has wrong size");
}

bool Relation::contains(std::span<const Element> args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw Error("relation applied to wrong number of arguments");
  std::size_t idx = 0;
  for (Element a : args) idx = idx * universe_ + a;
  return members_[idx] != 0;
}

std::size_t Relation::cardinality() const {
  return static_cast<std::size_t>(
      std::count_if(members_.begin(), members_.end(),
                    [](std::uint8_t m) { return m != 0; }));
}

// ---------------------------------------------------------------------------
// FiniteStructure

std::string FiniteStructure::name() const {
  const std::string k = std::to_string(parameter_);
  switch (family_) {
    case FamilyKind::kPrimeField:
      return "GF(" + k + ")";
    case FamilyKind::kExtensionField:
      return "GF(" + k + "^2)";
    case FamilyKind::kCyclicGroup:
      return "Z_" + k;
    case FamilyKind::kF2VectorSpace:
      return "F2^" + k;
  }
  return "?";
}

const Operation& FiniteStructure::function(std::string_view name) const {
  auto idx = signature_.function_index(name);
  if (!idx) throw Error("no function symbol '" + std::string(name) + "'");
  return functions_[*idx];
}

const Relation& FiniteStructure::relation(std::string_view name) const {
  auto idx = signature_.relation_index(name);
  if (!idx) throw Error("no relation symbol '" + std::string(name) + "'");
  return relations_[*idx];
}

Element FiniteStructure::numeral(std::uint64_t k) const {
  const std::uint64_t reps = k % unit_order_;
  if (reps == 0 || size_ == 1) return 0;
  const Operation& plus = function("+");
  Element acc = unit_;
  for (std::uint64_t i = 1; i < reps; ++i) acc = plus.apply2(acc, unit_);
  return acc;
}

void FiniteStructure::add_function(std::string name, Operation op) {
  signature_.add_function(std::move(name), op.arity());
  functions_.push_back(std::move(op));
}

void FiniteStructure::add_relation(std::string name, Relation rel) {
  signature_.add_relation(std::move(name), rel.arity());
  relations_.push_back(std::move(rel));
}

void FiniteStructure::validate() const {
  const std::size_t n = size_;
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    const Operation& op = functions_[f];
    const std::string& sym = signature_.functions()[f].name;
    auto bad = [&] { throw Error("function '" + sym + "' leaves the universe of " + name()); };
    switch (op.arity()) {
      case 0:
        if (op(std::span<const Element>{}) >= n) bad();
        break;
      case 1:
        for (Element a = 0; a < n; ++a)
          if (op.apply1(a) >= n) bad();
        break;
      case 2:
        for (Element a = 0; a < n; ++a)
          for (Element b = 0; b < n; ++b)
            if (op.apply2(a, b) >= n) bad();
        break;
      default:
        throw Error("unsupported arity in validate");
    }
  }
  if (family_ != FamilyKind::kExtensionField) return;

  const Operation& frob = function("frob");
  const Operation& plus = function("+");
  const Operation& times = function("*");
  const Relation& insub = relation("insub");
  std::size_t fixed = 0;
  for (Element x = 0; x < n; ++x) {
    if (frob.apply1(frob.apply1(x)) != x) throw Error("frob is not an involution");
    const bool is_fixed = frob.apply1(x) == x;
    if (is_fixed != insub.contains1(x)) throw Error("insub differs from Fix(frob)");
    fixed += is_fixed ? 1 : 0;
  }
  if (fixed * fixed != n) throw Error("insub does not have sqrt(n) elements");
  // Automorphism check is quadratic; only run it where that is cheap.
  if (parameter_ > 13) return;
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      if (frob.apply1(plus.apply2(x, y)) != plus.apply2(frob.apply1(x), frob.apply1(y)) ||
          frob.apply1(times.apply2(x, y)) != times.apply2(frob.apply1(x), frob.apply1(y))) {
        throw Error("frob is not a field automorphism");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Constructors

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t least_nonresidue(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw Error("least_nonresidue needs an odd prime");
  for (std::uint64_t r = 2; r < p; ++r)
    if (pow_mod(r, (p - 1) / 2, p) == p - 1) return r;
  throw Error("no quadratic non-residue found");
}

FiniteStructure make_prime_field(std::uint64_t p) {
  if (!is_prime(p)) throw ConfigError(std::to_string(p) + " is not prime");
  if (p > (1u << 16)) throw ConfigError("field too large: p=" + std::to_string(p));
  const auto q = static_cast<std::uint32_t>(p);
  FiniteStructure m;
  m.size_ = p;
  m.family_ = FamilyKind::kPrimeField;
  m.parameter_ = p;
  m.unit_ = 1;
  m.unit_order_ = p;
  using K = Operation::Kernel;
  m.add_function("+", maybe_tabulate(Operation::from_kernel(K::kAddMod, 2, q), p));
  m.add_function("-", maybe_tabulate(Operation::from_kernel(K::kSubMod, 2, q), p));
  m.add_function("*", maybe_tabulate(Operation::from_kernel(K::kMulMod, 2, q), p));
  m.add_function("zero", Operation::constant(0));
  m.add_function("one", Operation::constant(1));
  return m;
}

FiniteStructure make_extension_field(std::uint64_t p) {
  if (p == 2)
    throw ConfigError("quadratic extensions need an odd prime (characteristic 2 unsupported)");
  if (!is_prime(p)) throw ConfigError(std::to_string(p) + " is not prime");
  if (p > 256) throw ConfigError("extension field too large: p=" + std::to_string(p));
  const std::uint64_t r = least_nonresidue(p);
  const std::size_t n = p * p;
  const auto q = static_cast<std::uint32_t>(p);
  FiniteStructure m;
  m.size_ = n;
  m.family_ = FamilyKind::kExtensionField;
  m.parameter_ = p;
  m.unit_ = extension_element(p, 1, 0);
  m.unit_order_ = p;
  using K = Operation::Kernel;
  const Operation mul = Operation::from_kernel(K::kExtMul, 2, q, static_cast<std::uint32_t>(r));
  m.add_function("+", maybe_tabulate(Operation::from_kernel(K::kExtAdd, 2, q), n));
  m.add_function("-", maybe_tabulate(Operation::from_kernel(K::kExtSub, 2, q), n));
  m.add_function("*", maybe_tabulate(mul, n));
  m.add_function("zero", Operation::constant(0));
  m.add_function("one", Operation::constant(m.unit_));

  // frob(x) = x^p by square-and-multiply in the field.
  std::vector<Element> frob(n);
  for (Element x = 0; x < n; ++x) {
    Element result = m.unit_, base = x;
    for (std::uint64_t e = p; e > 0; e >>= 1) {
      if (e & 1) result = mul.apply2(result, base);
      base = mul.apply2(base, base);
    }
    frob[x] = result;
  }
  std::vector<std::uint8_t> insub(n, 0);
  for (std::uint64_t a = 0; a < p; ++a) insub[extension_element(p, a, 0)] = 1;
  m.add_function("frob", Operation::from_table(1, n, std::move(frob)));
  m.add_relation("insub", Relation(1, n, std::move(insub)));
  m.validate();
  return m;
}

FiniteStructure make_cyclic_group(std::uint64_t n) {
  if (n < 1) throw ConfigError("cyclic group order must be >= 1");
  if (n > (1u << 16)) throw ConfigError("cyclic group too large");
  const auto q = static_cast<std::uint32_t>(n);
  FiniteStructure m;
  m.size_ = n;
  m.family_ = FamilyKind::kCyclicGroup;
  m.parameter_ = n;
  m.unit_ = n > 1 ? 1 : 0;
  m.unit_order_ = n;
  using K = Operation::Kernel;
  m.add_function("+", maybe_tabulate(Operation::from_kernel(K::kAddMod, 2, q), n));
  m.add_function("-", maybe_tabulate(Operation::from_kernel(K::kSubMod, 2, q), n));
  m.add_function("zero", Operation::constant(0));
  return m;
}

FiniteStructure make_f2_vector_space(std::uint64_t dim) {
  if (dim < 1) throw ConfigError("vector space dimension must be >= 1");
  if (dim > 16) throw ConfigError("vector space too large");
  const std::size_t n = std::size_t{1} << dim;
  FiniteStructure m;
  m.size_ = n;
  m.family_ = FamilyKind::kF2VectorSpace;
  m.parameter_ = dim;
  m.unit_ = 1;
  m.unit_order_ = 2;
  using K = Operation::Kernel;
  m.add_function("+", maybe_tabulate(Operation::from_kernel(K::kXor, 2, 0), n));
  m.add_function("-", maybe_tabulate(Operation::from_kernel(K::kXor, 2, 0), n));
  m.add_function("zero", Operation::constant(0));
  return m;
}

FiniteStructure make_structure(FamilyKind kind, std::uint64_t parameter) {
  switch (kind) {
    case FamilyKind::kPrimeField:
      return make_prime_field(parameter);
    case FamilyKind::kExtensionField:
      return make_extension_field(parameter);
    case FamilyKind::kCyclicGroup:
      return make_cyclic_group(parameter);
    case FamilyKind::kF2VectorSpace:
      return make_f2_vector_space(parameter);
  }
  throw ConfigError("unknown family");
}

std::vector<std::uint64_t> family_parameters(const FamilySpec& spec) {
  std::vector<std::uint64_t> params;
  const bool fields = spec.kind == FamilyKind::kPrimeField ||
                      spec.kind == FamilyKind::kExtensionField;
  if (!spec.parameters.empty()) {
    if (spec.min || spec.max)
      throw ConfigError("family filter: give either a parameter list or a range, not both");
    params = spec.parameters;
    std::sort(params.begin(), params.end());
    if (std::adjacent_find(params.begin(), params.end()) != params.end())
      throw ConfigError("family filter: duplicate parameter");
  } else if (spec.min && spec.max) {
    for (std::uint64_t v = *spec.min; v <= *spec.max; ++v) {
      if (fields && !is_prime(v)) continue;
      if (spec.kind == FamilyKind::kExtensionField && v == 2) continue;
      params.push_back(v);
    }
  } else if (spec.min || spec.max) {
    throw ConfigError("family filter: a range needs both min and max");
  }
  if (params.empty())
    throw EmptyFamilyError("family filter for " + std::string(family_name(spec.kind)) +
                           " selects no structure");
  return params;
}

std::vector<FiniteStructure> enumerate_family(const FamilySpec& spec) {
  std::vector<FiniteStructure> family;
  for (std::uint64_t v : family_parameters(spec)) family.push_back(make_structure(spec.kind, v));
  return family;
}

}  // namespace hexp
