#ifndef CLOPEN_STRUCTURE_HPP
#define CLOPEN_STRUCTURE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "clopen/formula.hpp"
#include "clopen/relation.hpp"
#include "clopen/universe.hpp"

namespace clopen {

// Interpretation of a predicate symbol of arity 1 or 2.
class Relation {
 public:
  explicit Relation(unsigned arity = 2);
  static Relation unary(const std::set<Code>& elems);
  static Relation binary(const std::set<Edge>& pairs);

  unsigned arity() const { return arity_; }
  void insert(std::span<const Code> tuple);
  bool contains(std::span<const Code> tuple) const;
  bool contains(Code a) const { return index_.contains(a); }
  bool contains(Code a, Code b) const { return index_.contains(pack(a, b)); }
  const std::set<std::vector<Code>>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.arity_ == b.arity_ && a.tuples_ == b.tuples_;
  }

 private:
  static std::uint64_t pack(Code a, Code b) { return (a << 32) | b; }

  unsigned arity_;
  std::set<std::vector<Code>> tuples_;
  std::unordered_set<std::uint64_t> index_;
};

// A universe V_n with named class predicates. Quantifiers range over the
// domain: the universe's elements plus any extra codes (index sets that do
// not fit inside V_n). Copies share predicate storage.
class Structure {
 public:
  Structure() = default;
  explicit Structure(Universe universe);

  const Universe& universe() const { return universe_; }
  const std::vector<Code>& domain() const { return domain_; }
  bool in_domain(Code c) const;

  // Returns a copy with the symbol (re)bound. Throws InvariantError if a
  // tuple leaves the domain.
  Structure with_predicate(const std::string& symbol, Relation rel) const;
  Structure with_predicate(const std::string& symbol,
                           std::shared_ptr<const Relation> rel) const;
  Structure with_domain(const std::set<Code>& extra) const;

  const Relation* predicate(const std::string& symbol) const;
  const std::map<std::string, std::shared_ptr<const Relation>>& predicates() const {
    return predicates_;
  }
  Signature signature() const;

 private:
  Universe universe_;
  std::vector<Code> domain_;
  bool contiguous_ = true;  // domain_ == 0..n-1
  std::map<std::string, std::shared_ptr<const Relation>> predicates_;
};

// Tarskian evaluation with exhaustive quantifier scans over the domain.
// Throws MalformedInstanceError for unbound variables or constants outside the
// domain, SignatureError for symbols the structure does not interpret.
bool eval(const Structure& m, const Formula& f, const Assignment& a = {});
bool eval(const Structure& m, const FormulaInstance& inst);

// Least domain element b (in code order) making the body true.
// Throws NoWitnessError if none exists, InvariantError if inst is not an
// existential.
Code skolem_witness(const Structure& m, const FormulaInstance& inst);

// The instance obtained by instantiating an existential's body at b.
FormulaInstance instantiate_body(const FormulaInstance& exists_inst, Code b);

}  // namespace clopen

#endif  // CLOPEN_STRUCTURE_HPP
