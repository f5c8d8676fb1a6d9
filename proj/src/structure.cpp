#include "clopen/structure.hpp"

#include <algorithm>
#include <string_view>
#include <utility>

#include "clopen/errors.hpp"

namespace clopen {

Relation::Relation(unsigned arity) : arity_(arity) {
  if (arity != 1 && arity != 2) {
    throw InvariantError("predicates have arity 1 or 2");
  }
}

Relation Relation::unary(const std::set<Code>& elems) {
  Relation r(1);
  for (Code a : elems) r.insert(std::vector<Code>{a});
  return r;
}

Relation Relation::binary(const std::set<Edge>& pairs) {
  Relation r(2);
  for (const auto& [a, b] : pairs) r.insert(std::vector<Code>{a, b});
  return r;
}

void Relation::insert(std::span<const Code> tuple) {
  if (tuple.size() != arity_) throw InvariantError("tuple arity mismatch");
  for (Code c : tuple) {
    if (c >= (Code{1} << 32)) throw InvariantError("code too large for a predicate");
  }
  tuples_.emplace(tuple.begin(), tuple.end());
  index_.insert(arity_ == 1 ? tuple[0] : pack(tuple[0], tuple[1]));
}

bool Relation::contains(std::span<const Code> tuple) const {
  if (tuple.size() != arity_) return false;
  return arity_ == 1 ? contains(tuple[0]) : contains(tuple[0], tuple[1]);
}

Structure::Structure(Universe universe)
    : universe_(std::move(universe)), domain_(universe_.elements()) {}

bool Structure::in_domain(Code c) const {
  if (contiguous_) return c < domain_.size();
  return std::binary_search(domain_.begin(), domain_.end(), c);
}

Structure Structure::with_predicate(const std::string& symbol, Relation rel) const {
  return with_predicate(symbol, std::make_shared<const Relation>(std::move(rel)));
}

Structure Structure::with_predicate(const std::string& symbol,
                                    std::shared_ptr<const Relation> rel) const {
  for (const auto& t : rel->tuples()) {
    for (Code c : t) {
      if (!in_domain(c)) {
        throw InvariantError("predicate " + symbol + " mentions " + std::to_string(c) +
                             " outside the domain");
      }
    }
  }
  Structure s = *this;
  s.predicates_[symbol] = std::move(rel);
  return s;
}

Structure Structure::with_domain(const std::set<Code>& extra) const {
  Structure s = *this;
  std::set<Code> all(domain_.begin(), domain_.end());
  all.insert(extra.begin(), extra.end());
  s.domain_.assign(all.begin(), all.end());
  s.contiguous_ = s.domain_.empty() || s.domain_.back() + 1 == s.domain_.size();
  return s;
}

const Relation* Structure::predicate(const std::string& symbol) const {
  auto it = predicates_.find(symbol);
  return it == predicates_.end() ? nullptr : it->second.get();
}

Signature Structure::signature() const {
  Signature sig;
  for (const auto& [name, rel] : predicates_) sig[name] = rel->arity();
  return sig;
}

namespace {

// Variable bindings as a stack; inner quantifiers shadow outer ones.
using Env = std::vector<std::pair<std::string_view, Code>>;

class Evaluator {
 public:
  explicit Evaluator(const Structure& m) : m_(m) {}

  bool run(const Formula& f, Env& env) {
    switch (f.kind()) {
      case Formula::Kind::membership:
        return member(value(f.terms()[0], env), value(f.terms()[1], env));
      case Formula::Kind::equality:
        return value(f.terms()[0], env) == value(f.terms()[1], env);
      case Formula::Kind::predicate: {
        const Relation* rel = m_.predicate(f.symbol());
        if (!rel) {
          throw SignatureError("structure does not interpret '" + f.symbol() + "'");
        }
        if (rel->arity() != f.terms().size()) {
          throw SignatureError("arity mismatch for '" + f.symbol() + "'");
        }
        if (rel->arity() == 1) return rel->contains(value(f.terms()[0], env));
        return rel->contains(value(f.terms()[0], env), value(f.terms()[1], env));
      }
      case Formula::Kind::negation:
        return !run(*f.sub(), env);
      case Formula::Kind::conjunction:
        return run(*f.lhs(), env) && run(*f.rhs(), env);
      case Formula::Kind::exists: {
        env.emplace_back(f.bound_variable(), 0);
        bool found = false;
        for (Code b : m_.domain()) {
          env.back().second = b;
          if (run(*f.sub(), env)) {
            found = true;
            break;
          }
        }
        env.pop_back();
        return found;
      }
    }
    return false;
  }

 private:
  Code value(const Term& t, const Env& env) const {
    if (!t.is_variable()) {
      if (!m_.in_domain(t.value())) {
        throw MalformedInstanceError("constant #" + std::to_string(t.value()) +
                                     " lies outside the domain");
      }
      return t.value();
    }
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == t.name()) return it->second;
    }
    throw MalformedInstanceError("unbound variable '" + t.name() + "'");
  }

  const Structure& m_;
};

}  // namespace

bool eval(const Structure& m, const Formula& f, const Assignment& a) {
  Env env;
  env.reserve(a.size() + 4);
  for (const auto& [name, code] : a) {
    if (!m.in_domain(code)) {
      throw MalformedInstanceError("'" + name + "' is assigned #" + std::to_string(code) +
                                   " outside the domain");
    }
    env.emplace_back(name, code);
  }
  return Evaluator(m).run(f, env);
}

bool eval(const Structure& m, const FormulaInstance& inst) {
  return eval(m, *inst.formula(), inst.assignment());
}

FormulaInstance instantiate_body(const FormulaInstance& exists_inst, Code b) {
  const FormulaPtr& f = exists_inst.closed();
  if (f->kind() != Formula::Kind::exists) {
    throw InvariantError("not an existential: " + exists_inst.key());
  }
  return FormulaInstance(substitute(f->sub(), f->bound_variable(), b));
}

Code skolem_witness(const Structure& m, const FormulaInstance& inst) {
  const FormulaPtr& f = inst.closed();
  if (f->kind() != Formula::Kind::exists) {
    throw InvariantError("skolem_witness needs an existential, got " + inst.key());
  }
  for (Code b : m.domain()) {
    if (eval(m, *f->sub(), {{f->bound_variable(), b}})) return b;
  }
  throw NoWitnessError("no witness for " + inst.key());
}

}  // namespace clopen
