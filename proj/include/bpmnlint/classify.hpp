#pragma once

#include <vector>

#include "bpmnlint/graph.hpp"

namespace bpmnlint {

/// Compact per-node concept membership (asserted plus derived atoms).
class Membership {
 public:
  Membership() = default;
  Membership(size_t nodes, size_t concepts);

  bool has(NodeId n, ConceptId c) const {
    return (bits_[n * stride_ + (c >> 6)] >> (c & 63)) & 1;
  }
  bool add(NodeId n, ConceptId c) {  // returns true when newly set
    uint64_t& w = bits_[n * stride_ + (c >> 6)];
    uint64_t m = 1ull << (c & 63);
    if (w & m) return false;
    w |= m;
    return true;
  }
  std::vector<ConceptId> atoms_of(NodeId n, size_t concept_count) const;
  bool operator==(const Membership& o) const { return bits_ == o.bits_; }

 private:
  size_t stride_ = 0;
  std::vector<uint64_t> bits_;
};

/// Stratification of the derived concepts: positive dependencies may stay in a
/// layer, negative ones point strictly down.
struct StratumPlan {
  struct Dep {
    ConceptId from = kNoId;  // derived concept
    ConceptId to = kNoId;    // concept it reads
    bool negative = false;
  };
  std::vector<std::vector<ConceptId>> layers;  // each sorted by concept name
  std::vector<Dep> deps;

  size_t layer_of(ConceptId c) const;  // layers.size() when not derived
};

class StratifyError : public TboxError {
 public:
  StratifyError(std::string what, std::vector<std::string> cycle)
      : TboxError(std::move(what)), cycle(std::move(cycle)) {}
  std::vector<std::string> cycle;  // sorted concept names on the negative cycle
};

/// Closed-world truth of `expr` at `subject`. Pure; membership must already
/// cover every derived concept the expression reads.
bool eval_expr(const ConceptExpr& expr, NodeId subject, const InstanceGraph& graph,
               const Membership& membership);

StratumPlan stratify(const Tbox& tbox);

/// Layered fixpoint: definitions derive lhs from rhs, coverages derive lhs
/// from any disjunct, enumerations assert their listed individuals.
Membership classify(const InstanceGraph& graph, const Tbox& tbox, const StratumPlan& plan);

}  // namespace bpmnlint
